//! Constant calibrations of half-spaces.

use crate::anisotropy::{Anisotropy, Kind};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};

/// A vector `ζ` with `Φ(ζ) = 1` and `ν·ζ = Φ°(ν)`. The constant field `ζ`
/// calibrates the half-space `{ν·x < c}`.
///
/// On polytopes the centroid of the maximizing vertices is returned, so that
/// ties resolve toward zero coordinates.
pub fn calibration_halfspace(nu: &[f64], norm: &Anisotropy) -> Result<Vec<f64>> {
    if nu.len() != norm.dim() {
        return Err(Error::dims("norm", norm.dim(), "normal", nu.len()));
    }
    if nu.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("normal"));
    }
    let len = norm2(nu);
    if len == 0.0 {
        return Err(Error::Invalid("the normal must be nonzero".into()));
    }
    if let Some(p) = norm.to_polytope() {
        let best = p.maximizing_vertices(nu);
        let k = best.len() as f64;
        let mut z = vec![0.0; nu.len()];
        for v in best {
            z.iter_mut().zip(v).for_each(|(a, b)| *a += b / k);
        }
        return Ok(z);
    }
    Ok(match norm.kind() {
        Kind::Euclidean => nu.iter().map(|v| v / len).collect(),
        Kind::PNorm(p) => {
            // ζ_i = sign ν_i |ν_i|^{q−1} / ‖ν‖_q^{q−1}
            let q = *p / (*p - 1.0);
            let nq = norm.eval_dual(nu);
            nu.iter().map(|v| v.signum() * (v.abs() / nq).powf(q - 1.0)).collect()
        }
        Kind::Quadratic(q) => {
            let d = norm.eval_dual(nu);
            q.inverse().iter().map(|row| dot(row, nu) / d).collect()
        }
        Kind::Cylindrical(_) | Kind::Conical(_) | Kind::Omega(..) => {
            let (spec, base) = norm.omega_form().expect("composed kind");
            let n = nu.len() - 1;
            let (hat, last) = (&nu[..n], nu[n]);
            let (s, t) = spec.calibrate(base.eval_dual(hat), last.abs());
            let zhat = if norm2(hat) > 0.0 {
                calibration_halfspace(hat, base)?
            } else {
                let mut e = vec![0.0; n];
                e[0] = 1.0;
                let b = base.eval(&e);
                e[0] = 1.0 / b;
                e
            };
            let mut z: Vec<f64> = zhat.iter().map(|v| s * v).collect();
            z.push(if last < 0.0 { -t } else { t });
            z
        }
        Kind::Polytope(_) => unreachable!("handled above"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::OmegaSpec;

    fn check(nu: &[f64], norm: &Anisotropy) -> Vec<f64> {
        let z = calibration_halfspace(nu, norm).unwrap();
        assert!((norm.eval(&z) - 1.0).abs() < 1e-9, "{z:?}");
        assert!((dot(nu, &z) - norm.eval_dual(nu)).abs() < 1e-9, "{z:?}");
        z
    }

    #[test]
    fn cube_vertices() {
        let linf = Anisotropy::p_norm(3, f64::INFINITY).unwrap();
        assert_eq!(check(&[1.0, 0.0, 0.0], &linf), vec![1.0, 0.0, 0.0]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(check(&[r, r, 0.0], &linf), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn smooth_and_composed() {
        let nu = [0.6, -0.8];
        assert_eq!(check(&nu, &Anisotropy::euclidean(2).unwrap()), nu.to_vec());
        check(&nu, &Anisotropy::p_norm(2, 3.0).unwrap());
        check(&nu, &Anisotropy::quadratic(vec![vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap());
        check(&nu, &Anisotropy::hexagon(0.3).unwrap());
        let nu3 = [0.48, 0.64, -0.6];
        for base in [Anisotropy::euclidean(2).unwrap(), Anisotropy::p_norm(2, 1.5).unwrap()] {
            check(&nu3, &Anisotropy::cylindrical(base.clone()));
            check(&nu3, &Anisotropy::conical(base.clone()));
            check(&nu3, &Anisotropy::omega(OmegaSpec::P(3.0), base).unwrap());
        }
        check(&[0.0, 0.0, 1.0], &Anisotropy::cylindrical(Anisotropy::euclidean(2).unwrap()));
    }
}
