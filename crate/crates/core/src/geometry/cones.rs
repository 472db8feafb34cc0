//! Pairs of half-spaces through the origin and their intersection/union
//! cones.

use serde::Serialize;

use super::perimeter::perimeter;
use super::set::{PolyhedralSet, SetExpr};
use super::window::Window;
use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, scale, sub};

const TOL: f64 = 1e-9;

/// Angle between unit vectors, accurate near 0 and π.
pub fn angle(u: &[f64], v: &[f64]) -> f64 {
    let d: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let s: f64 = u.iter().zip(v).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
    2.0 * d.atan2(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeReport {
    /// `∂H₁ ∩ ∂H₂ ⊂ {t = 0}`.
    pub edge_horizontal: bool,
    pub cond_a: bool,
    pub cond_b: bool,
    /// `tan αᵢ`; `None` stands for `+∞` (vertical boundary).
    pub lambda: [Option<f64>; 2],
    /// `ν₁ = ν₂`.
    pub trivial: bool,
    /// `ν₁ = −ν₂`.
    pub degenerate: bool,
    /// Planar roof configuration: the vertical lies strictly between the two
    /// normals.
    pub roof: bool,
}

impl ConeReport {
    /// The hypotheses under which both cones minimize every cylindrical
    /// perimeter.
    pub fn minimal_by_hypotheses(&self) -> bool {
        self.trivial || (!self.degenerate && self.edge_horizontal && self.cond_a && self.cond_b)
    }
}

#[derive(Clone, Debug)]
pub struct ConePair {
    pub normals: [Vec<f64>; 2],
    /// `H₁ ∩ H₂`.
    pub intersection: PolyhedralSet,
    /// `H₁ ∪ H₂`.
    pub union: PolyhedralSet,
    pub report: ConeReport,
}

fn unit(v: &[f64], what: &str) -> Result<Vec<f64>> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("cone normal"));
    }
    let l = norm2(v);
    if (l - 1.0).abs() > 1e-6 {
        return Err(Error::Invalid(format!("{what} must be a unit vector, has length {l}")));
    }
    Ok(scale(v, 1.0 / l))
}

fn tan_alpha(nu: &[f64]) -> Option<f64> {
    let c = *nu.last().unwrap();
    if c.abs() <= TOL {
        None
    } else {
        Some((1.0 - c * c).max(0.0).sqrt() / c)
    }
}

fn roof_oriented(n1: &[f64], n2: &[f64]) -> bool {
    let e = [0.0, 1.0];
    let (c1, c2) = (n1[1], n2[1]);
    let b = dot(n1, n2) >= -TOL
        && c2 >= c1 - TOL
        && c1 >= -TOL
        && (c2 < 1.0 - TOL || (c1 > TOL && c1 < 1.0 - TOL));
    let d = (angle(n1, n2) - angle(n1, &e) - angle(&e, n2)).abs() <= TOL;
    b && d
}

fn report(n1: &[f64], n2: &[f64]) -> ConeReport {
    let m = n1.len();
    let mut e = vec![0.0; m];
    e[m - 1] = 1.0;
    let trivial = n1.iter().zip(n2).all(|(a, b)| (a - b).abs() <= TOL);
    let degenerate = n1.iter().zip(n2).all(|(a, b)| (a + b).abs() <= TOL);
    let lambda = [tan_alpha(n1), tan_alpha(n2)];
    if trivial {
        return ConeReport {
            edge_horizontal: true,
            cond_a: true,
            cond_b: true,
            lambda,
            trivial,
            degenerate: false,
            roof: false,
        };
    }
    // e ∈ span(ν₁, ν₂): Gram–Schmidt residual
    let edge_horizontal = if degenerate {
        false
    } else {
        let w = sub(n2, &scale(n1, dot(n1, n2)));
        let w = scale(&w, 1.0 / norm2(&w));
        let r = sub(&sub(&e, &scale(n1, dot(n1, &e))), &scale(&w, dot(&w, &e)));
        norm2(&r) <= TOL
    };
    let (c1, c2) = (n1[m - 1], n2[m - 1]);
    let cond_a = dot(n1, n2) >= -TOL && c2 >= c1 - TOL && c1 >= -TOL;
    let cond_b = (angle(n1, n2) + angle(n2, &e) - angle(n1, &e)).abs() <= TOL;
    let roof = m == 2
        && !degenerate
        && !cond_b
        && (roof_oriented(n1, n2) || roof_oriented(n2, n1));
    ConeReport {
        edge_horizontal,
        cond_a,
        cond_b,
        lambda,
        trivial,
        degenerate,
        roof,
    }
}

/// `E = H₁ ∩ H₂` and `F = H₁ ∪ H₂` with `Hᵢ = {νᵢ·x < 0}`, inside `bound`
/// (default `(−1,1)^m`).
pub fn build_cone_pair(nu1: &[f64], nu2: &[f64], bound: Option<Window>) -> Result<ConePair> {
    if nu1.len() != nu2.len() {
        return Err(Error::dims("ν₁", nu1.len(), "ν₂", nu2.len()));
    }
    if !(2..=3).contains(&nu1.len()) {
        return Err(Error::Unsupported(format!("cones in dimension {}", nu1.len())));
    }
    let n1 = unit(nu1, "ν₁")?;
    let n2 = unit(nu2, "ν₂")?;
    let bound = match bound {
        Some(w) if w.dim() != n1.len() => return Err(Error::dims("window", w.dim(), "ν", n1.len())),
        Some(w) => w,
        None => Window::cube(n1.len(), 1.0)?,
    };
    let h1 = SetExpr::half(n1.clone(), 0.0)?;
    let h2 = SetExpr::half(n2.clone(), 0.0)?;
    let report = report(&n1, &n2);
    Ok(ConePair {
        intersection: PolyhedralSet::from_expr(SetExpr::And(vec![h1.clone(), h2.clone()]), bound.clone())?,
        union: PolyhedralSet::from_expr(SetExpr::Or(vec![h1, h2]), bound)?,
        normals: [n1, n2],
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoofCut {
    /// `P_Φ(E, A) − P_Φ(E \ T, A)` from the clipped facets.
    pub delta: f64,
    /// `a₁Φ°(ν₁) + a₂Φ°(ν₂) − bΦ°(e₂)`.
    pub closed_form: f64,
    pub a: [f64; 2],
    pub b: f64,
    /// The triangle `T` cut off by the line `{t = −d}`.
    pub triangle: [[f64; 2]; 3],
    pub window: Window,
}

/// Perimeter saved by cutting the triangle below the apex of a planar roof
/// cone.
pub fn roof_cut_delta(nu1: &[f64], nu2: &[f64], depth: f64, norm: &Anisotropy) -> Result<RoofCut> {
    if !(depth > 0.0 && depth.is_finite()) {
        return Err(Error::Invalid(format!("depth must be positive, got {depth}")));
    }
    if nu1.len() != 2 || nu2.len() != 2 {
        return Err(Error::Unsupported("roof cuts are planar".into()));
    }
    if norm.dim() != 2 {
        return Err(Error::dims("norm", norm.dim(), "roof", 2));
    }
    let n1 = unit(nu1, "ν₁")?;
    let n2 = unit(nu2, "ν₂")?;
    if !report(&n1, &n2).roof {
        return Err(Error::Invalid(format!("{n1:?}, {n2:?} is not a roof configuration")));
    }
    // ∂Hᵢ meets {t = −d} at x = d·νᵢₜ/νᵢₓ
    let p: Vec<[f64; 2]> = [&n1, &n2]
        .iter()
        .map(|n| [depth * n[1] / n[0], -depth])
        .collect();
    let a = [norm2(&p[0]), norm2(&p[1])];
    let b = (p[0][0] - p[1][0]).abs();
    let closed_form = a[0] * norm.eval_dual(&n1) + a[1] * norm.eval_dual(&n2) - b * norm.eval_dual(&[0.0, 1.0]);

    let xmin = p[0][0].min(p[1][0]);
    let xmax = p[0][0].max(p[1][0]);
    let window = Window::new(vec![xmin - depth, -2.0 * depth], vec![xmax + depth, depth])?;
    let h1 = SetExpr::half(n1.clone(), 0.0)?;
    let h2 = SetExpr::half(n2.clone(), 0.0)?;
    let e = PolyhedralSet::from_expr(SetExpr::And(vec![h1.clone(), h2.clone()]), window.clone())?;
    let cut = PolyhedralSet::from_expr(
        SetExpr::And(vec![h1, h2, SetExpr::half(vec![0.0, 1.0], -depth)?]),
        window.clone(),
    )?;
    let delta = perimeter(&e, norm, &window)? - perimeter(&cut, norm, &window)?;
    Ok(RoofCut {
        delta,
        closed_form,
        a,
        b,
        triangle: [[0.0, 0.0], p[0], p[1]],
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn minimal_pair() {
        let c = build_cone_pair(&[R, R], &[0.0, 1.0], None).unwrap();
        assert!(c.report.cond_a && c.report.cond_b && c.report.edge_horizontal);
        assert!((c.report.lambda[0].unwrap() - 1.0).abs() < 1e-12);
        assert!(c.report.lambda[1].unwrap().abs() < 1e-12);
        assert!(!c.report.roof);
    }

    #[test]
    fn roof_flag_and_cut() {
        let c = build_cone_pair(&[-R, R], &[R, R], None).unwrap();
        assert!(c.report.roof && !c.report.cond_b);
        let l1 = Anisotropy::p_norm(2, f64::INFINITY).unwrap();
        let cut = roof_cut_delta(&[-R, R], &[R, R], 1.0, &l1).unwrap();
        assert!((cut.closed_form - 2.0).abs() < 1e-12);
        assert!((cut.delta - 2.0).abs() < 1e-9, "{}", cut.delta);
    }

    #[test]
    fn equal_and_opposite() {
        let c = build_cone_pair(&[0.0, 1.0], &[0.0, 1.0], None).unwrap();
        assert!(c.report.trivial && c.report.minimal_by_hypotheses());
        let c = build_cone_pair(&[0.0, 1.0], &[0.0, -1.0], None).unwrap();
        assert!(c.report.degenerate && !c.report.minimal_by_hypotheses());
    }

    #[test]
    fn non_roof_rejected() {
        let l1 = Anisotropy::p_norm(2, f64::INFINITY).unwrap();
        assert!(roof_cut_delta(&[R, R], &[0.0, 1.0], 1.0, &l1).is_err());
    }
}
