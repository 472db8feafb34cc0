//! Norms on ℝ^m: construction, evaluation, exact duals and horizontal
//! restrictions.
//!
//! The last coordinate is treated as the vertical one wherever a norm is
//! split into a horizontal part `ξ̂ ∈ ℝ^{m-1}` and a vertical part
//! `ξ_{m}`.

mod omega;
mod polytope;
mod predicates;

pub use omega::{omega_dual, OmegaSpec};
pub use polytope::{Polytope, MAX_POLYTOPE_DIM};
pub use predicates::{
    check_generalized_graph, check_generalized_graph_sampled, check_partial_monotonicity,
    check_partial_monotonicity_sampled, restriction_gap, restriction_gap_sup, GapReport,
    Method, PredicateReport, PredicateVerdict, SamplerParams,
};

use omega::{check_exponent, conjugate_exponent};

use crate::error::{Error, Result};
use crate::linalg::{dot, invert, norm2};

/// Positive definite quadratic form `ξ ↦ √(ξᵀAξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic {
    matrix: Vec<Vec<f64>>,
    inverse: Vec<Vec<f64>>,
}

impl Quadratic {
    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn inverse(&self) -> &[Vec<f64>] {
        &self.inverse
    }

    fn form(m: &[Vec<f64>], x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in m.iter().enumerate() {
            s += x[i] * dot(row, x);
        }
        s.max(0.0).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Euclidean,
    PNorm(f64),
    Quadratic(Quadratic),
    Polytope(Polytope),
    Cylindrical(Box<Anisotropy>),
    Conical(Box<Anisotropy>),
    Omega(OmegaSpec, Box<Anisotropy>),
}

/// Coarse shape class of the unit ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Polyhedral,
    Smooth,
    Composed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Anisotropy {
    dim: usize,
    kind: Kind,
}

fn pnorm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return norm2(x);
    }
    let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

impl Anisotropy {
    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Anisotropy {
            dim,
            kind: Kind::Euclidean,
        })
    }

    /// `ℓ^p` on ℝ^dim; pass `f64::INFINITY` for the max norm.
    pub fn p_norm(dim: usize, p: f64) -> Result<Self> {
        Self::check_dim(dim)?;
        check_exponent(p)?;
        Ok(Anisotropy {
            dim,
            kind: Kind::PNorm(p),
        })
    }

    pub fn quadratic(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let dim = matrix.len();
        Self::check_dim(dim)?;
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidNorm("quadratic form matrix must be square".into()));
        }
        if matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("quadratic form matrix"));
        }
        let scale = matrix.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..dim {
            for j in 0..i {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidNorm("quadratic form matrix must be symmetric".into()));
                }
            }
        }
        // Cholesky as a positive definiteness test.
        let mut l = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    let d = matrix[i][i] - s;
                    if d <= 1e-14 * scale.max(1.0) {
                        return Err(Error::InvalidNorm(
                            "quadratic form matrix must be positive definite".into(),
                        ));
                    }
                    l[i][j] = d.sqrt();
                } else {
                    l[i][j] = (matrix[i][j] - s) / l[j][j];
                }
            }
        }
        let inverse = invert(&matrix)
            .ok_or_else(|| Error::InvalidNorm("quadratic form matrix is singular".into()))?;
        Ok(Anisotropy {
            dim,
            kind: Kind::Quadratic(Quadratic { matrix, inverse }),
        })
    }

    /// Minkowski functional of `conv(vertices)`.
    pub fn polytope(vertices: &[Vec<f64>]) -> Result<Self> {
        let p = Polytope::from_vertices(vertices)?;
        Ok(Self::from_polytope(p))
    }

    pub fn from_polytope(p: Polytope) -> Self {
        Anisotropy {
            dim: p.dim(),
            kind: Kind::Polytope(p),
        }
    }

    /// `max{φ(ξ̂), |ξ_{n+1}|}`.
    pub fn cylindrical(base: Anisotropy) -> Self {
        Anisotropy {
            dim: base.dim + 1,
            kind: Kind::Cylindrical(Box::new(base)),
        }
    }

    /// `φ(ξ̂) + |ξ_{n+1}|`.
    pub fn conical(base: Anisotropy) -> Self {
        Anisotropy {
            dim: base.dim + 1,
            kind: Kind::Conical(Box::new(base)),
        }
    }

    /// `ω(φ(ξ̂), |ξ_{n+1}|)`.
    pub fn omega(spec: OmegaSpec, base: Anisotropy) -> Result<Self> {
        spec.validate()?;
        Ok(Anisotropy {
            dim: base.dim + 1,
            kind: Kind::Omega(spec, Box::new(base)),
        })
    }

    /// The parallelogram norm `Φ_α` whose unit ball has sides on
    /// `ξ₂ = ±1` and on the lines through `(±1, 0)` at angle `α` with the
    /// horizontal axis. Its restriction to `ξ₂ = 0` is `|ξ₁|`.
    pub fn parallelogram(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::InvalidNorm(format!("angle α = {alpha} outside (0, π)")));
        }
        let c = 1.0 / alpha.tan();
        Self::polytope(&[
            vec![1.0 + c, 1.0],
            vec![1.0 - c, -1.0],
            vec![-1.0 + c, 1.0],
            vec![-1.0 - c, -1.0],
        ])
    }

    /// Hexagon `K_ε` with vertices `(±1,0)`, `±(ε,−ε)`, `(0,±1)`.
    pub fn hexagon(eps: f64) -> Result<Self> {
        Self::polytope(&[
            vec![1.0, 0.0],
            vec![eps, -eps],
            vec![0.0, -1.0],
            vec![-1.0, 0.0],
            vec![-eps, eps],
            vec![0.0, 1.0],
        ])
    }

    fn check_dim(dim: usize) -> Result<()> {
        if dim == 0 {
            Err(Error::InvalidNorm("dimension must be at least 1".into()))
        } else {
            Ok(())
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// The base norm of a composed kind.
    pub fn base(&self) -> Option<&Anisotropy> {
        match &self.kind {
            Kind::Cylindrical(b) | Kind::Conical(b) | Kind::Omega(_, b) => Some(b),
            _ => None,
        }
    }

    /// Composed kinds as a combination rule over their base.
    pub fn omega_form(&self) -> Option<(OmegaSpec, &Anisotropy)> {
        match &self.kind {
            Kind::Cylindrical(b) => Some((OmegaSpec::Max, b)),
            Kind::Conical(b) => Some((OmegaSpec::Sum, b)),
            Kind::Omega(w, b) => Some((*w, b)),
            _ => None,
        }
    }

    pub fn is_cylindrical(&self) -> bool {
        matches!(self.kind, Kind::Cylindrical(_))
    }

    pub fn structure(&self) -> Structure {
        match &self.kind {
            Kind::Polytope(_) => Structure::Polyhedral,
            Kind::PNorm(p) if *p == 1.0 || p.is_infinite() => Structure::Polyhedral,
            Kind::PNorm(_) | Kind::Euclidean | Kind::Quadratic(_) => Structure::Smooth,
            _ => Structure::Composed,
        }
    }

    /// `Ψ(ξ)`. Callers must pass a vector of length `dim`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::Euclidean => norm2(x),
            Kind::PNorm(p) => pnorm(x, *p),
            Kind::Quadratic(q) => Quadratic::form(&q.matrix, x),
            Kind::Polytope(p) => p.gauge(x),
            Kind::Cylindrical(b) => b.eval(&x[..self.dim - 1]).max(x[self.dim - 1].abs()),
            Kind::Conical(b) => b.eval(&x[..self.dim - 1]) + x[self.dim - 1].abs(),
            Kind::Omega(w, b) => w.apply(b.eval(&x[..self.dim - 1]), x[self.dim - 1].abs()),
        }
    }

    /// `Ψ°(ξ*) = sup{ξ*·ξ : Ψ(ξ) ≤ 1}`, always by an exact rule.
    pub fn eval_dual(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.dim);
        match &self.kind {
            Kind::Euclidean => norm2(y),
            Kind::PNorm(p) => pnorm(y, conjugate_exponent(*p)),
            Kind::Quadratic(q) => Quadratic::form(&q.inverse, y),
            Kind::Polytope(p) => p.support(y),
            Kind::Cylindrical(b) => b.eval_dual(&y[..self.dim - 1]) + y[self.dim - 1].abs(),
            Kind::Conical(b) => b.eval_dual(&y[..self.dim - 1]).max(y[self.dim - 1].abs()),
            Kind::Omega(w, b) => w
                .dual()
                .apply(b.eval_dual(&y[..self.dim - 1]), y[self.dim - 1].abs()),
        }
    }

    fn check_input(&self, x: &[f64], what: &'static str) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::dims("norm", self.dim, what, x.len()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(what));
        }
        Ok(())
    }

    pub fn try_eval(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x, "vector")?;
        Ok(self.eval(x))
    }

    pub fn try_eval_dual(&self, y: &[f64]) -> Result<f64> {
        self.check_input(y, "dual vector")?;
        Ok(self.eval_dual(y))
    }

    /// The dual norm as a value of the same family.
    pub fn dual(&self) -> Anisotropy {
        let kind = match &self.kind {
            Kind::Euclidean => Kind::Euclidean,
            Kind::PNorm(p) => Kind::PNorm(conjugate_exponent(*p)),
            Kind::Quadratic(q) => Kind::Quadratic(Quadratic {
                matrix: q.inverse.clone(),
                inverse: q.matrix.clone(),
            }),
            Kind::Polytope(p) => Kind::Polytope(p.polar()),
            Kind::Cylindrical(b) => Kind::Conical(Box::new(b.dual())),
            Kind::Conical(b) => Kind::Cylindrical(Box::new(b.dual())),
            Kind::Omega(w, b) => Kind::Omega(w.dual(), Box::new(b.dual())),
        };
        Anisotropy {
            dim: self.dim,
            kind,
        }
    }

    /// `Φ|_{ξ_{n+1}=0}` as a norm on ℝ^{m-1}.
    pub fn horizontal_restriction(&self) -> Result<Anisotropy> {
        if self.dim < 2 {
            return Err(Error::Invalid(
                "horizontal restriction needs dimension at least 2".into(),
            ));
        }
        let n = self.dim - 1;
        Ok(match &self.kind {
            Kind::Euclidean => Anisotropy::euclidean(n)?,
            Kind::PNorm(p) => Anisotropy::p_norm(n, *p)?,
            Kind::Quadratic(q) => {
                Anisotropy::quadratic(q.matrix[..n].iter().map(|r| r[..n].to_vec()).collect())?
            }
            Kind::Polytope(p) => {
                // The restricted gauge is max over the projected facet normals,
                // whose symmetric hull is the polar of the section.
                let projected: Vec<Vec<f64>> =
                    p.facet_normals().iter().map(|a| a[..n].to_vec()).collect();
                Anisotropy::from_polytope(Polytope::from_vertices(&projected)?.polar())
            }
            Kind::Cylindrical(b) | Kind::Conical(b) | Kind::Omega(_, b) => (**b).clone(),
        })
    }

    /// `(Φ°|_{ξ*_{n+1}=0})°`, the horizontal norm seen by vertical
    /// cylinders. Equals the restriction exactly when the unit ball is a
    /// generalized graph in the vertical direction.
    pub fn dual_restriction(&self) -> Result<Anisotropy> {
        Ok(self.dual().horizontal_restriction()?.dual())
    }

    /// The unit ball as an explicit polytope, when it is one.
    pub fn to_polytope(&self) -> Option<Polytope> {
        fn corners(d: usize) -> Vec<Vec<f64>> {
            (0..1usize << d)
                .map(|m| (0..d).map(|i| if m >> i & 1 == 1 { 1.0 } else { -1.0 }).collect())
                .collect()
        }
        fn cross(d: usize) -> Vec<Vec<f64>> {
            let mut out = Vec::new();
            for i in 0..d {
                for s in [1.0, -1.0] {
                    let mut v = vec![0.0; d];
                    v[i] = s;
                    out.push(v);
                }
            }
            out
        }
        let verts = match &self.kind {
            Kind::Polytope(p) => return Some(p.clone()),
            Kind::PNorm(p) if p.is_infinite() => corners(self.dim),
            Kind::PNorm(p) if *p == 1.0 => cross(self.dim),
            Kind::Cylindrical(_) | Kind::Conical(_) | Kind::Omega(..) => {
                let (w, b) = self.omega_form()?;
                let bp = b.to_polytope()?;
                let lift = |v: &[f64], t: f64| {
                    let mut x = v.to_vec();
                    x.push(t);
                    x
                };
                match w {
                    OmegaSpec::Max => bp
                        .vertices()
                        .iter()
                        .flat_map(|v| [lift(v, 1.0), lift(v, -1.0)])
                        .collect(),
                    OmegaSpec::Sum => {
                        let mut out: Vec<Vec<f64>> =
                            bp.vertices().iter().map(|v| lift(v, 0.0)).collect();
                        let zero = vec![0.0; self.dim - 1];
                        out.push(lift(&zero, 1.0));
                        out.push(lift(&zero, -1.0));
                        out
                    }
                    OmegaSpec::P(p) if p == 1.0 || p.is_infinite() => {
                        let w = if p == 1.0 { OmegaSpec::Sum } else { OmegaSpec::Max };
                        return Anisotropy::omega(w, b.clone()).ok()?.to_polytope();
                    }
                    OmegaSpec::P(_) => return None,
                }
            }
            _ => return None,
        };
        Polytope::from_vertices(&verts).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pythagoras() {
        let e = Anisotropy::euclidean(2).unwrap();
        assert_eq!(e.eval(&[3.0, 4.0]), 5.0);
    }

    #[test]
    fn cylindrical_over_l1() {
        let phi = Anisotropy::cylindrical(Anisotropy::p_norm(2, 1.0).unwrap());
        assert_eq!(phi.eval(&[1.0, 1.0, 3.0]), 3.0);
        assert_eq!(phi.eval(&[1.0, 1.0, 1.0]), 2.0);
    }

    #[test]
    fn parallelogram_values() {
        for &alpha in &[PI / 6.0, PI / 4.0, PI / 3.0] {
            let p = Anisotropy::parallelogram(alpha).unwrap();
            assert!((p.eval(&[0.7, 0.0]) - 0.7).abs() < 1e-12);
            assert!((p.eval_dual(&[1.0, 0.0]) - (1.0 + 1.0 / alpha.tan())).abs() < 1e-12);
        }
    }

    #[test]
    fn l1_dual_is_max() {
        let l1 = Anisotropy::p_norm(2, 1.0).unwrap();
        assert_eq!(l1.eval_dual(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn conical_dual_of_cylinder() {
        let phi = Anisotropy::cylindrical(Anisotropy::euclidean(2).unwrap());
        assert_eq!(phi.eval_dual(&[0.0, 0.0, 1.0]), 1.0);
        assert!(matches!(phi.dual().kind(), Kind::Conical(_)));
    }

    #[test]
    fn quadratic_rejects_indefinite() {
        assert!(Anisotropy::quadratic(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(Anisotropy::quadratic(vec![vec![1.0, 0.5], vec![0.4, 1.0]]).is_err());
        let q = Anisotropy::quadratic(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        assert!((q.eval(&[2.0, -1.0]) - 3.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn restriction_of_parallelogram_is_abs() {
        let p = Anisotropy::parallelogram(PI / 4.0).unwrap();
        let r = p.horizontal_restriction().unwrap();
        assert_eq!(r.dim(), 1);
        assert!((r.eval(&[2.0]) - 2.0).abs() < 1e-12);
        let d = p.dual_restriction().unwrap();
        // The dual restriction sees the projection of the ball, of half-width 1 + cot α.
        assert!((d.eval(&[2.0]) - 2.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn try_eval_checks_input() {
        let e = Anisotropy::euclidean(2).unwrap();
        assert!(matches!(e.try_eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(e.try_eval(&[f64::NAN, 1.0]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn to_polytope_agrees() {
        let l1 = Anisotropy::p_norm(2, 1.0).unwrap();
        for phi in [
            Anisotropy::cylindrical(l1.clone()),
            Anisotropy::conical(l1.clone()),
            Anisotropy::p_norm(3, f64::INFINITY).unwrap(),
        ] {
            let p = Anisotropy::from_polytope(phi.to_polytope().unwrap());
            for x in [[0.3, -1.2, 0.5], [1.0, 1.0, 1.0], [-0.1, 0.0, 2.0]] {
                assert!((p.eval(&x) - phi.eval(&x)).abs() < 1e-12);
                assert!((p.eval_dual(&x) - phi.eval_dual(&x)).abs() < 1e-12);
            }
        }
    }
}
