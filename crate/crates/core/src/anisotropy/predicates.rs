//! Structural predicates on norms of ℝ^{n+1}: the generalized-graph
//! property, partial monotonicity and the restriction gap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Anisotropy, Kind};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};
use crate::sampling::sphere_directions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateVerdict {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum Method {
    ExactPolyhedral,
    /// Decided from the algebraic form of the norm.
    ClosedForm,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredicateReport {
    pub verdict: PredicateVerdict,
    /// For a failure, the offending vector first and the vector it is
    /// compared with second.
    pub witness: Vec<Vec<f64>>,
    pub method: Method,
    pub max_violation: f64,
}

impl PredicateReport {
    pub fn holds(&self) -> bool {
        self.verdict == PredicateVerdict::Holds
    }

    fn closed_form_holds() -> Self {
        PredicateReport {
            verdict: PredicateVerdict::Holds,
            witness: Vec::new(),
            method: Method::ClosedForm,
            max_violation: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerParams {
    pub directions: usize,
    pub offsets: usize,
    pub offset_range: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams {
            directions: 4096,
            offsets: 33,
            offset_range: 2.0,
            tol: 1e-9,
            seed: 0,
        }
    }
}

impl SamplerParams {
    fn offsets(&self) -> Vec<f64> {
        let m = self.offsets.max(2);
        (0..m)
            .map(|k| -self.offset_range + 2.0 * self.offset_range * k as f64 / (m - 1) as f64)
            .collect()
    }
}

fn need_vertical(norm: &Anisotropy) -> Result<usize> {
    if norm.dim() < 2 {
        Err(Error::Invalid(format!(
            "predicate needs a norm on ℝ^(n+1) with n ≥ 1, got dimension {}",
            norm.dim()
        )))
    } else {
        Ok(norm.dim() - 1)
    }
}

fn with_t(x: &[f64], t: f64) -> Vec<f64> {
    let mut v = x.to_vec();
    v.push(t);
    v
}

/// Off-diagonal column `b` and corner `c` of a quadratic form split as
/// `Q(ξ̂) + 2t b·ξ̂ + c t²`.
fn quadratic_split(q: &super::Quadratic) -> (Vec<f64>, f64) {
    let m = q.matrix();
    let n = m.len() - 1;
    ((0..n).map(|i| m[i][n]).collect(), m[n][n])
}

/// `Φ(ξ̂, t) ≥ Φ(ξ̂, 0)` for all `(ξ̂, t)`.
///
/// Decided exactly for polytopes (every vertex's horizontal projection must
/// lie in the ball) and from the algebraic form for the other kinds.
pub fn check_generalized_graph(norm: &Anisotropy, params: &SamplerParams) -> Result<PredicateReport> {
    let n = need_vertical(norm)?;
    match norm.kind() {
        Kind::Polytope(p) => {
            let mut worst = f64::NEG_INFINITY;
            let mut witness = Vec::new();
            for v in p.vertices() {
                let flat = with_t(&v[..n], 0.0);
                let viol = norm.eval(&flat) - norm.eval(v);
                if viol > worst {
                    worst = viol;
                    witness = vec![v.clone(), flat];
                }
            }
            let fails = worst > params.tol;
            Ok(PredicateReport {
                verdict: if fails { PredicateVerdict::Fails } else { PredicateVerdict::Holds },
                witness: if fails { witness } else { Vec::new() },
                method: Method::ExactPolyhedral,
                max_violation: worst.max(0.0),
            })
        }
        Kind::Quadratic(q) => {
            let (b, c) = quadratic_split(q);
            let nb = norm2(&b);
            if nb <= params.tol {
                return Ok(PredicateReport::closed_form_holds());
            }
            // t ↦ Φ(ξ̂,t)² is a parabola with vertex at t = −b·ξ̂/c.
            let xi: Vec<f64> = b.iter().map(|v| v / nb).collect();
            let t = -dot(&b, &xi) / c;
            let moved = with_t(&xi, t);
            let flat = with_t(&xi, 0.0);
            let viol = norm.eval(&flat) - norm.eval(&moved);
            Ok(PredicateReport {
                verdict: if viol > params.tol { PredicateVerdict::Fails } else { PredicateVerdict::Holds },
                witness: if viol > params.tol { vec![moved, flat] } else { Vec::new() },
                method: Method::ClosedForm,
                max_violation: viol.max(0.0),
            })
        }
        // Even in the last coordinate, or monotone in |t| by construction.
        _ => Ok(PredicateReport::closed_form_holds()),
    }
}

/// Sampled falsification of the generalized-graph inequality, valid for any
/// norm. A "holds" verdict from here is evidence only.
pub fn check_generalized_graph_sampled(
    norm: &Anisotropy,
    params: &SamplerParams,
) -> Result<PredicateReport> {
    let n = need_vertical(norm)?;
    let offsets = params.offsets();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    for d in sphere_directions(n, params.directions, params.seed) {
        let flat = with_t(&d, 0.0);
        let base = norm.eval(&flat);
        for &t in &offsets {
            let moved = with_t(&d, t);
            let viol = base - norm.eval(&moved);
            if viol > worst {
                worst = viol;
                witness = vec![moved, flat.clone()];
            }
        }
    }
    let fails = worst > params.tol;
    Ok(PredicateReport {
        verdict: if fails { PredicateVerdict::Fails } else { PredicateVerdict::Holds },
        witness: if fails { witness } else { Vec::new() },
        method: Method::Sampled {
            count: params.directions * offsets.len(),
            seed: params.seed,
        },
        max_violation: worst.max(0.0),
    })
}

/// `Φ(ξ̂,0) ≤ Φ(η̂,0)` and `Φ(0,ξ_{n+1}) ≤ Φ(0,η_{n+1})` imply
/// `Φ(ξ) ≤ Φ(η)`.
///
/// Composed norms, `ℓ^p` norms and quadratic forms are decided from their
/// form; polytopes fall back to sampling.
pub fn check_partial_monotonicity(
    norm: &Anisotropy,
    params: &SamplerParams,
) -> Result<PredicateReport> {
    need_vertical(norm)?;
    match norm.kind() {
        Kind::Cylindrical(_) | Kind::Conical(_) | Kind::Omega(..) | Kind::Euclidean | Kind::PNorm(_) => {
            Ok(PredicateReport::closed_form_holds())
        }
        Kind::Quadratic(_) => {
            // Without the mixed term the form is an ℓ² combination of its two
            // blocks; with it the generalized-graph witness breaks monotonicity.
            let gg = check_generalized_graph(norm, params)?;
            if gg.holds() {
                return Ok(PredicateReport::closed_form_holds());
            }
            let (moved, flat) = (gg.witness[0].clone(), gg.witness[1].clone());
            Ok(PredicateReport {
                verdict: PredicateVerdict::Fails,
                witness: vec![flat, moved],
                method: Method::ClosedForm,
                max_violation: gg.max_violation,
            })
        }
        Kind::Polytope(_) => check_partial_monotonicity_sampled(norm, params),
    }
}

/// Draws pairs on the boundary of the hypothesis (equal horizontal and
/// vertical sizes, independent directions and signs) plus pairs with slack.
pub fn check_partial_monotonicity_sampled(
    norm: &Anisotropy,
    params: &SamplerParams,
) -> Result<PredicateReport> {
    let n = need_vertical(norm)?;
    let dirs = sphere_directions(n, params.directions, params.seed);
    let offsets = params.offsets();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let flat_norm = |d: &[f64]| norm.eval(&with_t(d, 0.0));
    let mut worst = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    let mut count = 0;
    for d in &dirs {
        let xi_hat: Vec<f64> = {
            let s = flat_norm(d);
            d.iter().map(|v| v / s).collect()
        };
        for &t in &offsets {
            let e = &dirs[rng.gen_range(0..dirs.len())];
            let slack = if rng.gen_bool(0.5) { 1.0 } else { 1.0 + 0.1 * rng.gen::<f64>() };
            let s = flat_norm(e);
            let eta_hat: Vec<f64> = e.iter().map(|v| v / s * slack).collect();
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let tslack = if rng.gen_bool(0.5) { 1.0 } else { 1.0 + 0.1 * rng.gen::<f64>() };
            let xi = with_t(&xi_hat, t);
            let eta = with_t(&eta_hat, sign * t * tslack);
            let viol = norm.eval(&xi) - norm.eval(&eta);
            count += 1;
            if viol > worst {
                worst = viol;
                witness = vec![xi, eta];
            }
        }
    }
    let fails = worst > params.tol;
    Ok(PredicateReport {
        verdict: if fails { PredicateVerdict::Fails } else { PredicateVerdict::Holds },
        witness: if fails { witness } else { Vec::new() },
        method: Method::Sampled {
            count,
            seed: params.seed,
        },
        max_violation: worst.max(0.0),
    })
}

/// `Φ°(ξ̂*, 0) − (Φ|_{ξ_{n+1}=0})°(ξ̂*)`, nonnegative up to rounding.
pub fn restriction_gap(norm: &Anisotropy, direction: &[f64]) -> Result<f64> {
    let n = need_vertical(norm)?;
    if direction.len() != n {
        return Err(Error::dims("horizontal space", n, "direction", direction.len()));
    }
    if direction.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("direction"));
    }
    let r = norm.horizontal_restriction()?;
    Ok(norm.eval_dual(&with_t(direction, 0.0)) - r.eval_dual(direction))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub sup: f64,
    pub argmax: Vec<f64>,
    pub method: Method,
}

/// Supremum of the restriction gap over unit directions.
///
/// For polytopes the facet normals of the section are added to the sampled
/// directions; a positive gap always shows up at one of them, so the sign of
/// the result is exact there.
pub fn restriction_gap_sup(norm: &Anisotropy, params: &SamplerParams) -> Result<GapReport> {
    let n = need_vertical(norm)?;
    let r = norm.horizontal_restriction()?;
    let mut dirs = sphere_directions(n, params.directions, params.seed);
    let exact = matches!(norm.kind(), Kind::Polytope(_));
    if let Kind::Polytope(rp) = r.kind() {
        for a in rp.facet_normals() {
            let l = norm2(a);
            dirs.push(a.iter().map(|v| v / l).collect());
        }
    }
    let mut sup = f64::NEG_INFINITY;
    let mut argmax = Vec::new();
    for d in dirs {
        let g = norm.eval_dual(&with_t(&d, 0.0)) - r.eval_dual(&d);
        if g > sup {
            sup = g;
            argmax = d;
        }
    }
    Ok(GapReport {
        sup,
        argmax,
        method: if exact {
            Method::ExactPolyhedral
        } else {
            Method::Sampled {
                count: params.directions,
                seed: params.seed,
            }
        },
    })
}
