//! First-order primal–dual solvers for the area functional and for
//! weighted graph total variation.

use serde::{Deserialize, Serialize};

use super::energy::Face;
use super::lattice::{Geometry, GridFunction};
use crate::anisotropy::{Anisotropy, Kind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverParams {
    /// Stop once the primal–dual gap is below `gap_tol · |R|`.
    pub gap_tol: f64,
    pub max_iters: usize,
    /// Seeds randomized restarts; the default run starts from the given
    /// interior values.
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { gap_tol: 1e-8, max_iters: 100_000, seed: 0 }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0 && self.gap_tol.is_finite()) {
            return Err(Error::Invalid(format!("gap_tol must be positive, got {}", self.gap_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::Invalid("max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub u: GridFunction,
    /// Value of the functional at `u`.
    pub energy: f64,
    /// Certified lower bound for the minimum from the dual iterate.
    pub lower_bound: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Euclidean projection onto the unit ball `B_φ` of a planar norm.
#[derive(Clone, Debug)]
enum Ball {
    Disk,
    Box([f64; 2]),
    /// Vertices in counter-clockwise order.
    Polygon(Vec<[f64; 2]>),
}

impl Ball {
    fn of(phi: &Anisotropy) -> Result<Ball> {
        match phi.kind() {
            Kind::Euclidean => return Ok(Ball::Disk),
            Kind::PNorm(p) if *p == 2.0 => return Ok(Ball::Disk),
            _ => {}
        }
        let poly = phi.to_polytope().ok_or_else(|| {
            Error::Unsupported(format!(
                "no projection onto the unit ball of {:?}; use a euclidean, l1, l-inf or polygonal base",
                phi.kind()
            ))
        })?;
        let mut v: Vec<[f64; 2]> = poly.vertices().iter().map(|p| [p[0], p[1]]).collect();
        v.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
        if v.len() == 4 {
            let (a, b) = (v[0][0].abs(), v[0][1].abs());
            if a > 0.0 && b > 0.0 && v.iter().all(|p| (p[0].abs() - a).abs() < 1e-14 && (p[1].abs() - b).abs() < 1e-14) {
                return Ok(Ball::Box([a, b]));
            }
        }
        Ok(Ball::Polygon(v))
    }

    fn project(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            Ball::Disk => {
                let n = (p[0] * p[0] + p[1] * p[1]).sqrt();
                if n <= 1.0 {
                    p
                } else {
                    [p[0] / n, p[1] / n]
                }
            }
            Ball::Box([a, b]) => [p[0].clamp(-a, *a), p[1].clamp(-b, *b)],
            Ball::Polygon(v) => {
                let k = v.len();
                let inside = (0..k).all(|i| {
                    let (a, b) = (v[i], v[(i + 1) % k]);
                    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
                });
                if inside {
                    return p;
                }
                let mut best = v[0];
                let mut bd = f64::INFINITY;
                for i in 0..k {
                    let (a, b) = (v[i], v[(i + 1) % k]);
                    let d = [b[0] - a[0], b[1] - a[1]];
                    let s = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
                    let q = [a[0] + s * d[0], a[1] + s * d[1]];
                    let dist = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
                    if dist < bd {
                        bd = dist;
                        best = q;
                    }
                }
                best
            }
        }
    }
}

/// Minimizes `𝒢(u) = Σ h² Φ°(−D_h u, 1)` with the collar of `data` fixed,
/// for `Φ` cylindrical over a planar base `φ`. The interior of `data` is the
/// starting point. Values are kept in the collar range, which contains every
/// minimizer.
#[allow(non_snake_case)]
pub fn minimize_G(norm: &Anisotropy, data: &GridFunction, params: &SolverParams) -> Result<Solution> {
    params.validate()?;
    let Kind::Cylindrical(phi) = norm.kind() else {
        return Err(Error::Unsupported("the solver handles cylindrical norms only".into()));
    };
    if norm.dim() != 3 {
        return Err(Error::dims("norm", norm.dim(), "graph space", 3));
    }
    let l = data.lattice().clone();
    if l.geometry != Geometry::Planar {
        return Err(Error::Unsupported("the area functional is defined on planar lattices".into()));
    }
    let ball = Ball::of(phi)?;
    let (lo, hi) = data.collar_range();
    let (w, h) = (l.width(), l.h);
    let n = l.len();
    let interior: Vec<bool> = (0..n).map(|k| l.is_interior(k % w, k / w)).collect();
    let in_dom = |k: usize| k % w <= l.nx && k / w <= l.ny;
    let dom: Vec<usize> = (0..n).filter(|&k| in_dom(k)).collect();

    let mut u: Vec<f64> = data.values().to_vec();
    for k in 0..n {
        if interior[k] {
            u[k] = u[k].clamp(lo, hi);
        }
    }
    let mut ubar = u.clone();
    let mut p = vec![[0.0_f64; 2]; n];
    let mut ktp = vec![0.0; n];
    let step = 0.99 / (8.0_f64.sqrt() * h);
    let (mut tau, mut sigma) = (step, step);
    // residual balancing of the two step sizes, with a decaying rate
    let mut alpha = 0.5;
    let area = l.region_area();
    let target = params.gap_tol * area;

    let apply_k = |u: &[f64], k: usize| [h * (u[k + 1] - u[k]), h * (u[k + w] - u[k])];
    let primal = |u: &[f64]| -> f64 { dom.iter().map(|&k| phi.eval_dual(&apply_k(u, k))).sum() };
    let adjoint = |p: &[[f64; 2]], out: &mut [f64]| {
        out.iter_mut().for_each(|v| *v = 0.0);
        for &k in &dom {
            out[k] -= h * (p[k][0] + p[k][1]);
            out[k + 1] += h * p[k][0];
            out[k + w] += h * p[k][1];
        }
    };
    let dual = |ktp: &[f64], u: &[f64]| -> f64 {
        (0..n)
            .map(|k| if interior[k] { (lo * ktp[k]).min(hi * ktp[k]) } else { u[k] * ktp[k] })
            .sum()
    };

    let mut iters = 0;
    let mut gap = f64::INFINITY;
    let mut best_lb = f64::NEG_INFINITY;
    let (mut u_prev, mut p_prev, mut ubar_prev) = (u.clone(), p.clone(), ubar.clone());
    while iters < params.max_iters {
        let check = (iters + 1) % 20 == 0 || iters + 1 == params.max_iters;
        if check {
            u_prev.copy_from_slice(&u);
            p_prev.copy_from_slice(&p);
            ubar_prev.copy_from_slice(&ubar);
        }
        for &k in &dom {
            let d = apply_k(&ubar, k);
            p[k] = ball.project([p[k][0] + sigma * d[0], p[k][1] + sigma * d[1]]);
        }
        adjoint(&p, &mut ktp);
        for k in 0..n {
            if interior[k] {
                let old = u[k];
                let new = (old - tau * ktp[k]).clamp(lo, hi);
                u[k] = new;
                ubar[k] = 2.0 * new - old;
            }
        }
        iters += 1;
        if check {
            adjoint(&p, &mut ktp);
            best_lb = best_lb.max(dual(&ktp, &u));
            gap = primal(&u) - best_lb;
            if gap <= target {
                break;
            }
            let pres: f64 = (0..n).map(|k| ((u_prev[k] - u[k]) / tau).abs()).sum();
            let dres: f64 = dom
                .iter()
                .map(|&k| {
                    let a = apply_k(&ubar_prev, k);
                    let b = apply_k(&u, k);
                    ((p_prev[k][0] - p[k][0]) / sigma + a[0] - b[0]).abs()
                        + ((p_prev[k][1] - p[k][1]) / sigma + a[1] - b[1]).abs()
                })
                .sum();
            if pres > 1.5 * dres {
                tau /= 1.0 - alpha;
                sigma *= 1.0 - alpha;
                alpha *= 0.95;
            } else if dres > 1.5 * pres {
                tau *= 1.0 - alpha;
                sigma /= 1.0 - alpha;
                alpha *= 0.95;
            }
        }
    }
    let energy = primal(&u);
    if gap > target {
        return Err(Error::NotConverged { iterations: iters, gap, target });
    }
    Ok(Solution {
        u: GridFunction::new(l, u)?,
        energy: energy + area,
        lower_bound: best_lb + area,
        gap,
        iterations: iters,
    })
}

/// Minimizes `Σ_f w_f(u_a, u_b)` over `u ∈ [0,1]` on the cells marked free,
/// where a face costs `w_out·(u_a − u_b)⁺ + w_in·(u_b − u_a)⁺`. Diagonally
/// preconditioned primal–dual iterations; returns the relaxed minimizer
/// and a certified lower bound.
pub(crate) fn graph_tv(
    faces: &[Face],
    start: &[f64],
    free: &[bool],
    gap_tol: f64,
    max_iters: usize,
) -> Result<(Vec<f64>, f64, f64, f64)> {
    let n = start.len();
    let mut deg = vec![0.0_f64; n];
    for f in faces {
        deg[f.a] += 1.0;
        deg[f.b] += 1.0;
    }
    let tau: Vec<f64> = deg.iter().map(|d| if *d > 0.0 { 1.0 / d } else { 0.0 }).collect();
    let sigma = 0.5;
    let mut u: Vec<f64> = start.iter().zip(free).map(|(v, f)| if *f { v.clamp(0.0, 1.0) } else { *v }).collect();
    let mut ubar = u.clone();
    // dual per face, in [−w_in, w_out] acting on (u_a − u_b)
    let mut p = vec![0.0_f64; faces.len()];
    let mut ktp = vec![0.0; n];
    let primal = |u: &[f64]| -> f64 {
        faces
            .iter()
            .map(|f| {
                let d = u[f.a] - u[f.b];
                if d > 0.0 {
                    f.w_out * d
                } else {
                    -f.w_in * d
                }
            })
            .sum()
    };
    let adjoint = |p: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (f, q) in faces.iter().zip(p) {
            out[f.a] += q;
            out[f.b] -= q;
        }
    };
    let scale: f64 = faces.iter().map(|f| f.w_out.max(f.w_in)).sum::<f64>().max(1e-300);
    let target = gap_tol * scale;
    let mut gap = f64::INFINITY;
    let mut best_lb = f64::NEG_INFINITY;
    let mut iters = 0;
    while iters < max_iters {
        for (f, q) in faces.iter().zip(p.iter_mut()) {
            *q = (*q + sigma * (ubar[f.a] - ubar[f.b])).clamp(-f.w_in, f.w_out);
        }
        adjoint(&p, &mut ktp);
        for k in 0..n {
            if free[k] {
                let old = u[k];
                let new = (old - tau[k] * ktp[k]).clamp(0.0, 1.0);
                u[k] = new;
                ubar[k] = 2.0 * new - old;
            }
        }
        iters += 1;
        if iters % 20 == 0 || iters == max_iters {
            adjoint(&p, &mut ktp);
            let lb: f64 = (0..n).map(|k| if free[k] { ktp[k].min(0.0) } else { u[k] * ktp[k] }).sum();
            best_lb = best_lb.max(lb);
            gap = primal(&u) - best_lb;
            if gap <= target {
                break;
            }
        }
    }
    if gap > target {
        return Err(Error::NotConverged { iterations: iters, gap, target });
    }
    let e = primal(&u);
    Ok((u, e, best_lb, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varmin::energy::discrete_energy;
    use crate::varmin::lattice::Lattice;

    #[test]
    fn constant_collar() {
        let l = Lattice::planar(6, 6, 1.0 / 6.0, [0.0, 0.0]).unwrap();
        let g = GridFunction::from_fn(l.clone(), |_, _| 2.0).unwrap().with_interior(|_, _| 0.0);
        let cyl = Anisotropy::cylindrical(Anisotropy::euclidean(2).unwrap());
        let s = minimize_G(&cyl, &g, &SolverParams::default()).unwrap();
        assert!(s.u.values().iter().all(|v| (v - 2.0).abs() < 1e-6));
        assert!((s.energy - l.region_area()).abs() < 1e-6);
    }

    #[test]
    fn linear_collar_euclidean() {
        let l = Lattice::planar(16, 16, 1.0 / 16.0, [0.0, 0.0]).unwrap();
        let g = GridFunction::from_fn(l, |x, y| 0.6 * x + 0.8 * y).unwrap().with_interior(|_, _| 0.0);
        let cyl = Anisotropy::cylindrical(Anisotropy::euclidean(2).unwrap());
        let params = SolverParams { gap_tol: 1e-7, ..Default::default() };
        let s = minimize_G(&cyl, &g, &params).unwrap();
        let exact = GridFunction::from_fn(g.lattice().clone(), |x, y| 0.6 * x + 0.8 * y).unwrap();
        let err = s.u.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 2.0 / 16.0, "sup error {err}, iters {}", s.iterations);
        assert!((s.energy - discrete_energy(&exact, &cyl).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn polygon_projection() {
        let hex = Anisotropy::hexagon(0.5).unwrap();
        let b = Ball::of(&hex).unwrap();
        for p in [[3.0, 0.2], [-0.1, -4.0], [0.1, 0.1]] {
            let q = b.project(p);
            assert!(hex.eval(&q) <= 1.0 + 1e-12);
        }
    }
}
