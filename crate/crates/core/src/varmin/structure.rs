//! Structural checks on computed minimizers: scaling, truncation,
//! monotone composition, the maximum principle and the one-dimensional
//! profile `u(x) = f(x·ζ)`.

use serde::Serialize;

use super::energy::discrete_energy;
use super::lattice::{GridFunction, Lattice};
use super::solver::{minimize_G, SolverParams};
use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};

const SCALES: [f64; 4] = [0.0, 0.5, 2.0, 3.0];

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    /// Largest `|(E(λu) − |R|) − λ(E(u) − |R|)|` over the test scales.
    pub scaling_error: f64,
    pub truncation_level: f64,
    /// `|E(max{u,λ}) − min E|` for collar `max{g,λ}`.
    pub truncation_error: f64,
    /// Same comparison for the supplied monotone profile.
    pub composition_error: Option<f64>,
    /// Cells outside `[min g − 1e-9, max g + 1e-9]`.
    pub max_principle_violations: usize,
    pub collar_range: (f64, f64),
    pub value_range: (f64, f64),
}

impl StructureReport {
    pub fn passes(&self, scaling_tol: f64, resolve_tol: f64) -> bool {
        self.scaling_error <= scaling_tol
            && self.truncation_error <= resolve_tol
            && self.composition_error.is_none_or(|e| e <= resolve_tol)
            && self.max_principle_violations == 0
    }
}

/// Monotone nondecreasing piecewise-linear map through `knots`, constant
/// beyond the ends.
fn pl_map(knots: &[(f64, f64)], x: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let k = knots.partition_point(|p| p.0 <= x);
    let (a, b) = (knots[k - 1], knots[k]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

fn check_knots(knots: &[(f64, f64)]) -> Result<()> {
    let ok = knots.len() >= 2
        && knots.iter().all(|(x, y)| x.is_finite() && y.is_finite())
        && knots.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 >= w[0].1);
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid("profile knots must be finite, increasing in x and nondecreasing in y".into()))
    }
}

fn resolve_gap(
    norm: &Anisotropy,
    u: &GridFunction,
    f: impl Fn(f64) -> f64 + Copy,
    params: &SolverParams,
) -> Result<f64> {
    let data = u.map(f)?;
    let direct = discrete_energy(&data, norm)?;
    let solved = minimize_G(norm, &data, params)?;
    Ok((direct - solved.energy).abs())
}

/// Runs the scaling, truncation, composition and boundedness checks on a
/// minimizer `u` of the area functional with its own collar.
pub fn structure_checks(
    u: &GridFunction,
    norm: &Anisotropy,
    params: &SolverParams,
    profile: Option<&[(f64, f64)]>,
) -> Result<StructureReport> {
    if !norm.is_cylindrical() {
        return Err(Error::Unsupported("structure checks need a cylindrical norm".into()));
    }
    let area = u.lattice().region_area();
    let e = discrete_energy(u, norm)? - area;
    let mut scaling_error = 0.0_f64;
    for lambda in SCALES {
        let el = discrete_energy(&u.map(|v| lambda * v)?, norm)? - area;
        scaling_error = scaling_error.max((el - lambda * e).abs());
    }

    let l = u.lattice();
    let mut inner: Vec<f64> = (1..=l.ny).flat_map(|j| (1..=l.nx).map(move |i| (i, j))).map(|(i, j)| u.get(i, j)).collect();
    inner.sort_by(f64::total_cmp);
    let level = inner[inner.len() / 2];
    let truncation_error = resolve_gap(norm, u, |v| v.max(level), params)?;
    let composition_error = match profile {
        Some(k) => {
            check_knots(k)?;
            Some(resolve_gap(norm, u, |v| pl_map(k, v), params)?)
        }
        None => None,
    };

    let (g0, g1) = u.collar_range();
    let violations = inner.iter().filter(|&&v| v < g0 - 1e-9 || v > g1 + 1e-9).count();
    Ok(StructureReport {
        scaling_error,
        truncation_level: level,
        truncation_error,
        composition_error,
        max_principle_violations: violations,
        collar_range: (g0, g1),
        value_range: (inner[0], inner[inner.len() - 1]),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinFit {
    /// Unit normal of the common level-line direction, pointing toward
    /// increasing values.
    pub zeta: [f64; 2],
    /// Largest perpendicular distance of a level crossing from its level's
    /// fitted line.
    pub residual: f64,
    pub levels_used: usize,
    pub degenerate: bool,
}

impl BernsteinFit {
    /// Angle in degrees between the fitted and a reference direction.
    pub fn angle_to(&self, zeta: [f64; 2]) -> f64 {
        let n = zeta[0].hypot(zeta[1]);
        let c = (self.zeta[0] * zeta[0] + self.zeta[1] * zeta[1]) / n;
        c.clamp(-1.0, 1.0).acos().to_degrees()
    }
}

/// Points where `u` crosses `lambda` between neighbouring cell centres,
/// located by linear interpolation.
fn crossings(u: &GridFunction, l: &Lattice, lambda: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    let mut push = |a: (usize, usize), b: (usize, usize)| {
        let (ua, ub) = (u.get(a.0, a.1), u.get(b.0, b.1));
        if (ua < lambda) != (ub < lambda) {
            let s = (lambda - ua) / (ub - ua);
            let (pa, pb) = (l.center(a.0, a.1), l.center(b.0, b.1));
            out.push([pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])]);
        }
    };
    for j in 0..=l.ny + 1 {
        for i in 0..=l.nx {
            push((i, j), (i + 1, j));
        }
    }
    for j in 0..=l.ny {
        for i in 0..=l.nx + 1 {
            push((i, j), (i, j + 1));
        }
    }
    out
}

/// Fits one direction to the level lines of `u` at the deciles of its
/// range.
pub fn bernstein_fit(u: &GridFunction) -> Result<BernsteinFit> {
    let l = u.lattice();
    let (lo, hi) = u.values().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let degenerate = BernsteinFit { zeta: [1.0, 0.0], residual: 0.0, levels_used: 0, degenerate: true };
    if hi - lo <= 1e-12 * hi.abs().max(1.0) {
        return Ok(degenerate);
    }
    let mut levels = Vec::new();
    for k in 1..10 {
        let lambda = lo + (hi - lo) * k as f64 / 10.0;
        let pts = crossings(u, l, lambda);
        if pts.len() >= 2 {
            let n = pts.len() as f64;
            let m = [pts.iter().map(|p| p[0]).sum::<f64>() / n, pts.iter().map(|p| p[1]).sum::<f64>() / n];
            levels.push((lambda, m, pts));
        }
    }
    if levels.len() < 2 {
        return Ok(BernsteinFit { levels_used: levels.len(), ..degenerate });
    }
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (_, m, pts) in &levels {
        for p in pts {
            let (dx, dy) = (p[0] - m[0], p[1] - m[1]);
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
    }
    // major axis of the pooled scatter is the line direction
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let mut zeta = [-theta.sin(), theta.cos()];
    let mean_level = levels.iter().map(|l| l.0).sum::<f64>() / levels.len() as f64;
    let trend: f64 = levels.iter().map(|(lam, m, _)| (lam - mean_level) * (m[0] * zeta[0] + m[1] * zeta[1])).sum();
    if trend < 0.0 {
        zeta = [-zeta[0], -zeta[1]];
    }
    let residual = levels
        .iter()
        .flat_map(|(_, m, pts)| pts.iter().map(move |p| ((p[0] - m[0]) * zeta[0] + (p[1] - m[1]) * zeta[1]).abs()))
        .fold(0.0, f64::max);
    Ok(BernsteinFit { zeta, residual, levels_used: levels.len(), degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxy() -> Anisotropy {
        Anisotropy::cylindrical(Anisotropy::p_norm(2, f64::INFINITY).unwrap())
    }

    #[test]
    fn exact_profile_is_recovered() {
        let l = Lattice::planar(20, 20, 0.05, [0.0, 0.0]).unwrap();
        let f = |s: f64| if s < 0.5 { s } else { 0.5 + 3.0 * (s - 0.5) };
        let u = GridFunction::from_fn(l, |x, y| f(0.6 * x + 0.8 * y)).unwrap();
        let fit = bernstein_fit(&u).unwrap();
        assert!(!fit.degenerate);
        assert!(fit.residual < 1e-9, "{}", fit.residual);
        assert!(fit.angle_to([0.6, 0.8]) < 1e-6);
    }

    #[test]
    fn cross_has_no_profile() {
        let l = Lattice::planar(20, 20, 0.1, [-1.0, -1.0]).unwrap();
        let u = GridFunction::from_fn(l, |x, y| if x.abs() < 0.3 || y.abs() < 0.3 { 1.0 } else { 0.0 }).unwrap();
        assert!(bernstein_fit(&u).unwrap().residual > 0.5);
    }

    #[test]
    fn constant_is_degenerate() {
        let l = Lattice::planar(4, 4, 0.25, [0.0, 0.0]).unwrap();
        let u = GridFunction::from_fn(l, |_, _| 1.0).unwrap();
        assert!(bernstein_fit(&u).unwrap().degenerate);
    }

    #[test]
    fn linear_minimizer_structure() {
        let l = Lattice::planar(12, 12, 1.0 / 12.0, [0.0, 0.0]).unwrap();
        let g = GridFunction::from_fn(l, |x, y| x + 0.5 * y).unwrap().with_interior(|_, _| 0.0);
        let params = SolverParams::default();
        let s = minimize_G(&boxy(), &g, &params).unwrap();
        let r = structure_checks(&s.u, &boxy(), &params, Some(&[(0.0, 0.0), (0.7, 0.2), (2.0, 3.0)])).unwrap();
        assert!(r.passes(1e-9, 1e-6), "{r:?}");
    }

    #[test]
    fn bad_knots() {
        assert!(check_knots(&[(0.0, 1.0), (1.0, 0.0)]).is_err());
        assert_eq!(pl_map(&[(0.0, 0.0), (1.0, 2.0)], 0.25), 0.5);
    }
}
