//! Fubini-type slicing of perimeters and the cylinder identity.

use rayon::prelude::*;
use serde::Serialize;

use super::perimeter::perimeter;
use super::set::{Facet, PolyhedralSet, SetExpr};
use super::window::Window;
use crate::anisotropy::{check_generalized_graph, Anisotropy, SamplerParams};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceReport {
    /// `∫_{∂E} Φ°(ν̂, 0)`.
    pub lhs_horizontal: f64,
    /// `∫ dt` of the perimeters of the horizontal slices `E_t`.
    pub rhs_horizontal: f64,
    /// `∫_{∂E} Φ°(0, ν_t)`.
    pub lhs_vertical: f64,
    /// `Φ°(0,1) ∫ dx` of the number of boundary points of the vertical slices.
    pub rhs_vertical: f64,
}

impl SliceReport {
    pub fn max_relative_error(&self) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        rel(self.lhs_horizontal, self.rhs_horizontal).max(rel(self.lhs_vertical, self.rhs_vertical))
    }
}

fn with_last(v: &[f64], t: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    out.push(t);
    out
}

fn sorted_breaks(mut v: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    v.retain(|x| *x > lo && *x < hi);
    v.push(lo);
    v.push(hi);
    v.sort_by(f64::total_cmp);
    let tol = 1e-12 * (hi - lo);
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
    v
}

/// Number of boundary points of the 1-d section of `expr` over `x` inside
/// `(lo, hi)`.
fn vertical_crossings(expr: &SetExpr, x: &[f64], lo: f64, hi: f64) -> Result<usize> {
    let mut e = expr.clone();
    for &c in x {
        e = e.fix_coordinate(0, c);
    }
    Ok(PolyhedralSet::from_expr(e, Window::new(vec![lo], vec![hi])?)?.facets().len())
}

/// Both slicing identities for a set built from half-spaces, in ℝ² or ℝ³.
pub fn slice_check(set: &PolyhedralSet, norm: &Anisotropy, window: &Window) -> Result<SliceReport> {
    let m = set.dim();
    if norm.dim() != m {
        return Err(Error::dims("norm", norm.dim(), "set", m));
    }
    if !(2..=3).contains(&m) {
        return Err(Error::Unsupported(format!("slicing in dimension {m}")));
    }
    let expr = set
        .expr()
        .ok_or_else(|| Error::Invalid("slicing needs a set built from half-spaces".into()))?;
    let facets = set.facets_in(window)?;
    let n = m - 1;
    let vertical_weight = norm.eval_dual(&with_last(&vec![0.0; n], 1.0));
    let horiz = |nu: &[f64]| norm.eval_dual(&with_last(&nu[..n], 0.0));

    let lhs_horizontal: f64 = facets.iter().map(|f| f.area * horiz(&f.normal)).sum();
    let lhs_vertical: f64 = facets
        .iter()
        .map(|f| f.area * norm.eval_dual(&with_last(&vec![0.0; n], f.normal[n])))
        .sum();

    // horizontal slices: the slice perimeter is affine in t between vertex heights
    let base = window.without(n).expect("m ≥ 2");
    let (tlo, thi) = (window.lo()[n], window.hi()[n]);
    let heights: Vec<f64> = facets.iter().flat_map(|f| f.vertices.iter().map(|v| v[n])).collect();
    let tb = sorted_breaks(heights, tlo, thi);
    let rhs_horizontal = tb
        .par_windows(2)
        .map(|w| -> Result<f64> {
            let t = 0.5 * (w[0] + w[1]);
            let slice = PolyhedralSet::from_expr(expr.fix_coordinate(n, t), base.clone())?;
            let p: f64 = slice
                .facets()
                .iter()
                .map(|f| f.area * norm.eval_dual(&with_last(&f.normal, 0.0)))
                .sum();
            Ok((w[1] - w[0]) * p)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();

    let crossings = match n {
        1 => {
            let xs: Vec<f64> = facets.iter().flat_map(|f| f.vertices.iter().map(|v| v[0])).collect();
            let xb = sorted_breaks(xs, base.lo()[0], base.hi()[0]);
            xb.par_windows(2)
                .map(|w| Ok((w[1] - w[0]) * vertical_crossings(expr, &[0.5 * (w[0] + w[1])], tlo, thi)? as f64))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .sum::<f64>()
        }
        _ => planar_crossing_integral(expr, &facets, &base, tlo, thi)?,
    };

    Ok(SliceReport {
        lhs_horizontal,
        rhs_horizontal,
        lhs_vertical,
        rhs_vertical: vertical_weight * crossings,
    })
}

type Edge = ([f64; 2], [f64; 2]);

fn projected_edges(facets: &[Facet]) -> Vec<Edge> {
    let mut edges = Vec::new();
    for f in facets {
        let k = f.vertices.len();
        for i in 0..k {
            let (a, b) = (&f.vertices[i], &f.vertices[(i + 1) % k]);
            let e = ([a[0], a[1]], [b[0], b[1]]);
            if (e.0[0] - e.1[0]).abs() + (e.0[1] - e.1[1]).abs() > 1e-14 {
                edges.push(e);
            }
        }
    }
    edges
}

fn crossing_x(p: &Edge, q: &Edge) -> Option<f64> {
    let r = [p.1[0] - p.0[0], p.1[1] - p.0[1]];
    let s = [q.1[0] - q.0[0], q.1[1] - q.0[1]];
    let den = r[0] * s[1] - r[1] * s[0];
    if den.abs() < 1e-14 {
        return None;
    }
    let d = [q.0[0] - p.0[0], q.0[1] - p.0[1]];
    let a = (d[0] * s[1] - d[1] * s[0]) / den;
    let b = (d[0] * r[1] - d[1] * r[0]) / den;
    ((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)).then(|| p.0[0] + a * r[0])
}

/// `∫_Â #(∂E_x ∩ (tlo, thi)) dx` over a planar base: the count is constant
/// on the cells cut out by the projected facet edges.
fn planar_crossing_integral(expr: &SetExpr, facets: &[Facet], base: &Window, tlo: f64, thi: f64) -> Result<f64> {
    let edges = projected_edges(facets);
    let mut xs: Vec<f64> = edges.iter().flat_map(|e| [e.0[0], e.1[0]]).collect();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if let Some(x) = crossing_x(&edges[i], &edges[j]) {
                xs.push(x);
            }
        }
    }
    let xb = sorted_breaks(xs, base.lo()[0], base.hi()[0]);
    let (ylo, yhi) = (base.lo()[1], base.hi()[1]);
    let strips = xb
        .par_windows(2)
        .map(|w| -> Result<f64> {
            // the inner integral is affine in x across the strip
            let x = 0.5 * (w[0] + w[1]);
            let ys: Vec<f64> = edges
                .iter()
                .filter_map(|e| {
                    let (a, b) = if e.0[0] <= e.1[0] { (e.0, e.1) } else { (e.1, e.0) };
                    (a[0] < x && x < b[0]).then(|| a[1] + (x - a[0]) / (b[0] - a[0]) * (b[1] - a[1]))
                })
                .collect();
            let yb = sorted_breaks(ys, ylo, yhi);
            let mut acc = 0.0;
            for v in yb.windows(2) {
                let c = vertical_crossings(expr, &[x, 0.5 * (v[0] + v[1])], tlo, thi)?;
                acc += (v[1] - v[0]) * c as f64;
            }
            Ok((w[1] - w[0]) * acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(strips.into_iter().sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderIdentity {
    /// `P_Φ(Ê × ℝ, Â × (−(m+1), m+1))`.
    pub lhs: f64,
    /// `2(m+1) P_φ(Ê, Â)` with `φ = (Φ°|_{ξ*_{n+1}=0})°`.
    pub rhs: f64,
    /// The same with `φ` the horizontal restriction of `Φ`.
    pub rhs_restriction: f64,
    /// Whether `∂B_Φ` is a generalized graph; then both right-hand sides agree.
    pub generalized_graph: bool,
}

/// Compares the perimeter of a truncated cylinder with the base perimeter.
pub fn cylinder_identity(base_set: &PolyhedralSet, norm: &Anisotropy, m: f64) -> Result<CylinderIdentity> {
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::Invalid(format!("m must be non-negative, got {m}")));
    }
    let n = base_set.dim();
    if norm.dim() != n + 1 {
        return Err(Error::dims("norm", norm.dim(), "cylinder", n + 1));
    }
    let expr = base_set
        .expr()
        .ok_or_else(|| Error::Invalid("the cylinder needs a base built from half-spaces".into()))?;
    let a_hat = base_set.bound().clone();
    let window = a_hat.extended(-(m + 1.0), m + 1.0)?;
    let cyl = PolyhedralSet::from_expr(expr.cylinder(), window.clone())?;
    let lhs = perimeter(&cyl, norm, &window)?;
    let phi = norm.dual_restriction()?;
    let phi_r = norm.horizontal_restriction()?;
    let factor = 2.0 * (m + 1.0);
    Ok(CylinderIdentity {
        lhs,
        rhs: factor * perimeter(base_set, &phi, &a_hat)?,
        rhs_restriction: factor * perimeter(base_set, &phi_r, &a_hat)?,
        generalized_graph: check_generalized_graph(norm, &SamplerParams::default())?.holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn cube_slices() {
        let cube = PolyhedralSet::aabb(&[0.0; 3], &[1.0; 3], Window::cube(3, 2.0).unwrap()).unwrap();
        let cyl = Anisotropy::cylindrical(Anisotropy::p_norm(2, 1.0).unwrap());
        let r = slice_check(&cube, &cyl, cube.bound()).unwrap();
        assert!(close(r.lhs_horizontal, 4.0) && close(r.rhs_horizontal, 4.0), "{r:?}");
        assert!(close(r.lhs_vertical, 2.0) && close(r.rhs_vertical, 2.0), "{r:?}");
    }

    #[test]
    fn tilted_planes() {
        let w = Window::cube(3, 1.0).unwrap();
        let e = SetExpr::Or(vec![
            SetExpr::half(vec![0.3, -0.2, 1.0], 0.1).unwrap(),
            SetExpr::And(vec![
                SetExpr::half(vec![1.0, 1.0, -1.0], 0.2).unwrap(),
                SetExpr::half(vec![-1.0, 0.5, 0.3], 0.4).unwrap(),
            ]),
        ]);
        let s = PolyhedralSet::from_expr(e, w.clone()).unwrap();
        let norm = Anisotropy::p_norm(3, 1.5).unwrap();
        let r = slice_check(&s, &norm, &w).unwrap();
        assert!(r.max_relative_error() < 1e-9, "{r:?}");
    }

    #[test]
    fn planar_wedge() {
        let w = Window::cube(2, 1.0).unwrap();
        let e = SetExpr::And(vec![
            SetExpr::half(vec![1.0, 2.0], 0.3).unwrap(),
            SetExpr::half(vec![-1.0, 0.5], 0.2).unwrap(),
        ]);
        let s = PolyhedralSet::from_expr(e, w.clone()).unwrap();
        let r = slice_check(&s, &Anisotropy::euclidean(2).unwrap(), &w).unwrap();
        assert!(r.max_relative_error() < 1e-9, "{r:?}");
    }

    #[test]
    fn square_and_cross_cylinders() {
        let sq = PolyhedralSet::aabb(&[0.0; 2], &[1.0; 2], Window::cube(2, 2.0).unwrap()).unwrap();
        let cubic = Anisotropy::p_norm(3, f64::INFINITY).unwrap();
        let r = cylinder_identity(&sq, &cubic, 1.0).unwrap();
        assert!(close(r.lhs, 16.0) && close(r.rhs, 16.0) && r.generalized_graph);
        let cross = PolyhedralSet::from_expr(
            SetExpr::Or(vec![
                SetExpr::And(vec![
                    SetExpr::half(vec![-1.0, 1.0], 0.0).unwrap(),
                    SetExpr::half(vec![-1.0, -1.0], 0.0).unwrap(),
                ]),
                SetExpr::And(vec![
                    SetExpr::half(vec![1.0, -1.0], 0.0).unwrap(),
                    SetExpr::half(vec![1.0, 1.0], 0.0).unwrap(),
                ]),
            ]),
            Window::cube(2, 1.0).unwrap(),
        )
        .unwrap();
        let r = cylinder_identity(&cross, &cubic, 0.0).unwrap();
        assert!(close(r.lhs, 16.0) && close(r.rhs, 16.0), "{r:?}");
    }
}
