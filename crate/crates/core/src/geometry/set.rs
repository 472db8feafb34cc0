//! Polyhedral sets in ℝ^m (m ≤ 3) described by boolean combinations of open
//! half-spaces, together with their facets inside a bounding window.

use serde::{Deserialize, Serialize};

use super::window::Window;
use crate::error::{Error, Result};
use crate::linalg::{cross3, dot, norm2, scale, sub};

pub const MAX_SET_DIM: usize = 3;

/// The open half-space `{x : ν·x < c}` with `|ν| = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    normal: Vec<f64>,
    offset: f64,
}

impl Halfspace {
    /// Normalizes `normal`; the offset is rescaled with it.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.iter().any(|v| !v.is_finite()) || !offset.is_finite() {
            return Err(Error::NonFinite("half-space"));
        }
        let l = norm2(&normal);
        if l < 1e-300 {
            return Err(Error::InvalidSet("half-space with zero normal".into()));
        }
        Ok(Halfspace {
            normal: scale(&normal, 1.0 / l),
            offset: offset / l,
        })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dot(&self.normal, x) < self.offset
    }

    fn plane(&self) -> Plane {
        Plane::canonical(&self.normal, self.offset)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SetExpr {
    Empty,
    Full,
    Half(Halfspace),
    And(Vec<SetExpr>),
    Or(Vec<SetExpr>),
    Not(Box<SetExpr>),
}

/// An oriented hyperplane in canonical form: the first non-negligible
/// component of the normal is positive.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Plane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

const PLANE_TOL: f64 = 1e-9;

impl Plane {
    fn canonical(normal: &[f64], offset: f64) -> Plane {
        let flip = normal
            .iter()
            .find(|v| v.abs() > 1e-12)
            .is_some_and(|v| *v < 0.0);
        if flip {
            Plane {
                normal: normal.iter().map(|v| -v).collect(),
                offset: -offset,
            }
        } else {
            Plane {
                normal: normal.to_vec(),
                offset,
            }
        }
    }

    /// +1 if `h` is `{ν·x < c}` for this plane, −1 if it is the opposite
    /// side, 0 if it is another plane.
    fn orientation_of(&self, h: &Halfspace) -> i8 {
        let tol = PLANE_TOL * (1.0 + self.offset.abs());
        let same = self
            .normal
            .iter()
            .zip(&h.normal)
            .all(|(a, b)| (a - b).abs() <= PLANE_TOL)
            && (self.offset - h.offset).abs() <= tol;
        if same {
            return 1;
        }
        let opp = self
            .normal
            .iter()
            .zip(&h.normal)
            .all(|(a, b)| (a + b).abs() <= PLANE_TOL)
            && (self.offset + h.offset).abs() <= tol;
        if opp {
            -1
        } else {
            0
        }
    }

    fn same_as(&self, other: &Plane) -> bool {
        self.normal
            .iter()
            .zip(&other.normal)
            .all(|(a, b)| (a - b).abs() <= PLANE_TOL)
            && (self.offset - other.offset).abs() <= PLANE_TOL * (1.0 + self.offset.abs())
    }

    fn signed(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

impl SetExpr {
    pub fn half(normal: Vec<f64>, offset: f64) -> Result<SetExpr> {
        Ok(SetExpr::Half(Halfspace::new(normal, offset)?))
    }

    /// The open box `(lo, hi)` as an intersection of `2m` half-spaces.
    pub fn open_box(lo: &[f64], hi: &[f64]) -> Result<SetExpr> {
        let m = lo.len();
        let mut parts = Vec::with_capacity(2 * m);
        for k in 0..m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            parts.push(SetExpr::half(e.clone(), hi[k])?);
            e[k] = -1.0;
            parts.push(SetExpr::half(e, -lo[k])?);
        }
        Ok(SetExpr::And(parts))
    }

    pub fn complement(self) -> SetExpr {
        match self {
            SetExpr::Not(inner) => *inner,
            SetExpr::Empty => SetExpr::Full,
            SetExpr::Full => SetExpr::Empty,
            other => SetExpr::Not(Box::new(other)),
        }
    }

    /// Common ambient dimension of the half-spaces, if any.
    pub fn dim(&self) -> Option<usize> {
        self.halfspaces().first().map(|h| h.normal.len())
    }

    pub fn halfspaces(&self) -> Vec<&Halfspace> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Halfspace>) {
        match self {
            SetExpr::Half(h) => out.push(h),
            SetExpr::And(v) | SetExpr::Or(v) => v.iter().for_each(|e| e.collect(out)),
            SetExpr::Not(e) => e.collect(out),
            SetExpr::Empty | SetExpr::Full => {}
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_on(x, None)
    }

    /// Membership of `x + side·ε·ν_P` for infinitesimal `ε` when `x` lies on
    /// the plane `P` and nowhere else on the arrangement.
    fn contains_on(&self, x: &[f64], on: Option<(&Plane, f64)>) -> bool {
        match self {
            SetExpr::Empty => false,
            SetExpr::Full => true,
            SetExpr::Half(h) => match on {
                Some((p, side)) => match p.orientation_of(h) {
                    1 => side < 0.0,
                    -1 => side > 0.0,
                    _ => h.contains(x),
                },
                None => h.contains(x),
            },
            SetExpr::And(v) => v.iter().all(|e| e.contains_on(x, on)),
            SetExpr::Or(v) => v.iter().any(|e| e.contains_on(x, on)),
            SetExpr::Not(e) => !e.contains_on(x, on),
        }
    }

    fn map_halfspaces(&self, f: &dyn Fn(&Halfspace) -> SetExpr) -> SetExpr {
        match self {
            SetExpr::Half(h) => f(h),
            SetExpr::And(v) => SetExpr::And(v.iter().map(|e| e.map_halfspaces(f)).collect()),
            SetExpr::Or(v) => SetExpr::Or(v.iter().map(|e| e.map_halfspaces(f)).collect()),
            SetExpr::Not(e) => SetExpr::Not(Box::new(e.map_halfspaces(f))),
            SetExpr::Empty => SetExpr::Empty,
            SetExpr::Full => SetExpr::Full,
        }
    }

    /// The section `{x̂ : (x̂ with x_k = value) ∈ E}` in one dimension less.
    pub fn fix_coordinate(&self, k: usize, value: f64) -> SetExpr {
        self.map_halfspaces(&|h| {
            let mut n = h.normal.clone();
            let c = h.offset - n[k] * value;
            n.remove(k);
            if norm2(&n) < 1e-12 {
                if 0.0 < c {
                    SetExpr::Full
                } else {
                    SetExpr::Empty
                }
            } else {
                SetExpr::Half(Halfspace::new(n, c).expect("finite section"))
            }
        })
    }

    /// `E × ℝ`: every half-space gets a zero last coefficient.
    pub fn cylinder(&self) -> SetExpr {
        self.map_halfspaces(&|h| {
            let mut n = h.normal.clone();
            n.push(0.0);
            SetExpr::Half(Halfspace {
                normal: n,
                offset: h.offset,
            })
        })
    }

    /// The image under `x ↦ s·x`, `s > 0`.
    pub fn scaled(&self, s: f64) -> SetExpr {
        self.map_halfspaces(&|h| {
            SetExpr::Half(Halfspace {
                normal: h.normal.clone(),
                offset: h.offset * s,
            })
        })
    }
}

/// A flat piece of the boundary with outward unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    /// (m−1)-dimensional measure; a point counts 1 when m = 1.
    pub area: f64,
    pub anchor: Vec<f64>,
    /// Ordered corners (a point, a segment or a convex polygon). Empty when
    /// the facet was given by normal, area and anchor only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Vec<f64>>,
}

impl Facet {
    fn negated(&self) -> Facet {
        Facet {
            normal: self.normal.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }
}

fn polygon_area_centroid(poly: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let m = poly[0].len();
    let mut c = vec![0.0; m];
    for p in poly {
        for k in 0..m {
            c[k] += p[k];
        }
    }
    let c = scale(&c, 1.0 / poly.len() as f64);
    let area = match m {
        1 => 1.0,
        2 => norm2(&sub(&poly[poly.len() - 1], &poly[0])),
        _ => {
            let mut acc = [0.0; 3];
            for i in 1..poly.len().saturating_sub(1) {
                let x = cross3(&sub(&poly[i], &poly[0]), &sub(&poly[i + 1], &poly[0]));
                for k in 0..3 {
                    acc[k] += x[k];
                }
            }
            0.5 * norm2(&acc)
        }
    };
    (area, c)
}

/// Sutherland–Hodgman: keeps the part of a convex polygon with `a·x ≤ b`.
fn clip_polygon(poly: &[Vec<f64>], a: &[f64], b: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    if poly.is_empty() {
        return out;
    }
    for i in 0..poly.len() {
        let p = &poly[i];
        let q = &poly[(i + 1) % poly.len()];
        let dp = dot(a, p) - b;
        let dq = dot(a, q) - b;
        if dp <= 0.0 {
            out.push(p.clone());
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let s = dp / (dp - dq);
            out.push(p.iter().zip(q).map(|(x, y)| x + s * (y - x)).collect());
        }
    }
    out
}

/// Closed segment `[a, b]` clipped to the closed box.
fn clip_segment(a: &[f64], b: &[f64], w: &Window) -> Option<(Vec<f64>, Vec<f64>)> {
    let d = sub(b, a);
    let (mut s0, mut s1) = (0.0_f64, 1.0_f64);
    for k in 0..a.len() {
        if d[k].abs() < 1e-300 {
            if a[k] < w.lo()[k] || a[k] > w.hi()[k] {
                return None;
            }
        } else {
            let (mut u, mut v) = ((w.lo()[k] - a[k]) / d[k], (w.hi()[k] - a[k]) / d[k]);
            if u > v {
                std::mem::swap(&mut u, &mut v);
            }
            s0 = s0.max(u);
            s1 = s1.min(v);
        }
    }
    if s1 <= s0 {
        return None;
    }
    let at = |s: f64| a.iter().zip(&d).map(|(x, y)| x + s * y).collect::<Vec<f64>>();
    Some((at(s0), at(s1)))
}

fn clip_polygon_to_box(poly: &[Vec<f64>], w: &Window) -> Vec<Vec<f64>> {
    let m = w.dim();
    let mut cur = poly.to_vec();
    for k in 0..m {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        cur = clip_polygon(&cur, &e, w.hi()[k]);
        e[k] = -1.0;
        cur = clip_polygon(&cur, &e, -w.lo()[k]);
    }
    cur
}

/// The convex pieces of the hyperplane `P` inside the closed window, cut by
/// every other plane of the arrangement.
fn plane_cells(p: &Plane, others: &[&Plane], w: &Window) -> Vec<Vec<Vec<f64>>> {
    let m = w.dim();
    let scale_len = w.diameter();
    let eps = 1e-12 * scale_len.max(1.0);
    match m {
        1 => {
            let x = p.offset / p.normal[0];
            if w.contains(&[x]) {
                vec![vec![vec![x]]]
            } else {
                Vec::new()
            }
        }
        2 => {
            let p0 = scale(&p.normal, p.offset);
            let d = vec![-p.normal[1], p.normal[0]];
            let big = 2.0 * (scale_len + norm2(&p0));
            let a: Vec<f64> = p0.iter().zip(&d).map(|(x, y)| x - big * y).collect();
            let b: Vec<f64> = p0.iter().zip(&d).map(|(x, y)| x + big * y).collect();
            let Some((a, b)) = clip_segment(&a, &b, w) else {
                return Vec::new();
            };
            let len = norm2(&sub(&b, &a));
            if len <= eps {
                return Vec::new();
            }
            let dir = scale(&sub(&b, &a), 1.0 / len);
            let mut cuts = vec![0.0, len];
            for q in others {
                let den = dot(&q.normal, &dir);
                if den.abs() < 1e-14 {
                    continue;
                }
                let s = -q.signed(&a) / den;
                if s > eps && s < len - eps {
                    cuts.push(s);
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|x, y| (*x - *y).abs() <= eps);
            cuts.windows(2)
                .map(|s| {
                    let at = |t: f64| a.iter().zip(&dir).map(|(x, y)| x + t * y).collect::<Vec<f64>>();
                    vec![at(s[0]), at(s[1])]
                })
                .collect()
        }
        _ => {
            let n = &p.normal;
            let k = (0..3)
                .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
                .unwrap();
            let mut u = vec![0.0; 3];
            u[k] = 1.0;
            let u = sub(&u, &scale(n, n[k]));
            let u = scale(&u, 1.0 / norm2(&u));
            let v = cross3(n, &u).to_vec();
            let c = w.center();
            let q = sub(&c, &scale(n, p.signed(&c)));
            let r = scale_len;
            let corner = |a: f64, b: f64| -> Vec<f64> {
                (0..3).map(|i| q[i] + r * (a * u[i] + b * v[i])).collect()
            };
            let square = vec![corner(-1.0, -1.0), corner(1.0, -1.0), corner(1.0, 1.0), corner(-1.0, 1.0)];
            let poly = clip_polygon_to_box(&square, w);
            if poly.len() < 3 || polygon_area_centroid(&poly).0 <= eps * eps {
                return Vec::new();
            }
            let mut cells = vec![poly];
            for q in others {
                let cr = cross3(&q.normal, n);
                if norm2(&cr) < 1e-12 {
                    continue;
                }
                let mut next = Vec::with_capacity(cells.len() + 1);
                for cell in cells {
                    let (lo, hi) = cell.iter().fold((f64::MAX, f64::MIN), |(lo, hi), x| {
                        let s = q.signed(x);
                        (lo.min(s), hi.max(s))
                    });
                    if lo < -eps && hi > eps {
                        let neg = scale(&q.normal, -1.0);
                        let a = clip_polygon(&cell, &q.normal, q.offset);
                        let b = clip_polygon(&cell, &neg, -q.offset);
                        for piece in [a, b] {
                            if piece.len() >= 3 && polygon_area_centroid(&piece).0 > eps * eps {
                                next.push(piece);
                            }
                        }
                    } else {
                        next.push(cell);
                    }
                }
                cells = next;
            }
            cells
        }
    }
}

/// Facets of the set `expr` in the open window, from the arrangement of its
/// half-space planes. Pieces lying on the window faces are left out.
pub(crate) fn arrangement_facets(expr: &SetExpr, w: &Window) -> Vec<Facet> {
    let mut planes: Vec<Plane> = Vec::new();
    for h in expr.halfspaces() {
        let p = h.plane();
        if !planes.iter().any(|q| q.same_as(&p)) {
            planes.push(p);
        }
    }
    let face_tol = 1e-12 * w.diameter().max(1.0);
    let mut facets = Vec::new();
    for (i, p) in planes.iter().enumerate() {
        if w.is_face_plane(&p.normal, p.offset, face_tol) {
            continue;
        }
        let others: Vec<&Plane> = planes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q)
            .collect();
        for cell in plane_cells(p, &others, w) {
            let (area, centroid) = polygon_area_centroid(&cell);
            let below = expr.contains_on(&centroid, Some((p, -1.0)));
            let above = expr.contains_on(&centroid, Some((p, 1.0)));
            if below == above {
                continue;
            }
            let normal = if below { p.normal.clone() } else { scale(&p.normal, -1.0) };
            facets.push(Facet {
                normal,
                area,
                anchor: centroid,
                vertices: cell,
            });
        }
    }
    facets
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralSet {
    dim: usize,
    facets: Vec<Facet>,
    expr: Option<SetExpr>,
    bound: Window,
}

impl PolyhedralSet {
    /// A set given by half-space generators; facets are derived inside
    /// `bound`.
    pub fn from_expr(expr: SetExpr, bound: Window) -> Result<Self> {
        let dim = bound.dim();
        if dim > MAX_SET_DIM {
            return Err(Error::Unsupported(format!(
                "polyhedral sets are supported up to dimension {MAX_SET_DIM}, got {dim}"
            )));
        }
        for h in expr.halfspaces() {
            if h.normal.len() != dim {
                return Err(Error::dims("half-space", h.normal.len(), "window", dim));
            }
        }
        let facets = arrangement_facets(&expr, &bound);
        Ok(PolyhedralSet {
            dim,
            facets,
            expr: Some(expr),
            bound,
        })
    }

    /// A set given by an explicit facet list valid inside `bound`.
    pub fn from_facets(facets: Vec<Facet>, bound: Window) -> Result<Self> {
        let dim = bound.dim();
        let tol = 1e-9 * bound.diameter().max(1.0);
        let mut out = Vec::with_capacity(facets.len());
        for mut f in facets {
            if f.normal.len() != dim {
                return Err(Error::dims("facet normal", f.normal.len(), "window", dim));
            }
            if f.anchor.len() != dim {
                return Err(Error::dims("facet anchor", f.anchor.len(), "window", dim));
            }
            if f.normal.iter().chain(&f.anchor).any(|v| !v.is_finite()) || !f.area.is_finite() {
                return Err(Error::NonFinite("facet"));
            }
            let l = norm2(&f.normal);
            if (l - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidSet(format!("facet normal has length {l}, expected 1")));
            }
            f.normal = scale(&f.normal, 1.0 / l);
            if f.area < 0.0 {
                return Err(Error::InvalidSet("negative facet area".into()));
            }
            if !bound.contains_closed(&f.anchor, tol) {
                return Err(Error::InvalidSet(format!(
                    "facet anchor {:?} outside the bounding window {bound}",
                    f.anchor
                )));
            }
            if f.vertices.iter().any(|v| v.len() != dim) {
                return Err(Error::dims("facet vertex", f.vertices[0].len(), "window", dim));
            }
            out.push(f);
        }
        Ok(PolyhedralSet {
            dim,
            facets: out,
            expr: None,
            bound,
        })
    }

    pub fn halfspace(normal: Vec<f64>, offset: f64, bound: Window) -> Result<Self> {
        Self::from_expr(SetExpr::half(normal, offset)?, bound)
    }

    pub fn intersection(halfspaces: Vec<Halfspace>, bound: Window) -> Result<Self> {
        Self::from_expr(SetExpr::And(halfspaces.into_iter().map(SetExpr::Half).collect()), bound)
    }

    pub fn union(halfspaces: Vec<Halfspace>, bound: Window) -> Result<Self> {
        Self::from_expr(SetExpr::Or(halfspaces.into_iter().map(SetExpr::Half).collect()), bound)
    }

    /// The open box `(lo, hi)`.
    pub fn aabb(lo: &[f64], hi: &[f64], bound: Window) -> Result<Self> {
        Self::from_expr(SetExpr::open_box(lo, hi)?, bound)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn expr(&self) -> Option<&SetExpr> {
        self.expr.as_ref()
    }

    pub fn bound(&self) -> &Window {
        &self.bound
    }

    pub fn contains(&self, x: &[f64]) -> Option<bool> {
        self.expr.as_ref().map(|e| e.contains(x))
    }

    /// `W \ E` with the same bounding window.
    pub fn complement(&self) -> PolyhedralSet {
        PolyhedralSet {
            dim: self.dim,
            facets: self.facets.iter().map(Facet::negated).collect(),
            expr: self.expr.clone().map(SetExpr::complement),
            bound: self.bound.clone(),
        }
    }

    /// The image under `x ↦ λx`, `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<PolyhedralSet> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Invalid(format!("scale factor must be positive, got {lambda}")));
        }
        let area_factor = lambda.powi(self.dim as i32 - 1);
        Ok(PolyhedralSet {
            dim: self.dim,
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    area: f.area * area_factor,
                    anchor: scale(&f.anchor, lambda),
                    vertices: f.vertices.iter().map(|v| scale(v, lambda)).collect(),
                })
                .collect(),
            expr: self.expr.as_ref().map(|e| e.scaled(lambda)),
            bound: self.bound.scaled(lambda),
        })
    }

    /// Facets clipped to the open window `w`, which must lie inside the
    /// bounding window.
    pub fn facets_in(&self, w: &Window) -> Result<Vec<Facet>> {
        if w.dim() != self.dim {
            return Err(Error::dims("set", self.dim, "window", w.dim()));
        }
        if !w.is_within(&self.bound) {
            return Err(Error::WindowExceeds {
                window: w.to_string(),
                bound: self.bound.to_string(),
            });
        }
        let tol = 1e-12 * w.diameter().max(1.0);
        let mut out = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            if w.is_face_plane(&f.normal, dot(&f.normal, &f.anchor), tol) {
                continue;
            }
            if f.vertices.is_empty() {
                if w.contains(&f.anchor) {
                    out.push(f.clone());
                }
                continue;
            }
            let clipped: Vec<Vec<f64>> = match self.dim {
                1 => {
                    if w.contains(&f.vertices[0]) {
                        f.vertices.clone()
                    } else {
                        continue;
                    }
                }
                2 => match clip_segment(&f.vertices[0], &f.vertices[1], w) {
                    Some((a, b)) => vec![a, b],
                    None => continue,
                },
                _ => clip_polygon_to_box(&f.vertices, w),
            };
            if clipped.is_empty() || (self.dim == 3 && clipped.len() < 3) {
                continue;
            }
            let (area, anchor) = polygon_area_centroid(&clipped);
            if area <= 0.0 {
                continue;
            }
            out.push(Facet {
                normal: f.normal.clone(),
                area,
                anchor,
                vertices: clipped,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> PolyhedralSet {
        PolyhedralSet::aabb(&[0.0; 3], &[1.0; 3], Window::cube(3, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn cube_facets() {
        let c = unit_cube();
        let total: f64 = c.facets().iter().map(|f| f.area).sum();
        assert!((total - 6.0).abs() < 1e-12);
        for f in c.facets() {
            let out = f.anchor.iter().zip(&f.normal).map(|(a, n)| a + 1e-3 * n).collect::<Vec<_>>();
            assert!(!c.contains(&out).unwrap());
        }
    }

    #[test]
    fn square_in_plane() {
        let s = PolyhedralSet::aabb(&[0.0, 0.0], &[1.0, 2.0], Window::cube(2, 3.0).unwrap()).unwrap();
        let total: f64 = s.facets().iter().map(|f| f.area).sum();
        assert!((total - 6.0).abs() < 1e-12);
    }

    #[test]
    fn interval_on_line() {
        let s = PolyhedralSet::aabb(&[0.0], &[1.0], Window::cube(1, 3.0).unwrap()).unwrap();
        assert_eq!(s.facets().len(), 2);
        let n: Vec<f64> = s.facets().iter().map(|f| f.normal[0] * f.anchor[0]).collect();
        assert!(n.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn window_faces_excluded() {
        let w = Window::cube(2, 1.0).unwrap();
        let s = PolyhedralSet::halfspace(vec![1.0, 0.0], 1.0, w.clone()).unwrap();
        assert!(s.facets().is_empty());
        let s = PolyhedralSet::halfspace(vec![1.0, 0.0], 0.25, w).unwrap();
        assert_eq!(s.facets().len(), 1);
        assert!((s.facets()[0].area - 2.0).abs() < 1e-12);
    }

    #[test]
    fn clipping_to_subwindow() {
        let c = unit_cube();
        let w = Window::new(vec![0.5, -1.0, -1.0], vec![2.0, 2.0, 2.0]).unwrap();
        let total: f64 = c.facets_in(&w).unwrap().iter().map(|f| f.area).sum();
        // half of four lateral faces plus the far face; the cut face is not boundary
        assert!((total - 3.0).abs() < 1e-12, "{total}");
        let too_big = Window::cube(3, 5.0).unwrap();
        assert!(matches!(c.facets_in(&too_big), Err(Error::WindowExceeds { .. })));
    }

    #[test]
    fn cross_diagonals() {
        let a = SetExpr::And(vec![
            SetExpr::half(vec![-1.0, 1.0], 0.0).unwrap(),
            SetExpr::half(vec![-1.0, -1.0], 0.0).unwrap(),
        ]);
        let b = SetExpr::And(vec![
            SetExpr::half(vec![1.0, -1.0], 0.0).unwrap(),
            SetExpr::half(vec![1.0, 1.0], 0.0).unwrap(),
        ]);
        let s = PolyhedralSet::from_expr(SetExpr::Or(vec![a, b]), Window::cube(2, 1.0).unwrap()).unwrap();
        let total: f64 = s.facets().iter().map(|f| f.area).sum();
        assert!((total - 4.0 * 2.0_f64.sqrt()).abs() < 1e-12);
        assert!(s.contains(&[0.5, 0.1]).unwrap());
        assert!(!s.contains(&[0.1, 0.5]).unwrap());
    }

    #[test]
    fn sections() {
        let e = SetExpr::open_box(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap();
        let s = e.fix_coordinate(2, 0.5);
        assert!(s.contains(&[0.5, 0.5]));
        let s = e.fix_coordinate(2, 1.5);
        assert!(!s.contains(&[0.5, 0.5]));
    }
}
