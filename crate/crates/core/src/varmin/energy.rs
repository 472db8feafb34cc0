//! Discrete energies: the area functional of grid functions and the
//! face-based perimeter of grid sets.

use std::f64::consts::PI;

use super::lattice::{CellWindow, Geometry, GridFunction, GridSet, Lattice};
use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};

/// `Σ h² Φ°(−D_h u, 1)` over the cells `[0, nx] × [0, ny]` of the full
/// array, with forward differences.
pub fn discrete_energy(u: &GridFunction, norm: &Anisotropy) -> Result<f64> {
    let l = u.lattice();
    if l.geometry != Geometry::Planar {
        return Err(Error::Unsupported("the area functional is defined on planar lattices".into()));
    }
    if norm.dim() != 3 {
        return Err(Error::dims("norm", norm.dim(), "graph space", 3));
    }
    let h = l.h;
    let mut total = 0.0;
    for j in 0..=l.ny {
        for i in 0..=l.nx {
            let c = u.get(i, j);
            let d = [(u.get(i + 1, j) - c) / h, (u.get(i, j + 1) - c) / h];
            total += h * h * norm.eval_dual(&[-d[0], -d[1], 1.0]);
        }
    }
    Ok(total)
}

/// Measure of the face between full-array cells `(i, j)` and its neighbour
/// along `axis`.
pub(crate) fn face_measure(l: &Lattice, i: usize, axis: usize) -> f64 {
    match l.geometry {
        Geometry::Planar => l.h,
        Geometry::Axisymmetric => {
            if axis == 0 {
                let r = (l.origin[0] + i as f64 * l.h).max(0.0);
                2.0 * PI * r * l.h
            } else {
                let r1 = (l.origin[0] + (i as f64 - 1.0) * l.h).max(0.0);
                let r2 = (l.origin[0] + i as f64 * l.h).max(0.0);
                PI * (r2 * r2 - r1 * r1)
            }
        }
    }
}

/// `Ψ°` of the face normals `+e_axis` and `−e_axis`.
pub(crate) fn axis_weights(l: &Lattice, norm: &Anisotropy) -> Result<[[f64; 2]; 2]> {
    let want = match l.geometry {
        Geometry::Planar => 2,
        Geometry::Axisymmetric => 3,
    };
    if norm.dim() != want {
        return Err(Error::dims("norm", norm.dim(), "lattice embedding", want));
    }
    let e = |axis: usize, s: f64| {
        let mut v = vec![0.0; want];
        v[if axis == 0 { 0 } else { want - 1 }] = s;
        norm.eval_dual(&v)
    };
    Ok([[e(0, 1.0), e(0, -1.0)], [e(1, 1.0), e(1, -1.0)]])
}

/// A face between full-array cells `a` and `b = a + e_axis`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Face {
    pub a: usize,
    pub b: usize,
    /// Cost when `a` is inside and `b` outside (normal `+e_axis`).
    pub w_out: f64,
    /// Cost when `b` is inside and `a` outside.
    pub w_in: f64,
}

/// Faces with at least one cell in the window.
pub(crate) fn window_faces(l: &Lattice, norm: &Anisotropy, w: &CellWindow) -> Result<Vec<Face>> {
    let wt = axis_weights(l, norm)?;
    let (ri, rj) = w.full_range();
    let mut out = Vec::new();
    for j in rj.clone() {
        for i in ri.start - 1..ri.end {
            let m = face_measure(l, i, 0);
            out.push(Face { a: l.idx(i, j), b: l.idx(i + 1, j), w_out: m * wt[0][0], w_in: m * wt[0][1] });
        }
    }
    for j in rj.start - 1..rj.end {
        for i in ri.clone() {
            let m = face_measure(l, i, 1);
            out.push(Face { a: l.idx(i, j), b: l.idx(i, j + 1), w_out: m * wt[1][0], w_in: m * wt[1][1] });
        }
    }
    Ok(out)
}

pub(crate) fn faces_energy(faces: &[Face], values: &[bool]) -> f64 {
    faces
        .iter()
        .map(|f| match (values[f.a], values[f.b]) {
            (true, false) => f.w_out,
            (false, true) => f.w_in,
            _ => 0.0,
        })
        .sum()
}

/// Face-based perimeter restricted to the faces touching `window`.
pub fn local_perimeter(set: &GridSet, norm: &Anisotropy, window: &CellWindow) -> Result<f64> {
    set.lattice().check_window(window)?;
    Ok(faces_energy(&window_faces(set.lattice(), norm, window)?, set.values()))
}

/// Face-based perimeter over every face touching the interior.
pub fn set_perimeter(set: &GridSet, norm: &Anisotropy) -> Result<f64> {
    local_perimeter(set, norm, &set.lattice().whole())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear_energy() {
        let l = Lattice::planar(8, 8, 0.125, [0.0, 0.0]).unwrap();
        let cyl = Anisotropy::cylindrical(Anisotropy::euclidean(2).unwrap());
        let zero = GridFunction::from_fn(l.clone(), |_, _| 0.0).unwrap();
        assert!((discrete_energy(&zero, &cyl).unwrap() - l.region_area()).abs() < 1e-12);
        let lin = GridFunction::from_fn(l.clone(), |x, _| x).unwrap();
        assert!((discrete_energy(&lin, &cyl).unwrap() - 2.0 * l.region_area()).abs() < 1e-12);
    }

    #[test]
    fn square_perimeter() {
        let l = Lattice::planar(4, 4, 0.5, [0.0, 0.0]).unwrap();
        let s = GridSet::digitize(l, |x, y| (0.5..1.5).contains(&x) && (0.5..1.5).contains(&y)).unwrap();
        let l1 = Anisotropy::p_norm(2, 1.0).unwrap();
        assert!((set_perimeter(&s, &l1).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn disc_top_and_side() {
        let l = Lattice::axisymmetric(4, 4, 0.5, 0.0).unwrap();
        // cylinder r < 1, 0.5 < t < 1.5
        let s = GridSet::digitize(l, |r, t| r < 1.0 && (0.5..1.5).contains(&t)).unwrap();
        let cyl = Anisotropy::cylindrical(Anisotropy::euclidean(2).unwrap());
        let p = set_perimeter(&s, &cyl).unwrap();
        assert!((p - (2.0 * PI + 2.0 * PI)).abs() < 1e-12, "{p}");
    }
}
