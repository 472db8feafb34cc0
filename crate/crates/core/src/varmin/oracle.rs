//! Exhaustive minimization of the face perimeter over a small window.

use rayon::prelude::*;

use super::energy::{faces_energy, window_faces, Face};
use super::lattice::{CellWindow, GridSet};
use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};

pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub set: GridSet,
    /// Perimeter over the faces touching the window.
    pub energy: f64,
    /// The winning bit pattern; the first window cell is the most
    /// significant bit.
    pub pattern: u32,
    /// Number of fillings attaining the optimum.
    pub optimal_patterns: usize,
}

fn apply(set: &mut [bool], cells: &[usize], pattern: u32) {
    let k = cells.len();
    for (pos, &c) in cells.iter().enumerate() {
        set[c] = pattern >> (k - 1 - pos) & 1 == 1;
    }
}

fn energy_of(faces: &[Face], base: &[bool], cells: &[usize], pattern: u32) -> f64 {
    let mut v = base.to_vec();
    apply(&mut v, cells, pattern);
    faces_energy(faces, &v)
}

/// Global minimizer over the `2^k` fillings of the window, with the rest of
/// `trace` as exterior data. Ties go to the smallest bit pattern.
pub fn brute_force_min_set(norm: &Anisotropy, trace: &GridSet, window: &CellWindow) -> Result<OracleResult> {
    let l = trace.lattice();
    l.check_window(window)?;
    let k = window.cells();
    if k > BRUTE_FORCE_LIMIT {
        return Err(Error::TooManyCells { cells: k, limit: BRUTE_FORCE_LIMIT });
    }
    let faces = window_faces(l, norm, window)?;
    let (ri, rj) = window.full_range();
    let cells: Vec<usize> = rj.flat_map(|j| ri.clone().map(move |i| (i, j))).map(|(i, j)| l.idx(i, j)).collect();
    let base = trace.values().to_vec();
    let total = 1u32 << k;

    let local: &[Face] = &faces;
    let best = (0..total)
        .into_par_iter()
        .with_min_len(1 << 10)
        .map_init(|| base.clone(), |buf, m| {
            apply(buf, &cells, m);
            faces_energy(local, buf)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let tol = 1e-12 * best.abs().max(1.0);
    let (pattern, optimal_patterns) = (0..total)
        .into_par_iter()
        .with_min_len(1 << 10)
        .filter(|&m| energy_of(local, &base, &cells, m) <= best + tol)
        .map(|m| (m, 1usize))
        .reduce(|| (u32::MAX, 0), |a, b| (a.0.min(b.0), a.1 + b.1));
    let mut values = base;
    apply(&mut values, &cells, pattern);
    let energy = faces_energy(&faces, &values);
    Ok(OracleResult { set: GridSet::new(l.clone(), values)?, energy, pattern, optimal_patterns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varmin::lattice::Lattice;

    #[test]
    fn half_plane_continues() {
        let l = Lattice::planar(3, 3, 1.0, [0.0, 0.0]).unwrap();
        let trace = GridSet::digitize(l.clone(), |x, y| x < 1.5 && (!(0.0..=3.0).contains(&y) || x < 0.0)).unwrap();
        let hp = GridSet::digitize(l.clone(), |x, _| x < 1.5).unwrap();
        let l1 = Anisotropy::p_norm(2, 1.0).unwrap();
        let r = brute_force_min_set(&l1, &trace, &l.whole()).unwrap();
        assert_eq!(r.set, hp);
    }

    #[test]
    fn empty_exterior() {
        let l = Lattice::planar(4, 4, 1.0, [0.0, 0.0]).unwrap();
        let trace = GridSet::digitize(l.clone(), |_, _| false).unwrap();
        let r = brute_force_min_set(&Anisotropy::euclidean(2).unwrap(), &trace, &l.whole()).unwrap();
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.set.count(), 0);
    }

    #[test]
    fn refuses_large_windows() {
        let l = Lattice::planar(5, 5, 1.0, [0.0, 0.0]).unwrap();
        let trace = GridSet::digitize(l.clone(), |_, _| false).unwrap();
        assert!(matches!(
            brute_force_min_set(&Anisotropy::euclidean(2).unwrap(), &trace, &l.whole()),
            Err(Error::TooManyCells { cells: 25, .. })
        ));
    }
}
