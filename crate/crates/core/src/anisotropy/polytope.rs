//! Centrally symmetric polytopes as unit balls.
//!
//! A polytope is kept in both representations: its extreme vertices and the
//! facet normals `a` with `a·x ≤ 1` on every facet. The Minkowski functional
//! is `max_a a·x`, the support function is `max_v v·y`, and the polar body
//! swaps the two lists.

use crate::error::{Error, Result};
use crate::linalg::{combinations, dot, rank, solve};

pub const MAX_POLYTOPE_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Vec<f64>>,
}

fn push_unique(list: &mut Vec<Vec<f64>>, p: Vec<f64>, tol: f64) -> bool {
    if list
        .iter()
        .any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= tol))
    {
        false
    } else {
        list.push(p);
        true
    }
}

impl Polytope {
    /// Builds the polytope `conv(points)`.
    ///
    /// The point list must be symmetric about the origin and span ℝ^dim;
    /// interior points are allowed and dropped.
    pub fn from_vertices(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::DegeneratePolytope("empty vertex list".into()))?;
        if dim == 0 || dim > MAX_POLYTOPE_DIM {
            return Err(Error::DegeneratePolytope(format!(
                "polytope dimension {dim} outside 1..={MAX_POLYTOPE_DIM}"
            )));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DegeneratePolytope("vertices of mixed dimension".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("polytope vertices"));
        }
        let scale = points
            .iter()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Err(Error::DegeneratePolytope("all vertices at the origin".into()));
        }
        let tol = 1e-9 * scale;

        let mut pts: Vec<Vec<f64>> = Vec::new();
        for p in points {
            push_unique(&mut pts, p.clone(), tol);
        }
        for p in &pts {
            let neg: Vec<f64> = p.iter().map(|x| -x).collect();
            if !pts
                .iter()
                .any(|q| q.iter().zip(&neg).all(|(a, b)| (a - b).abs() <= tol))
            {
                return Err(Error::DegeneratePolytope(format!(
                    "vertex list is not symmetric about the origin: {p:?} has no opposite"
                )));
            }
        }
        if rank(&pts, tol) < dim {
            return Err(Error::DegeneratePolytope(
                "vertices do not span the space (empty interior)".into(),
            ));
        }

        // Every facet hyperplane a·x = 1 passes through `dim` linearly
        // independent points; enumerate candidate subsets and keep the
        // supporting ones.
        let mut facets: Vec<Vec<f64>> = Vec::new();
        for subset in combinations(pts.len(), dim) {
            let m: Vec<Vec<f64>> = subset.iter().map(|&i| pts[i].clone()).collect();
            let Some(a) = solve(&m, &vec![1.0; dim]) else {
                continue;
            };
            if pts.iter().all(|p| dot(&a, p) <= 1.0 + 1e-9) {
                let atol = 1e-9 * a.iter().fold(1.0_f64, |s, x| s.max(x.abs()));
                push_unique(&mut facets, a, atol);
            }
        }
        if facets.is_empty() {
            return Err(Error::DegeneratePolytope("no facets found".into()));
        }

        // Extreme points are those where the active facet normals span ℝ^dim.
        let vertices: Vec<Vec<f64>> = pts
            .into_iter()
            .filter(|p| {
                let active: Vec<Vec<f64>> = facets
                    .iter()
                    .filter(|a| (dot(a, p) - 1.0).abs() <= 1e-9)
                    .cloned()
                    .collect();
                rank(&active, 1e-9) == dim
            })
            .collect();

        Ok(Polytope {
            dim,
            vertices,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Facet normals `a`, each facet being `{x : a·x = 1}`.
    pub fn facet_normals(&self) -> &[Vec<f64>] {
        &self.facets
    }

    /// Minkowski functional of the polytope.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|a| dot(a, x))
            .fold(0.0_f64, f64::max)
    }

    /// Support function `max_v v·y`.
    pub fn support(&self, y: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, y))
            .fold(0.0_f64, f64::max)
    }

    /// The polar polytope. Exact: vertex and facet lists trade places.
    pub fn polar(&self) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self.facets.clone(),
            facets: self.vertices.clone(),
        }
    }

    /// Vertices attaining the support function in direction `y`.
    pub fn maximizing_vertices(&self, y: &[f64]) -> Vec<&[f64]> {
        let best = self.support(y);
        let tol = 1e-12 * best.abs().max(1.0);
        self.vertices
            .iter()
            .filter(|v| dot(v, y) >= best - tol)
            .map(Vec::as_slice)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(d: usize) -> Vec<Vec<f64>> {
        (0..1usize << d)
            .map(|m| {
                (0..d)
                    .map(|i| if m >> i & 1 == 1 { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cube_has_expected_facets() {
        for d in 1..=4 {
            let p = Polytope::from_vertices(&cube(d)).unwrap();
            assert_eq!(p.facet_normals().len(), 2 * d);
            assert_eq!(p.vertices().len(), 1 << d);
            let mut x = vec![0.0; d];
            x[0] = 0.5;
            assert!((p.gauge(&x) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_points_dropped() {
        let mut pts = cube(2);
        pts.push(vec![0.5, 0.0]);
        pts.push(vec![-0.5, 0.0]);
        let p = Polytope::from_vertices(&pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn polar_of_square_is_diamond() {
        let p = Polytope::from_vertices(&cube(2)).unwrap().polar();
        assert!((p.gauge(&[1.0, 1.0]) - 2.0).abs() < 1e-12);
        assert!((p.support(&[1.0, 1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_rejected() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]];
        assert!(matches!(
            Polytope::from_vertices(&pts),
            Err(Error::DegeneratePolytope(_))
        ));
    }

    #[test]
    fn flat_rejected() {
        let pts = vec![vec![1.0, 1.0], vec![-1.0, -1.0]];
        assert!(Polytope::from_vertices(&pts).is_err());
    }
}
