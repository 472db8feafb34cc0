use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open axis-aligned box `(lo₁,hi₁) × … × (lo_m,hi_m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        write!(f, "{}", parts.join(" × "))
    }
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::dims("window lower corner", lo.len(), "upper corner", hi.len()));
        }
        if lo.is_empty() {
            return Err(Error::InvalidSet("window of dimension 0".into()));
        }
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("window corners"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::InvalidSet(format!(
                "window corners must satisfy lo < hi componentwise, got {lo:?} and {hi:?}"
            )));
        }
        Ok(Window { lo, hi })
    }

    /// `(-r, r)^dim`.
    pub fn cube(dim: usize, r: f64) -> Result<Self> {
        Window::new(vec![-r; dim], vec![r; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *a < *v && *v < *b)
    }

    pub fn contains_closed(&self, x: &[f64], tol: f64) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *a - tol <= *v && *v <= *b + tol)
    }

    /// Inclusion of the closures, up to a relative tolerance.
    pub fn is_within(&self, outer: &Window) -> bool {
        let tol = 1e-12 * outer.diameter().max(1.0);
        self.dim() == outer.dim()
            && self
                .lo
                .iter()
                .zip(&outer.lo)
                .all(|(a, b)| *a >= *b - tol)
            && self.hi.iter().zip(&outer.hi).all(|(a, b)| *a <= *b + tol)
    }

    pub fn scaled(&self, s: f64) -> Window {
        let (a, b): (Vec<f64>, Vec<f64>) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| {
                let (x, y) = (l * s, h * s);
                (x.min(y), x.max(y))
            })
            .unzip();
        Window { lo: a, hi: b }
    }

    /// Drops coordinate `k`.
    pub fn without(&self, k: usize) -> Option<Window> {
        if self.dim() < 2 {
            return None;
        }
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.remove(k);
        hi.remove(k);
        Some(Window { lo, hi })
    }

    /// Appends an interval as a new last coordinate.
    pub fn extended(&self, lo: f64, hi: f64) -> Result<Window> {
        let mut l = self.lo.clone();
        let mut h = self.hi.clone();
        l.push(lo);
        h.push(hi);
        Window::new(l, h)
    }

    /// Whether the hyperplane `ν·x = c` is one of the box faces.
    pub(crate) fn is_face_plane(&self, normal: &[f64], offset: f64, tol: f64) -> bool {
        let axis = normal
            .iter()
            .position(|v| (v.abs() - 1.0).abs() <= 1e-12);
        let Some(k) = axis else { return false };
        if normal
            .iter()
            .enumerate()
            .any(|(i, v)| i != k && v.abs() > 1e-12)
        {
            return false;
        }
        let x = offset * normal[k].signum();
        (x - self.lo[k]).abs() <= tol || (x - self.hi[k]).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_corners() {
        assert!(Window::new(vec![0.0], vec![0.0]).is_err());
        assert!(Window::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let w = Window::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(w.volume(), 4.0);
        assert!(w.contains(&[1.0, 0.0]));
        assert!(!w.contains(&[2.0, 0.0]));
    }

    #[test]
    fn inclusion_and_faces() {
        let outer = Window::cube(2, 1.0).unwrap();
        let inner = Window::new(vec![-0.5, -1.0], vec![0.5, 0.0]).unwrap();
        assert!(inner.is_within(&outer));
        assert!(!outer.is_within(&inner));
        assert!(outer.is_face_plane(&[0.0, -1.0], 1.0, 1e-12));
        assert!(!outer.is_face_plane(&[0.0, 1.0], 0.5, 1e-12));
    }
}
