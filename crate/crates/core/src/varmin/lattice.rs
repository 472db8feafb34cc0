//! Cell-centred lattices with a one-cell collar, and functions and sets on
//! them.
//!
//! Cells are addressed by full-array indices `(i, j)` with `0 ≤ i ≤ nx+1`,
//! `0 ≤ j ≤ ny+1`; the interior is `1..=nx × 1..=ny` and the rest is the
//! collar, which carries the fixed exterior data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PolyhedralSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Cells are squares in the plane.
    #[default]
    Planar,
    /// Cells are annuli `(r, t)` of a rotationally symmetric set in ℝ³;
    /// the first coordinate is the radius.
    Axisymmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    /// Lower corner of the interior.
    #[serde(default)]
    pub origin: [f64; 2],
    #[serde(default)]
    pub geometry: Geometry,
}

/// A rectangle of interior cells, `(i, j)` being its first cell in interior
/// coordinates (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellWindow {
    pub i: usize,
    pub j: usize,
    pub nx: usize,
    pub ny: usize,
}

impl CellWindow {
    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Full-array index ranges.
    pub fn full_range(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        (self.i + 1..self.i + 1 + self.nx, self.j + 1..self.j + 1 + self.ny)
    }

    pub fn contains_full(&self, i: usize, j: usize) -> bool {
        let (a, b) = self.full_range();
        a.contains(&i) && b.contains(&j)
    }
}

impl std::fmt::Display for CellWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cells [{}..{}) × [{}..{})", self.i, self.i + self.nx, self.j, self.j + self.ny)
    }
}

impl Lattice {
    pub fn new(nx: usize, ny: usize, h: f64, origin: [f64; 2], geometry: Geometry) -> Result<Self> {
        let l = Lattice { nx, ny, h, origin, geometry };
        l.validate()?;
        Ok(l)
    }

    pub fn planar(nx: usize, ny: usize, h: f64, origin: [f64; 2]) -> Result<Self> {
        Self::new(nx, ny, h, origin, Geometry::Planar)
    }

    /// Radii `0 < r < nx·h`, heights from `t0`.
    pub fn axisymmetric(nr: usize, nt: usize, h: f64, t0: f64) -> Result<Self> {
        Self::new(nr, nt, h, [0.0, t0], Geometry::Axisymmetric)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Invalid("lattice needs at least one interior cell per axis".into()));
        }
        if !(self.h > 0.0 && self.h.is_finite()) || self.origin.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("lattice spacing must be positive and finite, got {}", self.h)));
        }
        if self.geometry == Geometry::Axisymmetric && self.origin[0] < -1e-12 {
            return Err(Error::Invalid("axisymmetric lattices need non-negative radii".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.nx + 2
    }

    pub fn len(&self) -> usize {
        (self.nx + 2) * (self.ny + 2)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 2) + i
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        (1..=self.nx).contains(&i) && (1..=self.ny).contains(&j)
    }

    pub fn interior_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 - 0.5) * self.h,
            self.origin[1] + (j as f64 - 0.5) * self.h,
        ]
    }

    /// Area of the cells carrying forward differences, `(nx+1)(ny+1)h²`.
    pub fn region_area(&self) -> f64 {
        ((self.nx + 1) * (self.ny + 1)) as f64 * self.h * self.h
    }

    pub fn whole(&self) -> CellWindow {
        CellWindow { i: 0, j: 0, nx: self.nx, ny: self.ny }
    }

    pub fn check_window(&self, w: &CellWindow) -> Result<()> {
        if w.nx == 0 || w.ny == 0 || w.i + w.nx > self.nx || w.j + w.ny > self.ny {
            return Err(Error::Invalid(format!(
                "window {w} does not fit the {}×{} interior",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    /// The lattice whose interior is `w` and whose collar is the ring of
    /// cells around it.
    pub fn sub(&self, w: &CellWindow) -> Lattice {
        Lattice {
            nx: w.nx,
            ny: w.ny,
            h: self.h,
            origin: [
                self.origin[0] + w.i as f64 * self.h,
                self.origin[1] + w.j as f64 * self.h,
            ],
            geometry: self.geometry,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    lattice: Lattice,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lattice: Lattice, values: Vec<f64>) -> Result<Self> {
        lattice.validate()?;
        if values.len() != lattice.len() {
            return Err(Error::Invalid(format!(
                "expected {} values (interior plus collar), got {}",
                lattice.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid values"));
        }
        Ok(GridFunction { lattice, values })
    }

    /// Samples `f` at every cell centre, collar included.
    pub fn from_fn(lattice: Lattice, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = vec![0.0; lattice.len()];
        for j in 0..lattice.ny + 2 {
            for i in 0..lattice.nx + 2 {
                let c = lattice.center(i, j);
                values[lattice.idx(i, j)] = f(c[0], c[1]);
            }
        }
        Self::new(lattice, values)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.lattice.idx(i, j)]
    }

    /// Collar values in a fixed order (bottom row, top row, then the side
    /// columns).
    pub fn collar(&self) -> Vec<f64> {
        let l = &self.lattice;
        (0..l.ny + 2)
            .flat_map(|j| (0..l.nx + 2).map(move |i| (i, j)))
            .filter(|&(i, j)| !l.is_interior(i, j))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    pub fn collar_range(&self) -> (f64, f64) {
        self.collar()
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(self.lattice.clone(), self.values.iter().map(|v| f(*v)).collect())
    }

    /// Interior values replaced, collar kept.
    pub fn with_interior(&self, f: impl Fn(usize, usize) -> f64) -> GridFunction {
        let mut out = self.clone();
        for j in 1..=self.lattice.ny {
            for i in 1..=self.lattice.nx {
                out.values[self.lattice.idx(i, j)] = f(i, j);
            }
        }
        out
    }

    /// Restriction to a window plus its surrounding ring.
    pub fn sub(&self, w: &CellWindow) -> GridFunction {
        let lat = self.lattice.sub(w);
        let mut values = Vec::with_capacity(lat.len());
        for j in 0..lat.ny + 2 {
            for i in 0..lat.nx + 2 {
                values.push(self.get(w.i + i, w.j + j));
            }
        }
        GridFunction { lattice: lat, values }
    }

    /// `{u > λ}`, or `{u ≥ λ}` when `closed`.
    pub fn threshold(&self, lambda: f64, closed: bool) -> GridSet {
        GridSet {
            lattice: self.lattice.clone(),
            values: self
                .values
                .iter()
                .map(|v| if closed { *v >= lambda } else { *v > lambda })
                .collect(),
        }
    }

    /// Flat `x,y,u` rows over interior and collar.
    pub fn to_csv(&self) -> String {
        let l = &self.lattice;
        let mut s = String::from("x,y,u\n");
        for j in 0..l.ny + 2 {
            for i in 0..l.nx + 2 {
                let c = l.center(i, j);
                s.push_str(&format!("{:.12},{:.12},{:.12}\n", c[0], c[1], self.get(i, j)));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSet {
    lattice: Lattice,
    values: Vec<bool>,
}

impl GridSet {
    pub fn new(lattice: Lattice, values: Vec<bool>) -> Result<Self> {
        lattice.validate()?;
        if values.len() != lattice.len() {
            return Err(Error::Invalid(format!(
                "expected {} cells (interior plus collar), got {}",
                lattice.len(),
                values.len()
            )));
        }
        Ok(GridSet { lattice, values })
    }

    /// Cell-centred digitization of a predicate.
    pub fn digitize(lattice: Lattice, inside: impl Fn(f64, f64) -> bool) -> Result<Self> {
        let mut values = vec![false; lattice.len()];
        for j in 0..lattice.ny + 2 {
            for i in 0..lattice.nx + 2 {
                let c = lattice.center(i, j);
                values[lattice.idx(i, j)] = inside(c[0], c[1]);
            }
        }
        Self::new(lattice, values)
    }

    /// Digitizes a half-space built set. Planar lattices sample `(x, y)`;
    /// axisymmetric ones sample `(r, 0, t)` of a set in ℝ³.
    pub fn from_polyhedral(lattice: Lattice, set: &PolyhedralSet) -> Result<Self> {
        let expr = set
            .expr()
            .ok_or_else(|| Error::Invalid("digitization needs a set built from half-spaces".into()))?;
        let want = match lattice.geometry {
            Geometry::Planar => 2,
            Geometry::Axisymmetric => 3,
        };
        if set.dim() != want {
            return Err(Error::dims("set", set.dim(), "lattice embedding", want));
        }
        match lattice.geometry {
            Geometry::Planar => Self::digitize(lattice, |x, y| expr.contains(&[x, y])),
            Geometry::Axisymmetric => Self::digitize(lattice, |r, t| expr.contains(&[r, 0.0, t])),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.values[self.lattice.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let k = self.lattice.idx(i, j);
        self.values[k] = v;
    }

    pub fn indicator(&self) -> GridFunction {
        GridFunction {
            lattice: self.lattice.clone(),
            values: self.values.iter().map(|b| if *b { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn count(&self) -> usize {
        self.values.iter().filter(|b| **b).count()
    }

    /// Interior rows as strings of `#` and `.`, top row first.
    pub fn render(&self) -> String {
        let l = self.lattice();
        let mut s = String::new();
        for j in (0..l.ny + 2).rev() {
            for i in 0..l.nx + 2 {
                s.push(match (l.is_interior(i, j), self.get(i, j)) {
                    (true, true) => '#',
                    (true, false) => '.',
                    (false, true) => '+',
                    (false, false) => ' ',
                });
            }
            s.push('\n');
        }
        s
    }
}
