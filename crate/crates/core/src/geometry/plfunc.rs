//! Piecewise-affine functions on rectangular partitions of a planar domain.

use serde::{Deserialize, Serialize};

use super::perimeter::perimeter;
use super::set::{PolyhedralSet, SetExpr};
use super::window::Window;
use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};

/// `u(x) = value + grad·x` on one cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub value: f64,
    #[serde(default)]
    pub grad: [f64; 2],
}

impl AffinePiece {
    pub fn constant(value: f64) -> Self {
        AffinePiece { value, grad: [0.0, 0.0] }
    }

    pub fn at(&self, x: f64, y: f64) -> f64 {
        self.value + self.grad[0] * x + self.grad[1] * y
    }
}

/// Cells `(xs[i], xs[i+1]) × (ys[j], ys[j+1])`, stored row by row (`j·nx + i`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PLFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    cells: Vec<AffinePiece>,
}

fn check_breaks(v: &[f64], what: &str) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::Invalid(format!("{what} needs at least two breakpoints")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("partition breakpoints"));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(format!("{what} breakpoints must be strictly increasing")));
    }
    Ok(())
}

/// Overlap of `[a, b]` with `[c, d]`.
fn overlap(a: f64, b: f64, c: f64, d: f64) -> Option<(f64, f64)> {
    let (lo, hi) = (a.max(c), b.min(d));
    (hi > lo).then_some((lo, hi))
}

/// `∫_lo^hi |α + βs| ds`.
fn abs_affine_integral(alpha: f64, beta: f64, lo: f64, hi: f64) -> f64 {
    let prim = |s: f64| alpha * s + 0.5 * beta * s * s;
    if beta != 0.0 {
        let r = -alpha / beta;
        if r > lo && r < hi {
            return (prim(r) - prim(lo)).abs() + (prim(hi) - prim(r)).abs();
        }
    }
    (prim(hi) - prim(lo)).abs()
}

/// A wall of the subgraph over an interior grid line: `axis` is the normal
/// direction of the line, `jump(s) = α + βs` is `u_before − u_after` along it.
struct JumpSegment {
    axis: usize,
    alpha: f64,
    beta: f64,
    lo: f64,
    hi: f64,
}

impl PLFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, cells: Vec<AffinePiece>) -> Result<Self> {
        check_breaks(&xs, "x")?;
        check_breaks(&ys, "y")?;
        let n = (xs.len() - 1) * (ys.len() - 1);
        if cells.len() != n {
            return Err(Error::Invalid(format!(
                "partition has {n} cells but {} pieces were given",
                cells.len()
            )));
        }
        if cells.iter().any(|c| !c.value.is_finite() || c.grad.iter().any(|g| !g.is_finite())) {
            return Err(Error::NonFinite("piece values"));
        }
        Ok(PLFunction { xs, ys, cells })
    }

    pub fn piecewise_constant(xs: Vec<f64>, ys: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(xs, ys, values.iter().map(|v| AffinePiece::constant(*v)).collect())
    }

    /// One affine piece on the whole domain.
    pub fn affine(domain: &Window, value: f64, grad: [f64; 2]) -> Result<Self> {
        if domain.dim() != 2 {
            return Err(Error::dims("domain", domain.dim(), "plane", 2));
        }
        Self::new(
            vec![domain.lo()[0], domain.hi()[0]],
            vec![domain.lo()[1], domain.hi()[1]],
            vec![AffinePiece { value, grad }],
        )
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn piece(&self, i: usize, j: usize) -> &AffinePiece {
        &self.cells[j * self.nx() + i]
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.cells
    }

    pub fn domain(&self) -> Window {
        Window::new(
            vec![self.xs[0], self.ys[0]],
            vec![*self.xs.last().unwrap(), *self.ys.last().unwrap()],
        )
        .expect("validated breakpoints")
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.cells.iter().all(|c| c.grad == [0.0, 0.0])
    }

    fn locate(breaks: &[f64], v: f64) -> usize {
        breaks[1..breaks.len() - 1].partition_point(|b| *b <= v)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.piece(Self::locate(&self.xs, x), Self::locate(&self.ys, y)).at(x, y)
    }

    fn check_region(&self, region: &Window) -> Result<()> {
        if region.dim() != 2 {
            return Err(Error::dims("region", region.dim(), "plane", 2));
        }
        if !region.is_within(&self.domain()) {
            return Err(Error::WindowExceeds {
                window: region.to_string(),
                bound: self.domain().to_string(),
            });
        }
        Ok(())
    }

    /// Walls over interior grid lines crossing the open region.
    fn jumps(&self, region: &Window) -> Vec<JumpSegment> {
        let (rl, rh) = (region.lo(), region.hi());
        let mut out = Vec::new();
        for i in 1..self.nx() {
            let x = self.xs[i];
            if !(rl[0] < x && x < rh[0]) {
                continue;
            }
            for j in 0..self.ny() {
                let Some((lo, hi)) = overlap(self.ys[j], self.ys[j + 1], rl[1], rh[1]) else {
                    continue;
                };
                let (a, b) = (self.piece(i - 1, j), self.piece(i, j));
                out.push(JumpSegment {
                    axis: 0,
                    alpha: (a.value - b.value) + (a.grad[0] - b.grad[0]) * x,
                    beta: a.grad[1] - b.grad[1],
                    lo,
                    hi,
                });
            }
        }
        for j in 1..self.ny() {
            let y = self.ys[j];
            if !(rl[1] < y && y < rh[1]) {
                continue;
            }
            for i in 0..self.nx() {
                let Some((lo, hi)) = overlap(self.xs[i], self.xs[i + 1], rl[0], rh[0]) else {
                    continue;
                };
                let (a, b) = (self.piece(i, j - 1), self.piece(i, j));
                out.push(JumpSegment {
                    axis: 1,
                    alpha: (a.value - b.value) + (a.grad[1] - b.grad[1]) * y,
                    beta: a.grad[0] - b.grad[0],
                    lo,
                    hi,
                });
            }
        }
        out
    }

    /// `∫_Â Φ°(−Du, 1)`: absolutely continuous part plus the jump walls.
    pub fn subgraph_energy(&self, norm: &Anisotropy, region: &Window) -> Result<f64> {
        if norm.dim() != 3 {
            return Err(Error::dims("norm", norm.dim(), "subgraph space", 3));
        }
        self.check_region(region)?;
        let (rl, rh) = (region.lo(), region.hi());
        let mut total = 0.0;
        for j in 0..self.ny() {
            for i in 0..self.nx() {
                let (Some((x0, x1)), Some((y0, y1))) = (
                    overlap(self.xs[i], self.xs[i + 1], rl[0], rh[0]),
                    overlap(self.ys[j], self.ys[j + 1], rl[1], rh[1]),
                ) else {
                    continue;
                };
                let g = self.piece(i, j).grad;
                total += (x1 - x0) * (y1 - y0) * norm.eval_dual(&[-g[0], -g[1], 1.0]);
            }
        }
        for s in self.jumps(region) {
            let mut dir = [0.0; 3];
            for sign in [1.0, -1.0] {
                dir[s.axis] = sign;
                let w = norm.eval_dual(&dir);
                // split the wall by the sign of the jump
                let part = signed_part(s.alpha, s.beta, s.lo, s.hi, sign);
                total += part * w;
            }
        }
        Ok(total)
    }

    /// `{(x, t) ∈ Â × (−M, M) : t < u(x)}` as a union of cell prisms.
    pub fn subgraph_set(&self, region: &Window, height: f64) -> Result<PolyhedralSet> {
        self.check_region(region)?;
        let mut pieces = Vec::with_capacity(self.cells.len());
        for j in 0..self.ny() {
            for i in 0..self.nx() {
                let p = self.piece(i, j);
                let mut parts = match SetExpr::open_box(&[self.xs[i], self.ys[j]], &[self.xs[i + 1], self.ys[j + 1]])? {
                    SetExpr::And(v) => v.into_iter().map(|e| e.cylinder()).collect::<Vec<_>>(),
                    _ => unreachable!(),
                };
                parts.push(SetExpr::half(vec![-p.grad[0], -p.grad[1], 1.0], p.value)?);
                pieces.push(SetExpr::And(parts));
            }
        }
        PolyhedralSet::from_expr(SetExpr::Or(pieces), region.extended(-height, height)?)
    }

    /// A height `M` with `|u| < M` on the domain.
    pub fn height_bound(&self) -> f64 {
        let mut m = 0.0_f64;
        for j in 0..self.ny() {
            for i in 0..self.nx() {
                let p = self.piece(i, j);
                for x in [self.xs[i], self.xs[i + 1]] {
                    for y in [self.ys[j], self.ys[j + 1]] {
                        m = m.max(p.at(x, y).abs());
                    }
                }
            }
        }
        m + 1.0
    }

    /// Exact anisotropic total variation of a piecewise-constant function and
    /// its level-set decomposition.
    pub fn coarea_decomposition(&self, base: &Anisotropy, region: &Window) -> Result<Coarea> {
        if !self.is_piecewise_constant() {
            return Err(Error::Invalid("coarea decomposition needs a piecewise-constant function".into()));
        }
        if base.dim() != 2 {
            return Err(Error::dims("norm", base.dim(), "plane", 2));
        }
        self.check_region(region)?;
        let total: f64 = self
            .jumps(region)
            .iter()
            .map(|s| {
                let mut e = [0.0; 2];
                e[s.axis] = 1.0;
                (s.hi - s.lo) * s.alpha.abs() * base.eval_dual(&e)
            })
            .sum();

        let (rl, rh) = (region.lo(), region.hi());
        let mut values = Vec::new();
        for j in 0..self.ny() {
            for i in 0..self.nx() {
                if overlap(self.xs[i], self.xs[i + 1], rl[0], rh[0]).is_some()
                    && overlap(self.ys[j], self.ys[j + 1], rl[1], rh[1]).is_some()
                {
                    values.push(self.piece(i, j).value);
                }
            }
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        let mut levels = Vec::with_capacity(values.len().saturating_sub(1));
        for w in values.windows(2) {
            let lambda = 0.5 * (w[0] + w[1]);
            let set = self.super_level_set(lambda, region)?;
            levels.push(Level {
                lambda,
                weight: w[1] - w[0],
                perimeter: perimeter(&set, base, region)?,
            });
        }
        Ok(Coarea { total, levels })
    }

    /// `{u > λ}` for a piecewise-constant function, as a union of cells.
    pub fn super_level_set(&self, lambda: f64, region: &Window) -> Result<PolyhedralSet> {
        let mut boxes = Vec::new();
        for j in 0..self.ny() {
            for i in 0..self.nx() {
                if self.piece(i, j).value > lambda {
                    boxes.push(SetExpr::open_box(&[self.xs[i], self.ys[j]], &[self.xs[i + 1], self.ys[j + 1]])?);
                }
            }
        }
        let expr = if boxes.is_empty() { SetExpr::Empty } else { SetExpr::Or(boxes) };
        PolyhedralSet::from_expr(expr, region.clone())
    }
}

/// `∫ max(sign·(α + βs), 0) ds` over `[lo, hi]`.
fn signed_part(alpha: f64, beta: f64, lo: f64, hi: f64, sign: f64) -> f64 {
    let total = abs_affine_integral(alpha, beta, lo, hi);
    let net = sign * (alpha * (hi - lo) + 0.5 * beta * (hi * hi - lo * lo));
    0.5 * (total + net).max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub lambda: f64,
    /// Length of the value gap this level stands for.
    pub weight: f64,
    pub perimeter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coarea {
    pub total: f64,
    pub levels: Vec<Level>,
}

impl Coarea {
    /// `∫ P_φ({u > λ}) dλ`.
    pub fn level_integral(&self) -> f64 {
        self.levels.iter().map(|l| l.weight * l.perimeter).sum()
    }
}
