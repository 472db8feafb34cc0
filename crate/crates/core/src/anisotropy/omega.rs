//! Combination rules `ω(s, t)` on the closed quadrant, used to build a norm on
//! ℝ^{n+1} from a norm on ℝ^n and the absolute value of the last coordinate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaSpec {
    Max,
    Sum,
    /// `(s^p + t^p)^{1/p}` for `1 ≤ p ≤ ∞`.
    P(#[serde(with = "crate::descriptors::exponent")] f64),
}

pub(crate) fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::InvalidNorm(format!("exponent p = {p} must satisfy 1 ≤ p ≤ ∞")))
    } else {
        Ok(())
    }
}

/// `(|a|^p + |b|^p)^{1/p}` without overflow for large arguments.
pub(crate) fn pair_pnorm(a: f64, b: f64, p: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    if p.is_infinite() {
        return a.max(b);
    }
    if p == 1.0 {
        return a + b;
    }
    let m = a.max(b);
    if m == 0.0 {
        return 0.0;
    }
    m * ((a / m).powf(p) + (b / m).powf(p)).powf(1.0 / p)
}

impl OmegaSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OmegaSpec::P(p) => check_exponent(p),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, s: f64, t: f64) -> f64 {
        match *self {
            OmegaSpec::Max => s.max(t),
            OmegaSpec::Sum => s + t,
            OmegaSpec::P(p) => pair_pnorm(s, t, p),
        }
    }

    pub fn dual(&self) -> OmegaSpec {
        match *self {
            OmegaSpec::Max => OmegaSpec::Sum,
            OmegaSpec::Sum => OmegaSpec::Max,
            OmegaSpec::P(p) => OmegaSpec::P(conjugate_exponent(p)),
        }
    }

    /// A point `(s, t)` of the quadrant with `ω(s,t) = 1` attaining
    /// `s·s* + t·t* = ω°(s*, t*)`. Ties are broken toward zeros.
    pub fn calibrate(&self, s_star: f64, t_star: f64) -> (f64, f64) {
        let p = match *self {
            OmegaSpec::Max => f64::INFINITY,
            OmegaSpec::Sum => 1.0,
            OmegaSpec::P(p) => p,
        };
        if p.is_infinite() {
            let pick = |x: f64| if x > 0.0 { 1.0 } else { 0.0 };
            let (s, t) = (pick(s_star), pick(t_star));
            if s == 0.0 && t == 0.0 {
                (1.0, 0.0)
            } else {
                (s, t)
            }
        } else if p == 1.0 {
            if s_star >= t_star {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        } else {
            let q = conjugate_exponent(p);
            let n = pair_pnorm(s_star, t_star, q);
            if n == 0.0 {
                return (1.0, 0.0);
            }
            ((s_star / n).powf(q - 1.0), (t_star / n).powf(q - 1.0))
        }
    }
}

/// `ω°(s*, t*)`, the dual of the combination rule on the quadrant.
pub fn omega_dual(spec: OmegaSpec, s_star: f64, t_star: f64) -> Result<f64> {
    spec.validate()?;
    if !s_star.is_finite() || !t_star.is_finite() {
        return Err(Error::NonFinite("omega_dual arguments"));
    }
    if s_star < 0.0 || t_star < 0.0 {
        return Err(Error::Invalid(format!(
            "omega_dual needs nonnegative arguments, got ({s_star}, {t_star})"
        )));
    }
    Ok(spec.dual().apply(s_star, t_star))
}
