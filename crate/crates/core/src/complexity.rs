//! Closed-form sample-size floors for three optimization regimes.
//!
//! - near-enough: stop at the first solution within tolerance of the best;
//! - best-arm: identify the single best of `A` alternatives;
//! - reward-free: explore enough to optimize goals not yet specified.
//!
//! All counts use natural logs and round up to whole samples.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::{Error, Result};

/// Shared parameters: confidence `c`, tolerance `eps`, action count `a`,
/// state count `s`, horizon `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub c: f64,
    pub eps: f64,
    pub a: u64,
    pub s: u64,
    pub h: u64,
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams {
            c: 0.95,
            eps: 0.05,
            a: 1,
            s: 1,
            h: 1,
        }
    }
}

impl RegimeParams {
    /// Action count for a grid of `d` dimensions split into `b` bins each.
    pub fn actions_from_grid(bins: u64, dims: u32) -> Result<u64> {
        bins.checked_pow(dims).ok_or(Error::Overflow)
    }
}

/// The three regimes, in order of ambition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    NearEnough,
    BestArm,
    RewardFree,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::NearEnough => "neo",
            Regime::BestArm => "bestarm",
            Regime::RewardFree => "rewardfree",
        }
    }

    pub fn samples(&self, p: &RegimeParams) -> Result<u64> {
        match self {
            Regime::NearEnough => n_neo(p.c, p.eps),
            Regime::BestArm => n_bestarm(p.c, p.eps, p.a),
            Regime::RewardFree => n_rewardfree(p.c, p.eps, p.s, p.a, p.h),
        }
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Regime> {
        match s.trim().to_ascii_lowercase().as_str() {
            "neo" | "nearenough" => Ok(Regime::NearEnough),
            "bestarm" => Ok(Regime::BestArm),
            "rewardfree" => Ok(Regime::RewardFree),
            other => Err(Error::Plan(format!(
                "unknown regime '{other}' (expected neo, bestarm, or rewardfree)"
            ))),
        }
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::UnitRange { name, value: v })
    }
}

fn check_count(name: &'static str, v: u64) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(Error::CountRange { name, value: v })
    }
}

fn to_count(x: f64) -> Result<u64> {
    let c = x.ceil();
    if !c.is_finite() || c >= u64::MAX as f64 {
        return Err(Error::Overflow);
    }
    Ok(c.max(0.0) as u64)
}

/// Samples to hit within `eps` of the best at confidence `c`:
/// `ceil(ln(1 - c) / ln(1 - eps))`.
pub fn n_neo(c: f64, eps: f64) -> Result<u64> {
    check_unit("C", c)?;
    check_unit("eps", eps)?;
    to_count((1.0 - c).ln() / (1.0 - eps).ln())
}

/// Samples per alternative to pick the best of `a` arms:
/// `ceil((2 / eps^2) * ln(2a / (1 - c)))`.
pub fn n_bestarm(c: f64, eps: f64, a: u64) -> Result<u64> {
    check_unit("C", c)?;
    check_unit("eps", eps)?;
    check_count("A", a)?;
    to_count((2.0 / (eps * eps)) * (2.0 * a as f64 / (1.0 - c)).ln())
}

/// Samples to explore `s` states and `a` actions over horizon `h` with no
/// reward function: `ceil(s^2 * a * h^3 * ln(1 / (1 - c)) / eps^2)`.
pub fn n_rewardfree(c: f64, eps: f64, s: u64, a: u64, h: u64) -> Result<u64> {
    check_unit("C", c)?;
    check_unit("eps", eps)?;
    check_count("S", s)?;
    check_count("A", a)?;
    check_count("H", h)?;
    let s = s as f64;
    let a = a as f64;
    let h = h as f64;
    to_count(s * s * a * h * h * h * (1.0 / (1.0 - c)).ln() / (eps * eps))
}
