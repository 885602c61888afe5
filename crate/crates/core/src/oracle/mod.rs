//! Brute-force reference answers, independent of the decision engine.
//!
//! Orbit prefixes and minimum distances are exact. The bounded search runs a
//! rigorous dyadic iteration (see `tracker`) so that horizons in the millions
//! stay affordable; every step it cannot settle is recomputed exactly.

mod tracker;
mod xf;

use crate::arith::matrix::{norm_max, norm_sq, vec_sub};
use crate::arith::rational::{exact_sqrt, sqrt_lower, sqrt_upper};
use crate::arith::{Rational, RationalMatrix, RationalVector};
use crate::error::{OrbitError, Result};
use crate::norm::Norm;
use serde::Serialize;
use std::ops::Range;
use tracker::{Target, Tracker};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPrefix {
    /// `points[k] = A^k x` for `k <= horizon`.
    pub points: Vec<RationalVector>,
    pub horizon: u64,
}

pub fn orbit_prefix(a: &RationalMatrix, x: &[Rational], horizon: u64) -> OrbitPrefix {
    let mut points = Vec::with_capacity(horizon as usize + 1);
    points.push(x.to_vec());
    for k in 0..horizon as usize {
        let next = a.mul_vec(&points[k]).expect("square matrix of matching size");
        points.push(next);
    }
    OrbitPrefix { points, horizon }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OracleAnswer {
    #[serde(rename = "YES")]
    Yes(u64),
    /// No hit up to the horizon; absence beyond it is not claimed.
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Mantissa bits of the dyadic iterate to start with.
    pub precision: u64,
    /// Largest entry size, in bits, allowed for an exact recomputation.
    pub bit_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { precision: 128, bit_budget: 1 << 26 }
    }
}

/// First `k <= k_max` with `||A^k x - y|| < delta`.
pub fn brute_force_decide(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    k_max: u64,
    norm: Norm,
) -> Result<OracleAnswer> {
    brute_force_decide_with(a, x, y, delta, k_max, norm, &OracleConfig::default())
}

pub fn brute_force_decide_with(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    k_max: u64,
    norm: Norm,
    config: &OracleConfig,
) -> Result<OracleAnswer> {
    if !a.is_square() || x.len() != a.rows() || y.len() != a.rows() {
        return Err(crate::arith::matrix::DimensionError("oracle instance".into()).into());
    }
    if !num_traits::Signed::is_positive(delta) {
        return Err(OrbitError::NonPositiveRadius(delta.clone()));
    }
    let target = Target::new(y, delta, norm);
    let mut t = Tracker::new(a, x, config.precision, config.bit_budget);
    loop {
        if t.member(&target)? {
            return Ok(OracleAnswer::Yes(t.k()));
        }
        if t.k() >= k_max {
            return Ok(OracleAnswer::Unknown);
        }
        t.step();
    }
}

/// Exact minimum of `||A^k x - y||` over a range of `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub k: u64,
    pub norm: Norm,
    /// The squared distance for the Euclidean norm, the distance otherwise.
    pub measure: Rational,
}

impl MinDistance {
    /// The distance itself when it is rational.
    pub fn value(&self) -> Option<Rational> {
        match self.norm {
            Norm::Euclidean => exact_sqrt(&self.measure),
            Norm::Max => Some(self.measure.clone()),
        }
    }

    pub fn upper(&self, bits: u32) -> Rational {
        match self.norm {
            Norm::Euclidean => sqrt_upper(&self.measure, bits),
            Norm::Max => self.measure.clone(),
        }
    }

    pub fn lower(&self, bits: u32) -> Rational {
        match self.norm {
            Norm::Euclidean => sqrt_lower(&self.measure, bits),
            Norm::Max => self.measure.clone(),
        }
    }
}

pub fn empirical_min_distance(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    range: Range<u64>,
    norm: Norm,
) -> Result<MinDistance> {
    if range.is_empty() {
        return Err(OrbitError::Precondition("empty range".into()));
    }
    let mut v = x.to_vec();
    for _ in 0..range.start {
        v = a.mul_vec(&v)?;
    }
    let mut best: Option<MinDistance> = None;
    for k in range.clone() {
        let d = vec_sub(&v, y);
        let measure = match norm {
            Norm::Euclidean => norm_sq(&d),
            Norm::Max => norm_max(&d),
        };
        if best.as_ref().is_none_or(|b| measure < b.measure) {
            best = Some(MinDistance { k, norm, measure });
        }
        if k + 1 < range.end {
            v = a.mul_vec(&v)?;
        }
    }
    Ok(best.unwrap())
}
