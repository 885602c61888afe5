//! The two vector norms the engine supports.

use crate::arith::matrix::{norm_max, norm_sq, vec_sub};
use crate::arith::rational::{int, sqrt_upper};
use crate::arith::Rational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Euclidean,
    Max,
}

impl Norm {
    /// Exact test `||v - y|| < delta`; Euclidean compares squares.
    pub fn within(self, v: &[Rational], y: &[Rational], delta: &Rational) -> bool {
        let d = vec_sub(v, y);
        match self {
            Norm::Euclidean => norm_sq(&d) < delta * delta,
            Norm::Max => &norm_max(&d) < delta,
        }
    }

    /// Rational upper bound on `||v||`.
    pub fn upper(self, v: &[Rational], bits: u32) -> Rational {
        match self {
            Norm::Euclidean => sqrt_upper(&norm_sq(v), bits),
            Norm::Max => norm_max(v),
        }
    }

    /// Factor `f` with `||v|| >= ||v||_2 / f` for vectors of length `n`.
    pub fn euclidean_ratio(self, n: usize, bits: u32) -> Rational {
        match self {
            Norm::Euclidean => int(1),
            Norm::Max => sqrt_upper(&int(n as i64), bits),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::Euclidean => "euclidean",
            Norm::Max => "max",
        })
    }
}

impl FromStr for Norm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" => Ok(Norm::Euclidean),
            "max" => Ok(Norm::Max),
            _ => Err(format!("unknown norm `{s}` (expected euclidean or max)")),
        }
    }
}
