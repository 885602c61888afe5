//! Seeded instance generators shared by the integration tests.
#![allow(dead_code)]

use orbit_core::arith::rational::rat;
use orbit_core::{Rational, RationalMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub a: RationalMatrix,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub delta: Rational,
    pub family: &'static str,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= num`, `1 <= q <= den`.
pub fn entry(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

pub fn vector(r: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> Vec<Rational> {
    (0..n).map(|_| entry(r, num, den)).collect()
}

pub fn matrix(r: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> RationalMatrix {
    RationalMatrix::from_rows((0..n).map(|_| vector(r, n, num, den)).collect()).unwrap()
}

fn positive(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(1..=10), r.gen_range(1..=10))
}

/// Rotation by the angle with cosine 3/5, possibly reflected in time.
fn rotation(r: &mut ChaCha8Rng) -> [[Rational; 2]; 2] {
    let s = if r.gen_bool(0.5) { 4 } else { -4 };
    [[rat(3, 5), rat(-s, 5)], [rat(s, 5), rat(3, 5)]]
}

/// A mix of expanding, contracting and unit-modulus instances, every entry
/// with numerator and denominator at most 10 in absolute value.
pub fn suite(seed: u64, count: usize) -> Vec<Case> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = 1 + i % 3;
        let (a, family) = match i % 5 {
            0 | 1 => (matrix(&mut r, n, 10, 10), "random"),
            2 => (matrix(&mut r, n, 2, 10), "small"),
            3 if n >= 2 => {
                let rot = rotation(&mut r);
                let mut m = RationalMatrix::zeros(n, n);
                for p in 0..2 {
                    for q in 0..2 {
                        m[(p, q)] = rot[p][q].clone();
                    }
                }
                if n == 3 {
                    m[(2, 2)] = entry(&mut r, 1, 10);
                }
                (m, "rotation")
            }
            _ => {
                let mut m = RationalMatrix::zeros(n, n);
                for p in 0..n {
                    m[(p, p)] = entry(&mut r, 10, 10);
                    if p + 1 < n && r.gen_bool(0.5) {
                        m[(p, p + 1)] = entry(&mut r, 10, 10);
                    }
                }
                (m, "triangular")
            }
        };
        let x = vector(&mut r, n, 10, 10);
        let y = vector(&mut r, n, 10, 10);
        out.push(Case { a, x, y, delta: positive(&mut r), family });
    }
    out
}
