//! Rigorous dyadic iteration of `v -> A v`.
//!
//! `A = M / d` with `M` integral. The iterate is kept as integer mantissas
//! sharing one exponent, rounded to `p` bits after every step, together with
//! a bound `E` on its Euclidean distance to the exact orbit point. With
//! `||A^m|| <= C r^m` for all `m`, the rounding errors `e_i` propagate as
//! `E_(k+1) = r E_k + C ||e_k||`.
//!
//! Membership is settled by an `f64` interval filter, then exactly on the
//! dyadic iterate, and only then by recomputing `A^k x` in integers.

use super::xf::{scaled_interval, Xf};
use crate::arith::rational::pow2;
use crate::arith::{Rational, RationalMatrix};
use crate::error::{OrbitError, Result};
use crate::norm::Norm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Squarings used for the power bound, and the exact prefix below it.
const LEVELS: u32 = 24;
const EXACT_LEVELS: u32 = 6;
const POWER_BITS: u64 = 192;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Membership {
    Hit,
    Miss,
    Unknown,
}

/// `round(num / den)` and whether the division was exact; `den > 0`.
fn div_round(num: &BigInt, den: &BigInt) -> (BigInt, bool) {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        return (q, true);
    }
    let twice: BigInt = r.abs() << 1u32;
    if twice >= *den {
        (q + num.signum(), false)
    } else {
        (q, false)
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

/// Rounds `w 2^g` to mantissas of at most `p` bits: `(mantissas, exponent, exact)`.
fn round_to(w: Vec<BigInt>, g: i64, den: &BigInt, p: u64) -> (Vec<BigInt>, i64, bool) {
    let wb = max_bits(&w);
    if wb == 0 {
        return (w, g, true);
    }
    let s = wb as i64 - den.bits() as i64 + 1 - p as i64;
    if den.is_one() && s <= 0 {
        return (w, g, true);
    }
    let mut exact = true;
    let out = w
        .iter()
        .map(|x| {
            let (q, ok) = if s >= 0 {
                div_round(x, &(den << (s as u64)))
            } else {
                div_round(&(x << ((-s) as u64)), den)
            };
            exact &= ok;
            q
        })
        .collect();
    (out, g + s, exact)
}

/// `sqrt(sum n_i^2) 2^g`, rounded up.
fn frob_up(m: &[BigInt], g: i64) -> Xf {
    let s: BigInt = m.iter().map(|x| x * x).sum();
    Xf::from_bigint_up(&s).sqrt_up().mul_up(Xf::pow2(g))
}

fn mat_mul_int(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * &b[k * n + j];
            }
        }
    }
    out
}

/// `(r, C)` with `||A^m||_2 <= C r^m` for every `m >= 0`.
///
/// `f_b` bounds `||A^(2^b)||` from a rounded squaring chain; `r` is chosen
/// with `r^(2^B) >= f_B`. Powers below `2^b0` are bounded exactly, and each
/// binary digit above contributes `max(1, f_b / r^(2^b))`.
pub(crate) fn power_bound(m: &[BigInt], d: &BigInt, n: usize) -> (Xf, Xf) {
    let nn = Xf::from_f64(n as f64);
    let (mut y, mut g, exact) = round_to(m.to_vec(), 0, d, POWER_BITS);
    let mut eps = if exact { Xf::ZERO } else { nn.mul_up(Xf::pow2(g)) };
    let mut f = Vec::with_capacity(LEVELS as usize + 1);
    for _ in 0..LEVELS {
        let fy = frob_up(&y, g);
        f.push(fy.add_up(eps));
        let sq = mat_mul_int(&y, &y, n);
        let (y2, g2, exact) = round_to(sq, 2 * g, &BigInt::one(), POWER_BITS);
        let round = if exact { Xf::ZERO } else { nn.mul_up(Xf::pow2(g2)) };
        eps = Xf::from_f64(2.0).mul_up(fy).mul_up(eps).add_up(eps.mul_up(eps)).add_up(round);
        y = y2;
        g = g2;
    }
    let f_top = frob_up(&y, g).add_up(eps);
    f.push(f_top);
    // r with r^(2^B) >= f_B, never below 2^-8
    let floor = Xf::pow2(-8);
    let mut t = f_top.log2() / f64::powi(2.0, LEVELS as i32);
    let r = loop {
        let r = if t.is_finite() { Xf::exp2_up(t).max(floor) } else { floor };
        let mut p = r;
        for _ in 0..LEVELS {
            p = p.mul_dn(p);
        }
        if f_top.le(p) {
            break r;
        }
        t += 1e-9_f64.max(t.abs() * 1e-9);
    };
    // exact prefix: sup over m < 2^b0 of ||A^m|| / r^m
    let mut c = Xf::ONE;
    let mut pm = m.to_vec();
    let mut dm = d.clone();
    let mut rm = r;
    for _ in 1..(1u64 << EXACT_LEVELS) {
        let norm = frob_up(&pm, 0).div_up(Xf::from_bigint_dn(&dm));
        c = c.max(norm.div_up(rm));
        pm = mat_mul_int(&pm, m, n);
        dm *= d;
        rm = rm.mul_dn(r);
    }
    let mut r2b = r;
    for _ in 0..EXACT_LEVELS {
        r2b = r2b.mul_dn(r2b);
    }
    for fb in f.iter().take(LEVELS as usize).skip(EXACT_LEVELS as usize) {
        c = c.mul_up(Xf::ONE.max(fb.div_up(r2b)));
        r2b = r2b.mul_dn(r2b);
    }
    (r, c)
}

/// Dyadic bounds `lo <= q <= hi` as `(mantissa, exponent)` pairs.
fn dyadic_bracket(q: &Rational, bits: u64) -> ((BigInt, i64), (BigInt, i64)) {
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let e = mag - bits as i64;
    let scaled = q * pow2(-e);
    ((scaled.floor().to_integer(), e), (scaled.ceil().to_integer(), e))
}

pub(crate) struct Target {
    y: Vec<Rational>,
    delta: Rational,
    /// `y = y_num / y_den`.
    y_num: Vec<BigInt>,
    y_den: BigInt,
    y_br: Vec<((BigInt, i64), (BigInt, i64))>,
    delta_br: ((BigInt, i64), (BigInt, i64)),
    top: i64,
    norm: Norm,
}

impl Target {
    pub fn new(y: &[Rational], delta: &Rational, norm: Norm) -> Target {
        let y_br: Vec<_> = y.iter().map(|v| dyadic_bracket(v, 100)).collect();
        let delta_br = dyadic_bracket(delta, 100);
        let top = y_br
            .iter()
            .chain(std::iter::once(&delta_br))
            .map(|(_, (m, e))| m.bits() as i64 + e)
            .max()
            .unwrap();
        let y_den = lcm_denoms(y.iter());
        let y_num = y.iter().map(|q| (q * Rational::from_integer(y_den.clone())).to_integer()).collect();
        Target { y: y.to_vec(), delta: delta.clone(), y_num, y_den, y_br, delta_br, top, norm }
    }

    /// `||num / den - y|| < delta` in integer arithmetic; `den > 0`.
    fn contains(&self, num: &[BigInt], den: &BigInt) -> bool {
        let diff: Vec<BigInt> = num.iter().zip(&self.y_num).map(|(a, b)| a * &self.y_den - den * b).collect();
        let scale = den * &self.y_den;
        let (p, q) = (self.delta.numer(), self.delta.denom());
        match self.norm {
            Norm::Euclidean => {
                let s: BigInt = diff.iter().map(|v| v * v).sum();
                let r = p * &scale;
                s * q * q < &r * &r
            }
            Norm::Max => {
                let r = p * &scale;
                diff.iter().all(|v| v.abs() * q < r)
            }
        }
    }

    /// Is `||v - y|| < delta` for every `v` within `err` of `mant 2^e`?
    fn filter(&self, mant: &[BigInt], e: i64, err: Xf) -> Membership {
        let s = (max_bits(mant) as i64 + e).max(self.top) + 1;
        let es = err.scaled_up(s);
        let mut lo_sq = 0.0f64;
        let mut hi_sq = 0.0f64;
        let mut lo_max = 0.0f64;
        let mut hi_max = 0.0f64;
        for (i, m) in mant.iter().enumerate() {
            let a = scaled_interval(m, e, s);
            let ((yl, yle), (yh, yhe)) = &self.y_br[i];
            let yl = scaled_interval(yl, *yle, s);
            let yh = scaled_interval(yh, *yhe, s);
            let dlo = (a.0 - yh.1).next_down();
            let dhi = (a.1 - yl.0).next_up();
            let alo = if dlo > 0.0 {
                dlo
            } else if dhi < 0.0 {
                -dhi
            } else {
                0.0
            };
            let ahi = dlo.abs().max(dhi.abs());
            lo_sq = (lo_sq + (alo * alo).next_down()).next_down();
            hi_sq = (hi_sq + (ahi * ahi).next_up()).next_up();
            lo_max = lo_max.max(alo);
            hi_max = hi_max.max(ahi);
        }
        let (lo, hi) = match self.norm {
            Norm::Euclidean => (lo_sq.max(0.0).sqrt().next_down(), hi_sq.sqrt().next_up()),
            Norm::Max => (lo_max, hi_max),
        };
        let ((dl, dle), (dh, dhe)) = &self.delta_br;
        let dlo = scaled_interval(dl, *dle, s).0;
        let dhi = scaled_interval(dh, *dhe, s).1;
        if (lo - es).next_down() >= dhi {
            Membership::Miss
        } else if (hi + es).next_up() < dlo {
            Membership::Hit
        } else {
            Membership::Unknown
        }
    }

    /// The same question in exact arithmetic on the dyadic iterate.
    fn exact(&self, mant: &[BigInt], e: i64, err: Xf) -> Membership {
        let scale = pow2(e);
        let d: Vec<Rational> = mant
            .iter()
            .zip(&self.y)
            .map(|(m, y)| Rational::from_integer(m.clone()) * &scale - y)
            .collect();
        let err = err.to_rational();
        let far = &self.delta + &err;
        let near = &self.delta - &err;
        match self.norm {
            Norm::Euclidean => {
                let s: Rational = d.iter().map(|v| v * v).sum();
                if s >= &far * &far {
                    Membership::Miss
                } else if near.is_positive() && s < &near * &near {
                    Membership::Hit
                } else {
                    Membership::Unknown
                }
            }
            Norm::Max => {
                let m = d.iter().map(|v| v.abs()).max().unwrap();
                if m >= far {
                    Membership::Miss
                } else if m < near {
                    Membership::Hit
                } else {
                    Membership::Unknown
                }
            }
        }
    }

    fn classify(&self, mant: &[BigInt], e: i64, err: Xf) -> Membership {
        match self.filter(mant, e, err) {
            Membership::Unknown => self.exact(mant, e, err),
            m => m,
        }
    }
}

pub(crate) struct Tracker {
    n: usize,
    m: Vec<BigInt>,
    d: BigInt,
    x_num: Vec<BigInt>,
    x_den: BigInt,
    prec: u64,
    mant: Vec<BigInt>,
    exp: i64,
    err: Xf,
    r: Xf,
    c: Xf,
    half_sqrt_n: Xf,
    k: u64,
    budget: u64,
    pub resyncs: u64,
    resyncs_at_prec: u64,
}

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

impl Tracker {
    pub fn new(a: &RationalMatrix, x: &[Rational], prec: u64, budget: u64) -> Tracker {
        let n = a.rows();
        let rows = a.to_rows();
        let d = lcm_denoms(rows.iter().flatten());
        let m: Vec<BigInt> = rows.iter().flatten().map(|q| (q * Rational::from_integer(d.clone())).to_integer()).collect();
        let x_den = lcm_denoms(x.iter());
        let x_num: Vec<BigInt> = x.iter().map(|q| (q * Rational::from_integer(x_den.clone())).to_integer()).collect();
        let (r, c) = power_bound(&m, &d, n);
        let half_sqrt_n = Xf::from_f64(n as f64).sqrt_up().mul_up(Xf::pow2(-1));
        let mut t = Tracker {
            n,
            m,
            d,
            x_num,
            x_den,
            prec,
            mant: Vec::new(),
            exp: 0,
            err: Xf::ZERO,
            r,
            c,
            half_sqrt_n,
            k: 0,
            budget,
            resyncs: 0,
            resyncs_at_prec: 0,
        };
        t.load(t.x_num.clone(), t.x_den.clone());
        t
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Sets the iterate to `num / den` rounded.
    fn load(&mut self, num: Vec<BigInt>, den: BigInt) {
        let (mant, exp, exact) = round_to(num, 0, &den, self.prec);
        self.err = if exact { Xf::ZERO } else { self.c.mul_up(self.half_sqrt_n).mul_up(Xf::pow2(exp)) };
        self.mant = mant;
        self.exp = exp;
    }

    pub fn step(&mut self) {
        let n = self.n;
        let w: Vec<BigInt> = (0..n)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..n {
                    let a = &self.m[i * n + j];
                    if !a.is_zero() && !self.mant[j].is_zero() {
                        s += a * &self.mant[j];
                    }
                }
                s
            })
            .collect();
        let (mant, exp, exact) = round_to(w, self.exp, &self.d, self.prec);
        self.err = self.r.mul_up(self.err);
        if !exact {
            self.err = self.err.add_up(self.c.mul_up(self.half_sqrt_n).mul_up(Xf::pow2(exp)));
        }
        self.mant = mant;
        self.exp = exp;
        self.k += 1;
    }

    /// Exact `A^k x` as `(numerators, common denominator)`.
    fn exact_point(&self) -> Result<(Vec<BigInt>, BigInt)> {
        let k = self.k;
        let n = self.n;
        let growth = self.m.iter().map(|v| v.bits()).max().unwrap_or(0) + (n as u64).ilog2() as u64 + 1;
        let bits = growth.saturating_mul(k).max(self.d.bits().saturating_mul(k));
        if bits > self.budget {
            return Err(OrbitError::BitBudget { k, bits, budget: self.budget });
        }
        let mut acc: Vec<BigInt> = (0..n * n).map(|i| if i % (n + 1) == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        let mut base = self.m.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = mat_mul_int(&acc, &base, n);
            }
            e >>= 1;
            if e > 0 {
                base = mat_mul_int(&base, &base, n);
            }
        }
        let num: Vec<BigInt> = (0..n)
            .map(|i| (0..n).map(|j| &acc[i * n + j] * &self.x_num[j]).sum())
            .collect();
        let den = num_traits::pow(self.d.clone(), k as usize) * &self.x_den;
        Ok((num, den))
    }

    /// Decides membership at the current `k`, recomputing exactly if needed.
    pub fn member(&mut self, target: &Target) -> Result<bool> {
        match target.classify(&self.mant, self.exp, self.err) {
            Membership::Hit => Ok(true),
            Membership::Miss => Ok(false),
            Membership::Unknown => {
                let (num, den) = self.exact_point()?;
                let hit = target.contains(&num, &den);
                self.resyncs += 1;
                self.resyncs_at_prec += 1;
                if self.resyncs_at_prec > 4 {
                    self.prec *= 2;
                    self.resyncs_at_prec = 0;
                }
                self.load(num, den);
                Ok(hit)
            }
        }
    }

    #[cfg(test)]
    pub fn error(&self) -> Xf {
        self.err
    }

    #[cfg(test)]
    pub fn value(&self) -> Vec<Rational> {
        self.mant.iter().map(|m| Rational::from_integer(m.clone()) * pow2(self.exp)).collect()
    }
}
