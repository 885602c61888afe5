//! Nonnegative reals `m 2^e` with an `f64` mantissa and an unbounded
//! exponent. Every operation rounds in the stated direction.

use crate::arith::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Xf {
    /// In `[0.5, 1)`, or zero.
    m: f64,
    e: i64,
}

const EXP_MASK: u64 = 0x7ff << 52;

impl Xf {
    pub const ZERO: Xf = Xf { m: 0.0, e: 0 };
    pub const ONE: Xf = Xf { m: 0.5, e: 1 };

    fn norm(m: f64, e: i64) -> Xf {
        debug_assert!(m >= 0.0 && m.is_finite());
        if m == 0.0 {
            return Xf::ZERO;
        }
        let bits = m.to_bits();
        let ex = ((bits & EXP_MASK) >> 52) as i64;
        if ex == 0 {
            return Xf::norm(m * 2f64.powi(64), e - 64);
        }
        let f = f64::from_bits((bits & !EXP_MASK) | (1022u64 << 52));
        Xf { m: f, e: e + ex - 1022 }
    }

    pub fn from_f64(v: f64) -> Xf {
        Xf::norm(v, 0)
    }

    pub fn pow2(k: i64) -> Xf {
        Xf { m: 0.5, e: k + 1 }
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    pub fn mul_up(self, o: Xf) -> Xf {
        if self.is_zero() || o.is_zero() {
            return Xf::ZERO;
        }
        Xf::norm((self.m * o.m).next_up(), self.e + o.e)
    }

    pub fn mul_dn(self, o: Xf) -> Xf {
        if self.is_zero() || o.is_zero() {
            return Xf::ZERO;
        }
        Xf::norm((self.m * o.m).next_down(), self.e + o.e)
    }

    pub fn div_up(self, o: Xf) -> Xf {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return Xf::ZERO;
        }
        Xf::norm((self.m / o.m).next_up(), self.e - o.e)
    }

    pub fn add_up(self, o: Xf) -> Xf {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let sh = a.e - b.e;
        if sh > 60 {
            return Xf::norm(a.m.next_up(), a.e);
        }
        Xf::norm((a.m + b.m * 2f64.powi(-(sh as i32))).next_up(), a.e)
    }

    pub fn sqrt_up(self) -> Xf {
        if self.is_zero() {
            return self;
        }
        let (m, e) = if self.e % 2 != 0 { (self.m * 2.0, self.e - 1) } else { (self.m, self.e) };
        Xf::norm(m.sqrt().next_up(), e / 2)
    }

    pub fn max(self, o: Xf) -> Xf {
        if self.le(o) {
            o
        } else {
            self
        }
    }

    pub fn le(self, o: Xf) -> bool {
        if self.is_zero() {
            return true;
        }
        if o.is_zero() {
            return false;
        }
        self.e < o.e || (self.e == o.e && self.m <= o.m)
    }

    /// Upper bound on `|n|`.
    pub fn from_bigint_up(n: &BigInt) -> Xf {
        Xf::from_bigint(n, true)
    }

    /// Lower bound on `|n|`.
    pub fn from_bigint_dn(n: &BigInt) -> Xf {
        Xf::from_bigint(n, false)
    }

    fn from_bigint(n: &BigInt, up: bool) -> Xf {
        let bits = n.bits();
        if bits <= 53 {
            return Xf::norm(u64::try_from(n.abs()).expect("53 bits") as f64, 0);
        }
        let sh = bits - 53;
        let top: BigInt = n.abs() >> sh;
        let t = u64::try_from(top).expect("53 bits") as f64;
        Xf::norm(if up { t + 1.0 } else { t }, sh as i64)
    }

    /// Approximate base-2 logarithm, for initial guesses only.
    pub fn log2(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.e as f64 + self.m.log2()
    }

    /// `2^t` rounded up, for `t` from [`Xf::log2`].
    pub fn exp2_up(t: f64) -> Xf {
        let k = t.floor();
        Xf::norm(((t - k).exp2() * (1.0 + 1e-12)).next_up(), k as i64)
    }

    pub fn to_rational(self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let m = Rational::from_float(self.m).expect("finite");
        m * crate::arith::rational::pow2(self.e)
    }

    /// `self 2^-s` as an `f64` rounded up.
    pub fn scaled_up(self, s: i64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        ldexp(self.m, self.e - s).next_up().next_up()
    }
}

/// `x 2^k`, exact unless the result leaves the normal range.
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k < -1000 && x != 0.0 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    if x == 0.0 {
        return 0.0;
    }
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    x * 2f64.powi(k as i32)
}

/// Enclosure of `n 2^(exp - s)`.
pub(crate) fn scaled_interval(n: &BigInt, exp: i64, s: i64) -> (f64, f64) {
    if n.is_zero() {
        return (0.0, 0.0);
    }
    let bits = n.bits();
    let (lo, hi, sh) = if bits <= 53 {
        let t = u64::try_from(n.abs()).expect("53 bits") as f64;
        (t, t, 0)
    } else {
        let sh = bits - 53;
        let t = u64::try_from(n.abs() >> sh).expect("53 bits") as f64;
        (t, t + 1.0, sh as i64)
    };
    let k = sh + exp - s;
    let lo = ldexp(lo, k).next_down().next_down().max(0.0);
    let hi = ldexp(hi, k).next_up().next_up();
    if n.is_negative() {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn directed_rounding() {
        let three = Xf::from_bigint_up(&BigInt::from(3));
        assert_eq!(three.to_rational(), int(3));
        let third_up = Xf::ONE.div_up(three);
        assert!(third_up.to_rational() > rat(1, 3));
        let big = BigInt::from(10).pow(40u32) + 7;
        assert!(Xf::from_bigint_up(&big).to_rational() >= Rational::from_integer(big.clone()));
        assert!(Xf::from_bigint_dn(&big).to_rational() <= Rational::from_integer(big));
        let s = Xf::from_f64(2.0).sqrt_up().to_rational();
        assert!(&s * &s >= int(2));
        let a = Xf::pow2(-3000).add_up(Xf::ONE);
        assert!(a.to_rational() > int(1));
        assert!(Xf::pow2(-5).le(Xf::pow2(-4)) && !Xf::ONE.le(Xf::ZERO));
    }

    #[test]
    fn intervals_enclose() {
        let n = BigInt::from(-12345);
        let (lo, hi) = scaled_interval(&n, -10, 0);
        let v = -12345.0 / 1024.0;
        assert!(lo <= v && v <= hi);
        let (lo, hi) = scaled_interval(&BigInt::from(1), -5000, 0);
        assert!(lo >= 0.0 && hi > 0.0);
    }

    proptest::proptest! {
        #[test]
        fn rounding_is_directed(a in 1u128.., b in 1u128.., sa in 0u32..200, sb in 0u32..200) {
            let ai = BigInt::from(a) << sa;
            let bi = BigInt::from(b) << sb;
            let (ar, br) = (Rational::from_integer(ai.clone()), Rational::from_integer(bi.clone()));
            let (xu, yu) = (Xf::from_bigint_up(&ai), Xf::from_bigint_up(&bi));
            let (xd, yd) = (Xf::from_bigint_dn(&ai), Xf::from_bigint_dn(&bi));
            proptest::prop_assert!(xd.to_rational() <= ar && ar <= xu.to_rational());
            proptest::prop_assert!(xu.mul_up(yu).to_rational() >= &ar * &br);
            proptest::prop_assert!(xd.mul_dn(yd).to_rational() <= &ar * &br);
            proptest::prop_assert!(xu.div_up(yd).to_rational() >= &ar / &br);
            proptest::prop_assert!(xu.add_up(yu).to_rational() >= &ar + &br);
            let s = xu.sqrt_up().to_rational();
            proptest::prop_assert!(&s * &s >= ar);
            proptest::prop_assert!(xd.le(xu) && xu.max(yu).to_rational() >= br.clone().max(ar));
        }
    }
}
