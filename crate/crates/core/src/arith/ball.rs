//! Complex midpoint-radius balls with outward dyadic rounding.
//!
//! Every operation returns a ball guaranteed to contain the exact result of
//! the operation applied to any points of its operands. Midpoints are rounded
//! to the grid 2^-prec and the rounding error is folded into the radius.

use super::complex::{CRational, ComplexBox};
use super::poly::Polynomial;
use super::rational::{ceil_dyadic, round_dyadic, sqrt_lower, sqrt_upper, Rational};
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub mid: CRational,
    pub rad: Rational,
}

impl Ball {
    pub fn exact(mid: CRational) -> Self {
        Ball { mid, rad: Rational::zero() }
    }

    pub fn real(r: Rational) -> Self {
        Self::exact(CRational::real(r))
    }

    pub fn new(mid: CRational, rad: Rational) -> Self {
        debug_assert!(!rad.is_negative());
        Ball { mid, rad }
    }

    pub fn zero() -> Self {
        Self::exact(CRational::zero())
    }

    pub fn round(self, prec: u32) -> Self {
        let re = round_dyadic(&self.mid.re, prec);
        let im = round_dyadic(&self.mid.im, prec);
        let err = (&re - &self.mid.re).abs() + (&im - &self.mid.im).abs();
        let rad = ceil_dyadic(&(self.rad + err), prec);
        Ball { mid: CRational::new(re, im), rad }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball::new(&self.mid + &o.mid, &self.rad + &o.rad)
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        Ball::new(&self.mid - &o.mid, &self.rad + &o.rad)
    }

    pub fn neg(&self) -> Ball {
        Ball::new(-&self.mid, self.rad.clone())
    }

    pub fn conj(&self) -> Ball {
        Ball::new(self.mid.conj(), self.rad.clone())
    }

    pub fn mul(&self, o: &Ball, prec: u32) -> Ball {
        let a = self.mid.abs_upper(prec);
        let b = o.mid.abs_upper(prec);
        let rad = &a * &o.rad + &b * &self.rad + &self.rad * &o.rad;
        Ball::new(&self.mid * &o.mid, rad).round(prec)
    }

    pub fn mul_exact(&self, z: &CRational, prec: u32) -> Ball {
        let rad = z.abs_upper(prec) * &self.rad;
        Ball::new(&self.mid * z, rad).round(prec)
    }

    pub fn scale(&self, s: &Rational) -> Ball {
        Ball::new(self.mid.scale(s), &self.rad * s.abs())
    }

    /// Enclosure of 1/z; `None` if the ball may contain zero.
    pub fn inv(&self, prec: u32) -> Option<Ball> {
        let m2 = self.mid.norm_sqr();
        let lo = sqrt_lower(&m2, prec + 4);
        if lo <= self.rad {
            return None;
        }
        // |1/z - 1/m| = |m - z| / (|z||m|) <= r / ((|m| - r)|m|)
        let rad = &self.rad / ((&lo - &self.rad) * &lo);
        Some(Ball::new(self.mid.inv(), rad).round(prec))
    }

    pub fn pow(&self, e: u64, prec: u32) -> Ball {
        let mut acc = Ball::exact(CRational::one());
        for _ in 0..e {
            acc = acc.mul(self, prec);
        }
        acc
    }

    /// Interval enclosing the real part.
    pub fn re(&self) -> (Rational, Rational) {
        (&self.mid.re - &self.rad, &self.mid.re + &self.rad)
    }

    pub fn im(&self) -> (Rational, Rational) {
        (&self.mid.im - &self.rad, &self.mid.im + &self.rad)
    }

    pub fn abs_upper(&self, prec: u32) -> Rational {
        self.mid.abs_upper(prec) + &self.rad
    }

    pub fn abs_lower(&self, prec: u32) -> Rational {
        let l = sqrt_lower(&self.mid.norm_sqr(), prec) - &self.rad;
        if l.is_negative() {
            Rational::zero()
        } else {
            l
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.norm_sqr() <= &self.rad * &self.rad
    }

    pub fn to_box(&self) -> ComplexBox {
        ComplexBox::around(&self.mid, &self.rad)
    }

    /// Ball circumscribing a box.
    pub fn from_box(b: &ComplexBox, prec: u32) -> Ball {
        let c = b.center();
        let hw = (&b.re.1 - &b.re.0) / Rational::from_integer(2.into());
        let hh = (&b.im.1 - &b.im.0) / Rational::from_integer(2.into());
        let r = sqrt_upper(&(&hw * &hw + &hh * &hh), prec);
        Ball::new(c, r).round(prec)
    }
}

/// Horner evaluation of a rational polynomial on a ball.
pub fn eval_poly(p: &Polynomial, z: &Ball, prec: u32) -> Ball {
    let mut acc = Ball::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z, prec);
        acc.mid.re += c;
        acc = acc.round(prec);
    }
    acc
}

/// Enclosure of a real value given by a real interval, as a real ball.
pub fn real_interval_ball(lo: &Rational, hi: &Rational) -> Ball {
    let two = Rational::from_integer(2.into());
    Ball::new(CRational::real((lo + hi) / &two), (hi - lo) / two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn mul_encloses() {
        let a = Ball::new(CRational::new(rat(1, 3), rat(1, 7)), rat(1, 1000));
        let b = Ball::new(CRational::new(rat(-2, 5), rat(3, 11)), rat(1, 1000));
        let c = a.mul(&b, 30);
        let exact = &a.mid * &b.mid;
        assert!((&c.mid - &exact).norm_sqr() <= &c.rad * &c.rad);
    }

    #[test]
    fn poly_eval_on_exact_root() {
        let p = Polynomial::from_ints(&[1, 0, 1]);
        let v = eval_poly(&p, &Ball::exact(CRational::i()), 40);
        assert!(v.contains_zero());
        let w = eval_poly(&p, &Ball::real(int(2)), 40);
        assert!(!w.contains_zero());
        assert!(w.abs_lower(20) >= rat(49, 10));
    }
}
