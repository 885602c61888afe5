//! Exact complex rationals and axis-aligned complex boxes.

use super::rational::{sqrt_upper, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CRational {
    pub re: Rational,
    pub im: Rational,
}

impl CRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CRational { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        CRational::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs_upper(&self, bits: u32) -> Rational {
        sqrt_upper(&self.norm_sqr(), bits)
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero");
        CRational::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        CRational::new(&self.re * s, &self.im * s)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        num_complex::Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, o: &CRational) -> CRational {
        CRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, o: &CRational) -> CRational {
        CRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, o: &CRational) -> CRational {
        CRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// Closed axis-aligned box `[re_lo, re_hi] x [im_lo, im_hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexBox {
    #[serde(with = "crate::report::rational_pair")]
    pub re: (Rational, Rational),
    #[serde(with = "crate::report::rational_pair")]
    pub im: (Rational, Rational),
}

impl ComplexBox {
    pub fn new(re: (Rational, Rational), im: (Rational, Rational)) -> Self {
        assert!(re.0 <= re.1 && im.0 <= im.1, "inverted box");
        ComplexBox { re, im }
    }

    /// Square box circumscribing the closed disc of radius `r` at `c`.
    pub fn around(c: &CRational, r: &Rational) -> Self {
        ComplexBox::new(
            (&c.re - r, &c.re + r),
            (&c.im - r, &c.im + r),
        )
    }

    pub fn point(c: &CRational) -> Self {
        Self::around(c, &Rational::zero())
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Rational {
        let a = &self.re.1 - &self.re.0;
        let b = &self.im.1 - &self.im.0;
        if a > b { a } else { b }
    }

    pub fn center(&self) -> CRational {
        let two = Rational::from_integer(2.into());
        CRational::new(
            (&self.re.0 + &self.re.1) / &two,
            (&self.im.0 + &self.im.1) / &two,
        )
    }

    pub fn contains(&self, z: &CRational) -> bool {
        self.re.0 <= z.re && z.re <= self.re.1 && self.im.0 <= z.im && z.im <= self.im.1
    }

    pub fn contains_box(&self, o: &ComplexBox) -> bool {
        self.re.0 <= o.re.0 && o.re.1 <= self.re.1 && self.im.0 <= o.im.0 && o.im.1 <= self.im.1
    }

    pub fn intersects(&self, o: &ComplexBox) -> bool {
        !(self.re.1 < o.re.0 || o.re.1 < self.re.0 || self.im.1 < o.im.0 || o.im.1 < self.im.0)
    }

    /// Upper bound on |z| over the box.
    pub fn abs_upper(&self, bits: u32) -> Rational {
        let mr = if self.re.0.abs() > self.re.1.abs() { self.re.0.abs() } else { self.re.1.abs() };
        let mi = if self.im.0.abs() > self.im.1.abs() { self.im.0.abs() } else { self.im.1.abs() };
        sqrt_upper(&(&mr * &mr + &mi * &mi), bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn complex_field_ops() {
        let a = CRational::new(rat(3, 5), rat(4, 5));
        assert_eq!(a.norm_sqr(), rat(1, 1));
        let q = &a * &a.conj().inv();
        assert_eq!(q, CRational::new(rat(-7, 25), rat(24, 25)));
        assert_eq!(CRational::i().pow(4), CRational::one());
    }

    #[test]
    fn boxes() {
        let b = ComplexBox::around(&CRational::i(), &rat(1, 200));
        assert_eq!(b.width(), rat(1, 100));
        assert!(b.contains(&CRational::i()));
        assert!(!b.intersects(&ComplexBox::point(&CRational::one())));
    }
}
