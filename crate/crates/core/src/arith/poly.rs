//! Dense univariate polynomials over the rationals.

use super::complex::CRational;
use super::rational::{int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients are stored lowest degree first; the leading coefficient is
/// nonzero unless the polynomial is zero (empty vector).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut v = vec![Rational::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &CRational) -> CRational {
        let mut acc = CRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// `self(c * x)`.
    pub fn scale_arg(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &p);
            p *= c;
        }
        Self::new(out)
    }

    /// `x^deg * self(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.degree() < d.degree() || self.is_zero() {
            return (Self::zero(), self.clone());
        }
        let dl = d.lc();
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Polynomial) -> Polynomial {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            // keep coefficient growth in check
            y = r.monic();
        }
        x.monic()
    }

    /// Returns (g, s, t) with s*a + t*b = g monic.
    pub fn ext_gcd(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial, Polynomial) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lc().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn squarefree_part(&self) -> Polynomial {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = Self::gcd(self, &self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's algorithm: monic squarefree, pairwise coprime factors with their
    /// multiplicities; the product of `f^m` equals `self.monic()`.
    pub fn squarefree_decomposition(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a0 = Self::gcd(&f, &d);
        let mut b = f.exact_div(&a0);
        let mut c = d.exact_div(&a0);
        let mut dd = &c - &b.derivative();
        let mut i = 1;
        while b.degree() > 0 {
            let a = Self::gcd(&b, &dd);
            b = b.exact_div(&a);
            c = dd.exact_div(&a);
            dd = &c - &b.derivative();
            if a.degree() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient,
    /// proportional to `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        ints
    }

    /// Number of distinct real roots (Sturm sequence).
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let p = self.squarefree_part();
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        let sign_changes = |signs: Vec<i32>| {
            let s: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_pos = seq.iter().map(|q| sgn(&q.lc())).collect();
        let at_neg = seq
            .iter()
            .map(|q| if q.degree() % 2 == 0 { sgn(&q.lc()) } else { -sgn(&q.lc()) })
            .collect();
        sign_changes(at_neg) - sign_changes(at_pos)
    }

    /// Power sums p_0..=p_max of the roots of `self` (with multiplicity).
    pub fn power_sums(&self, max: usize) -> Vec<Rational> {
        let f = self.monic();
        let d = f.degree();
        // e_i via coefficients: f = x^d + c_{d-1} x^{d-1} + ... ; Newton's identities
        let c = |i: usize| f.coeff(i);
        let mut p = vec![int(d as i64)];
        for k in 1..=max {
            let mut s = Rational::zero();
            for i in 1..k.min(d + 1) {
                s += c(d - i) * &p[k - i];
            }
            if k <= d {
                s += c(d - k) * int(k as i64);
            }
            p.push(-s);
        }
        p
    }

    /// Sum of h over all roots of `self` (squarefree, so each root once).
    pub fn trace_of(&self, h: &Polynomial) -> Rational {
        let h = h.rem(self);
        let ps = self.power_sums(h.degree());
        h.coeffs.iter().zip(&ps).map(|(a, b)| a * b).sum()
    }

    /// n-th cyclotomic polynomial, as the Moebius product of `x^d - 1`.
    pub fn cyclotomic(n: u64) -> Polynomial {
        assert!(n >= 1);
        let (mut num, mut den) = (Self::one(), Self::one());
        for d in (1..=n).filter(|d| n % d == 0) {
            let f = &Self::monomial(Rational::one(), d as usize) - &Self::one();
            match moebius(n / d) {
                1 => num = &num * &f,
                -1 => den = &den * &f,
                _ => {}
            }
        }
        num.exact_div(&den)
    }

    /// Cauchy bound: every root has modulus < 1 + max |a_i / a_d|.
    pub fn cauchy_bound(&self) -> Rational {
        let l = self.lc().abs();
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let v = c.abs() / &l;
            if v > m {
                m = v;
            }
        }
        m + Rational::one()
    }
}

fn moebius(mut n: u64) -> i32 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            out = -out;
        }
        p += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

fn sgn(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn division_and_gcd() {
        let a = Polynomial::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = Polynomial::from_ints(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Polynomial::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = Polynomial::gcd(&a, &Polynomial::from_ints(&[-1, 1]).pow(2));
        assert_eq!(g, Polynomial::from_ints(&[-1, 1]));
        let (g, s, t) = Polynomial::ext_gcd(&a, &Polynomial::from_ints(&[2, 1]));
        assert_eq!(g, Polynomial::one());
        assert_eq!(&(&s * &a) + &(&t * &Polynomial::from_ints(&[2, 1])), Polynomial::one());
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x-2)
        let p = &Polynomial::from_ints(&[-1, 1]).pow(2) * &Polynomial::from_ints(&[-2, 1]);
        let d = p.squarefree_decomposition();
        assert_eq!(d, vec![(Polynomial::from_ints(&[-2, 1]), 1), (Polynomial::from_ints(&[-1, 1]), 2)]);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(Polynomial::from_ints(&[1, 0, 1]).count_real_roots(), 0);
        assert_eq!(Polynomial::from_ints(&[-2, 0, 1]).count_real_roots(), 2);
        assert_eq!(Polynomial::from_ints(&[0, -1, 0, 1]).count_real_roots(), 3);
    }

    #[test]
    fn power_sums_and_trace() {
        // roots 1, 2, 3
        let p = &(&Polynomial::from_ints(&[-1, 1]) * &Polynomial::from_ints(&[-2, 1]))
            * &Polynomial::from_ints(&[-3, 1]);
        assert_eq!(p.power_sums(4), vec![int(3), int(6), int(14), int(36), int(98)]);
        // sum over roots of x^2 + 1 of x^2 = i^2 + (-i)^2 = -2
        let q = Polynomial::from_ints(&[1, 0, 1]);
        assert_eq!(q.trace_of(&Polynomial::from_ints(&[0, 0, 1])), int(-2));
        assert_eq!(q.trace_of(&Polynomial::from_ints(&[5])), int(10));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(Polynomial::cyclotomic(1), Polynomial::from_ints(&[-1, 1]));
        assert_eq!(Polynomial::cyclotomic(4), Polynomial::from_ints(&[1, 0, 1]));
        assert_eq!(Polynomial::cyclotomic(6), Polynomial::from_ints(&[1, -1, 1]));
        assert_eq!(Polynomial::cyclotomic(5), Polynomial::from_ints(&[1, 1, 1, 1, 1]));
        assert_eq!(Polynomial::cyclotomic(12).degree(), 4);
    }

    #[test]
    fn display() {
        let p = Polynomial::new(vec![rat(1, 1), rat(-6, 5), rat(1, 1)]);
        assert_eq!(p.to_string(), "x^2 - 6/5*x + 1");
    }
}
