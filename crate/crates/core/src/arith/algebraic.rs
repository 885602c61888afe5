//! Algebraic numbers as (squarefree defining polynomial, isolating disc).
//!
//! The defining polynomial is squarefree but not necessarily irreducible;
//! every exact test goes through gcds with that polynomial, so irreducibility
//! is never required. The isolating disc `D(c, r)` always satisfies: it holds
//! exactly one root of the polynomial, and `D(c, 5r)` holds no other.
//!
//! Inequalities are settled by refinement, equalities by exact gcd/resultant
//! computations.

use super::ball::Ball;
use super::complex::{CRational, ComplexBox};
use super::isolate::{isolate_squarefree, Disc};
use super::poly::Polynomial;
use super::rational::{int, pow2, Rational};
use super::resultant::{image_poly, product_poly, ratio_poly};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

#[derive(Clone)]
pub struct AlgebraicNumber {
    poly: Arc<Polynomial>,
    disc: Disc,
    /// Finest disc computed so far; shared by clones.
    refined: Arc<Mutex<Disc>>,
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        let disc = Disc::point(CRational::real(r.clone()));
        AlgebraicNumber {
            poly: Arc::new(Polynomial::linear_root(&r)),
            refined: Arc::new(Mutex::new(disc.clone())),
            disc,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// Trusted constructor: `disc` must isolate a root of the monic squarefree
    /// `poly` with the 5x separation property.
    pub(crate) fn from_parts(poly: Arc<Polynomial>, disc: Disc) -> Self {
        if poly.degree() == 1 {
            return Self::from_rational(-poly.coeff(0) / poly.lc());
        }
        AlgebraicNumber { poly, refined: Arc::new(Mutex::new(disc.clone())), disc }
    }

    /// All roots of a nonzero polynomial, each once, with rational roots
    /// recognised and given linear defining polynomials.
    pub fn roots_of(p: &Polynomial) -> Vec<AlgebraicNumber> {
        let s = p.squarefree_part();
        if s.degree() == 0 {
            return vec![];
        }
        let discs = isolate_squarefree(&s, &Rational::one());
        let lc_int = s.primitive_integer().last().cloned().unwrap();
        let mut rationals = Vec::new();
        for d in discs.iter().filter(|d| d.is_real()) {
            if let Some(r) = rational_root_in(&s, d, &lc_int) {
                rationals.push(r);
            }
        }
        let mut rest = s.clone();
        for r in &rationals {
            rest = rest.exact_div(&Polynomial::linear_root(r));
        }
        let rest = Arc::new(rest.monic());
        let mut out: Vec<AlgebraicNumber> = Vec::with_capacity(discs.len());
        for d in discs {
            match rationals.iter().find(|r| d.is_real() && d_contains_real(&d, r)) {
                Some(r) => out.push(Self::from_rational(r.clone())),
                None => out.push(Self::from_parts(rest.clone(), d)),
            }
        }
        out
    }

    /// Locates `value` among the roots of `r`: `value(prec)` must return
    /// balls enclosing one fixed root of `r` with radius shrinking in `prec`.
    pub fn identify(r: &Polynomial, value: impl Fn(u32) -> Ball) -> AlgebraicNumber {
        let roots = Self::roots_of(r);
        let discs: Vec<Disc> = roots.iter().map(|a| a.disc()).collect();
        let mut prec = 32;
        loop {
            let b = value(prec);
            let bd = Disc { center: b.mid.clone(), radius: b.rad.clone() };
            let hits: Vec<usize> = (0..discs.len()).filter(|&i| discs[i].intersects(&bd)).collect();
            assert!(!hits.is_empty(), "value is not a root of the eliminant");
            // the true root's disc always meets the ball
            if hits.len() == 1 {
                return roots[hits[0]].clone();
            }
            prec *= 2;
            assert!(prec <= 1 << 16, "failed to identify root");
        }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn disc(&self) -> Disc {
        self.refined.lock().unwrap().clone()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.poly.degree() == 1).then(|| -self.poly.coeff(0) / self.poly.lc())
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.disc.is_real()
    }

    pub fn isolating_box(&self) -> ComplexBox {
        let d = self.disc();
        ComplexBox::around(&d.center, &d.radius)
    }

    pub fn conj(&self) -> AlgebraicNumber {
        if self.is_real() {
            return self.clone();
        }
        let d = self.disc();
        AlgebraicNumber {
            poly: self.poly.clone(),
            disc: self.disc.conj(),
            refined: Arc::new(Mutex::new(d.conj())),
        }
    }

    /// Disc of radius at most `radius` isolating the same root.
    pub fn refined_disc(&self, radius: &Rational) -> Disc {
        let cur = self.disc();
        if &cur.radius <= radius {
            return cur;
        }
        let discs = isolate_squarefree(&self.poly, radius);
        let hit: Vec<Disc> = discs.into_iter().filter(|d| d.intersects(&cur)).collect();
        assert_eq!(hit.len(), 1, "refinement lost the isolated root");
        let d = hit.into_iter().next().unwrap();
        *self.refined.lock().unwrap() = d.clone();
        d
    }

    /// Box of width at most `width` isolating the same root.
    pub fn refine(&self, width: &Rational) -> ComplexBox {
        let d = self.refined_disc(&(width / int(2)));
        ComplexBox::around(&d.center, &d.radius)
    }

    /// Ball of radius at most 2^-prec around the number.
    pub fn ball(&self, prec: u32) -> Ball {
        let d = self.refined_disc(&pow2(-(prec as i64)));
        Ball::new(d.center, d.radius)
    }

    /// Is this number a root of `k`? Exact.
    pub fn is_root_of(&self, k: &Polynomial) -> bool {
        if k.is_zero() {
            return true;
        }
        if let Some(r) = self.as_rational() {
            return k.eval(&r).is_zero();
        }
        let h = Polynomial::gcd(&self.poly, k);
        if h.degree() == 0 {
            return false;
        }
        if h.degree() == self.poly.degree() {
            return true;
        }
        let cur = self.disc();
        isolate_squarefree(&h, &cur.radius).iter().any(|d| d.intersects(&cur))
    }

    /// Exact equality.
    pub fn eq_exact(&self, o: &AlgebraicNumber) -> bool {
        if let Some(r) = self.as_rational() {
            return o.is_root_of(&Polynomial::linear_root(&r));
        }
        if let Some(r) = o.as_rational() {
            return self.is_root_of(&Polynomial::linear_root(&r));
        }
        let h = Polynomial::gcd(&self.poly, &o.poly);
        if h.degree() == 0 {
            return false;
        }
        let (a, b) = (self.disc(), o.disc());
        let rad = if a.radius < b.radius { &a.radius } else { &b.radius };
        let rad = if rad.is_zero() { pow2(-64) } else { rad.clone() };
        isolate_squarefree(&h, &rad)
            .iter()
            .any(|d| d.intersects(&a) && d.intersects(&b))
    }

    /// `|self|^2` as a real algebraic number.
    pub fn modulus_sq(&self) -> AlgebraicNumber {
        if let Some(r) = self.as_rational() {
            return Self::from_rational(&r * &r);
        }
        let r = product_poly(&self.poly, &self.poly);
        Self::identify(&r, |prec| {
            let b = self.ball(prec + 4);
            b.mul(&b.conj(), prec + 4)
        })
    }

    /// Exact trichotomy of |self| against 1. Zero is LESS.
    pub fn cmp_modulus_one(&self) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.abs().cmp(&Rational::one());
        }
        let m = self.modulus_sq();
        if m.is_root_of(&Polynomial::linear_root(&Rational::one())) {
            return Ordering::Equal;
        }
        let mut prec = 16;
        loop {
            let b = m.ball(prec);
            let (lo, hi) = b.re();
            if lo > Rational::one() {
                return Ordering::Greater;
            }
            if hi < Rational::one() {
                return Ordering::Less;
            }
            prec *= 2;
        }
    }

    /// Rational upper bound on |self|.
    pub fn abs_upper(&self, prec: u32) -> Rational {
        self.ball(prec).abs_upper(prec)
    }

    /// Rational lower bound on |self|; positive for nonzero numbers once
    /// `prec` is large enough.
    pub fn abs_lower(&self, prec: u32) -> Rational {
        self.ball(prec).abs_lower(prec)
    }

    /// `self / o` as an algebraic number.
    pub fn ratio(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber, DivisionByZero> {
        if o.is_zero() {
            return Err(DivisionByZero);
        }
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Ok(Self::from_rational(a / b));
        }
        if self.is_zero() {
            return Ok(Self::from_int(0));
        }
        let r = ratio_poly(&self.poly, &o.poly);
        Ok(Self::identify(&r, |prec| {
            let a = self.ball(prec + 8);
            let mut p = prec + 8;
            let inv = loop {
                if let Some(i) = o.ball(p).inv(p) {
                    break i;
                }
                p *= 2;
            };
            a.mul(&inv, p)
        }))
    }

    /// `h(self)` for a rational polynomial `h`.
    pub fn image(&self, h: &Polynomial) -> AlgebraicNumber {
        if let Some(r) = self.as_rational() {
            return Self::from_rational(h.eval(&r));
        }
        let r = image_poly(&self.poly, h);
        Self::identify(&r, |prec| super::ball::eval_poly(h, &self.ball(prec + 8), prec + 8))
    }

    /// Least `n >= 1` with `self^n = 1`, if any.
    ///
    /// A root of unity of order `n` is a root of the cyclotomic polynomial of
    /// degree `phi(n)`, so `phi(n) <= deg` and, since `phi(n) >= sqrt(n/2)`,
    /// `n <= 2 deg^2`.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_one() {
                Some(1)
            } else if r == -Rational::one() {
                Some(2)
            } else {
                None
            };
        }
        let d = self.degree() as u64;
        (1..=2 * d * d)
            .filter(|&n| totient(n) <= d)
            .find(|&n| self.is_root_of(&Polynomial::cyclotomic(n)))
    }

    /// Exact check of `self^n = 1`.
    pub fn pow_is_one(&self, n: u64) -> bool {
        let xn = &Polynomial::monomial(Rational::one(), n as usize) - &Polynomial::one();
        self.is_root_of(&xn)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let d = self.ball(53);
        (d.mid.re.to_f64().unwrap_or(f64::NAN), d.mid.im.to_f64().unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("division by the zero algebraic number")]
pub struct DivisionByZero;

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "Alg[{} ~ {re:.6}{im:+.6}i]", self.poly)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let (re, im) = self.to_f64();
        write!(f, "root of {} near {re:.6}{im:+.6}i", self.poly)
    }
}

pub fn totient(n: u64) -> u64 {
    let (mut n, mut out) = (n, n);
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn d_contains_real(d: &Disc, r: &Rational) -> bool {
    Disc::point(CRational::real(r.clone())).intersects(d)
}

/// Rational root of `s` inside the real disc `d`, if any. A rational root
/// times the integer leading coefficient is an integer, so once the disc is
/// narrower than `1/(2 lc)` there is a single candidate.
fn rational_root_in(s: &Polynomial, d: &Disc, lc: &num_bigint::BigInt) -> Option<Rational> {
    let lcq = Rational::from_integer(lc.clone());
    let want = (int(4) * &lcq).recip();
    let disc = if d.radius > want {
        let discs = isolate_squarefree(s, &want);
        discs.into_iter().find(|e| e.intersects(d))?
    } else {
        d.clone()
    };
    let m = (&disc.center.re * &lcq).round();
    let cand = m / lcq;
    (s.eval(&cand).is_zero() && d_contains_real(&disc, &cand)).then_some(cand)
}

/// Isolated roots of a nonzero polynomial with multiplicities; boxes are
/// pairwise disjoint and at most `width` wide.
pub fn isolate_roots(p: &Polynomial, width: &Rational) -> Vec<(AlgebraicNumber, usize)> {
    assert!(!p.is_zero(), "isolate_roots on the zero polynomial");
    let mut out = Vec::new();
    let factors = p.squarefree_decomposition();
    let all: Vec<AlgebraicNumber> = AlgebraicNumber::roots_of(p);
    let half = width / int(2);
    for a in all {
        let mult = factors
            .iter()
            .find(|(f, _)| a.is_root_of(f))
            .map(|(_, m)| *m)
            .expect("root belongs to a squarefree factor");
        a.refined_disc(&half);
        out.push((a, mult));
    }
    // refinement to a common radius keeps boxes disjoint: each disc is within
    // its own separation zone
    out
}
