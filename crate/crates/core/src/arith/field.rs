//! Linear algebra over `Q[t]/(g)` for squarefree `g`, with dynamic splitting.
//!
//! When `g` is reducible the quotient is a product of fields. Zero tests are
//! answered uniformly for every root of `g` or else the modulus is split into
//! two coprime factors on which the answer is uniform, and the caller restarts
//! the computation on each factor.

use super::algebraic::AlgebraicNumber;
use super::ball::{eval_poly, Ball};
use super::poly::Polynomial;
use super::rational::{pow2, Rational};
use num_traits::Zero;

/// The modulus factors as `0 * 1` with both factors nonconstant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split(pub Polynomial, pub Polynomial);

pub type RingResult<T> = Result<T, Split>;

#[derive(Clone, Debug)]
pub struct QuotientRing {
    g: Polynomial,
}

impl QuotientRing {
    pub fn new(g: &Polynomial) -> Self {
        assert!(g.degree() >= 1, "modulus must be nonconstant");
        QuotientRing { g: g.monic() }
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.g
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        p.rem(&self.g)
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        (a * b).rem(&self.g)
    }

    /// The generator `t` itself.
    pub fn gen(&self) -> Polynomial {
        self.reduce(&Polynomial::x())
    }

    pub fn pow(&self, a: &Polynomial, mut e: u64) -> Polynomial {
        let mut base = self.reduce(a);
        let mut acc = self.reduce(&Polynomial::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Whether `a` vanishes at every root of the modulus; splits if it
    /// vanishes at some roots only.
    pub fn is_zero(&self, a: &Polynomial) -> RingResult<bool> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Ok(true);
        }
        let h = Polynomial::gcd(&a, &self.g);
        if h.degree() == 0 {
            Ok(false)
        } else {
            Err(Split(self.g.exact_div(&h), h))
        }
    }

    /// Inverse of an element that is nonzero at every root.
    pub fn inv(&self, a: &Polynomial) -> RingResult<Polynomial> {
        let a = self.reduce(a);
        let (h, s, _) = Polynomial::ext_gcd(&a, &self.g);
        assert!(!h.is_zero(), "inverse of zero");
        if h.degree() > 0 {
            return Err(Split(self.g.exact_div(&h), h));
        }
        Ok(self.reduce(&s))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, m: &mut [Vec<Polynomial>]) -> RingResult<Vec<usize>> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let mut found = None;
            for i in r..rows {
                if !self.is_zero(&m[i][c])? {
                    found = Some(i);
                    break;
                }
            }
            let Some(p) = found else { continue };
            m.swap(r, p);
            let inv = self.inv(&m[r][c])?;
            for v in m[r].iter_mut() {
                *v = self.mul(v, &inv);
            }
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..cols {
                        let t = self.mul(&f, &m[r][j]);
                        m[i][j] = &m[i][j] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    /// Basis of the right kernel of `m` (rows x cols).
    pub fn kernel(&self, m: &[Vec<Polynomial>], cols: usize) -> RingResult<Vec<Vec<Polynomial>>> {
        let mut a: Vec<Vec<Polynomial>> = m.to_vec();
        let pivots = self.rref(&mut a)?;
        let mut out = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Polynomial::zero(); cols];
            v[free] = Polynomial::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][free];
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Rank of a set of vectors.
    pub fn rank(&self, vs: &[Vec<Polynomial>]) -> RingResult<usize> {
        let mut a = vs.to_vec();
        Ok(self.rref(&mut a)?.len())
    }

    pub fn mat_mul(&self, a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| {
                        let mut s = Polynomial::zero();
                        for k in 0..inner {
                            s = &s + &(&row[k] * &b[k][j]);
                        }
                        self.reduce(&s)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mat_vec(&self, a: &[Vec<Polynomial>], v: &[Polynomial]) -> Vec<Polynomial> {
        a.iter()
            .map(|row| {
                let mut s = Polynomial::zero();
                for (x, y) in row.iter().zip(v) {
                    s = &s + &(x * y);
                }
                self.reduce(&s)
            })
            .collect()
    }

    /// Inverse of a square matrix that is invertible at every root.
    pub fn mat_inv(&self, a: &[Vec<Polynomial>]) -> RingResult<Vec<Vec<Polynomial>>> {
        let n = a.len();
        let mut aug: Vec<Vec<Polynomial>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { Polynomial::one() } else { Polynomial::zero() }));
                r
            })
            .collect();
        let pivots = self.rref(&mut aug)?;
        assert!(pivots.len() == n && pivots[n - 1] == n - 1, "singular matrix");
        Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

/// The value `h(alpha)` for a root `alpha` of the modulus `h` was reduced by.
#[derive(Clone, Debug)]
pub struct FieldValue {
    pub h: Polynomial,
    pub root: AlgebraicNumber,
}

impl FieldValue {
    pub fn new(h: Polynomial, root: AlgebraicNumber) -> Self {
        FieldValue { h, root }
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero() || self.root.is_root_of(&self.h)
    }

    /// Ball of radius at most `2^-prec` around the value.
    pub fn ball(&self, prec: u32) -> Ball {
        if self.h.degree() == 0 {
            return Ball::real(self.h.coeff(0));
        }
        let target = pow2(-(prec as i64));
        let mut q = prec + 16;
        loop {
            let b = eval_poly(&self.h, &self.root.ball(q), q + 8);
            if b.rad <= target {
                return b;
            }
            q += q / 2 + 16;
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        if self.h.is_zero() {
            return AlgebraicNumber::from_rational(Rational::zero());
        }
        self.root.image(&self.h)
    }
}
