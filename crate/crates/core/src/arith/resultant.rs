//! Resultants and the eliminations built on them.
//!
//! Bivariate resultants are computed by evaluating the eliminated variable at
//! enough integer points (where the formal leading coefficient stays nonzero)
//! and interpolating.

use super::poly::Polynomial;
use super::rational::{int, Rational};
use num_traits::{One, Zero};

/// Resultant of two univariate polynomials over the rationals.
pub fn resultant(a: &Polynomial, b: &Polynomial) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let (da, db) = (a.degree(), b.degree());
        if db == 0 {
            return acc * num_traits::pow(b.lc(), da);
        }
        if da == 0 {
            return acc * num_traits::pow(a.lc(), db);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Rational::zero();
        }
        let dr = r.degree();
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.lc(), da - dr);
        a = b;
        b = r;
    }
}

/// Newton interpolation through `(x_i, y_i)` with distinct `x_i`.
pub fn interpolate(points: &[(Rational, Rational)]) -> Polynomial {
    let n = points.len();
    let mut coef: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    let mut out = Polynomial::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        out = &(&out * &Polynomial::linear_root(&points[i].0)) + &Polynomial::constant(coef[i].clone());
    }
    out
}

/// `Res_y(f(x0, y), q(y))` sampled at `x0 = start, start+1, ...`, skipping
/// points where `skip` holds, then interpolated to a polynomial of degree
/// at most `deg`.
fn eliminate(
    deg: usize,
    start: i64,
    f: impl Fn(&Rational) -> Polynomial,
    q: &Polynomial,
    skip: impl Fn(&Rational) -> bool,
) -> Polynomial {
    let mut pts = Vec::with_capacity(deg + 1);
    let mut x = start;
    while pts.len() <= deg {
        let x0 = int(x);
        x += 1;
        if skip(&x0) {
            continue;
        }
        pts.push((x0.clone(), resultant(&f(&x0), q)));
    }
    interpolate(&pts)
}

/// Polynomial whose roots include every ratio `a/b` with `p(a) = 0`, `q(b) = 0`.
/// Requires `q(0) != 0`.
pub fn ratio_poly(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let deg = p.degree() * q.degree();
    // p(x0 * y) has leading coefficient lc(p) x0^dp, nonzero for x0 != 0
    eliminate(deg, 1, |x0| p.scale_arg(x0), q, |x0| x0.is_zero())
}

/// Polynomial whose roots include every product `a*b` with `p(a) = 0`, `q(b) = 0`.
/// Requires `p(0) != 0`.
pub fn product_poly(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let deg = p.degree() * q.degree();
    // y^dp p(x0 / y) = sum p_i x0^i y^(dp - i); leading coefficient p_0
    eliminate(deg, 0, |x0| p.scale_arg(x0).reverse_padded(p.degree()), q, |_| false)
}

/// Polynomial whose roots include `h(a)` for every root `a` of `g`.
pub fn image_poly(g: &Polynomial, h: &Polynomial) -> Polynomial {
    let h = h.rem(g);
    if h.degree() == 0 {
        return Polynomial::linear_root(&h.coeff(0));
    }
    eliminate(
        g.degree(),
        0,
        |x0| &Polynomial::constant(x0.clone()) - &h,
        g,
        |_| false,
    )
}

impl Polynomial {
    /// `x^n * self(1/x)` for a formal degree `n >= deg`.
    pub fn reverse_padded(&self, n: usize) -> Polynomial {
        let mut c = self.coeffs().to_vec();
        c.resize(n + 1, Rational::zero());
        c.reverse();
        Polynomial::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 1) = (1 - 2) * ... = lc^... ; direct: prod over roots of (x-1) of a(root) = a(1) = -1
        let a = Polynomial::from_ints(&[-2, 0, 1]);
        let b = Polynomial::from_ints(&[-1, 1]);
        assert_eq!(resultant(&a, &b), int(-1));
        assert_eq!(resultant(&b, &a), int(-1));
        let c = Polynomial::from_ints(&[-2, 1]);
        assert_eq!(resultant(&a, &Polynomial::from_ints(&[2, 0, -1])), int(0));
        assert_eq!(resultant(&c, &a), int(2));
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = Polynomial::new(vec![rat(1, 3), rat(-2, 1), rat(0, 1), rat(5, 7)]);
        let pts: Vec<_> = (0..4).map(|i| (int(i), p.eval(&int(i)))).collect();
        assert_eq!(interpolate(&pts), p);
    }

    #[test]
    fn ratio_of_conjugate_unit_roots() {
        let p = Polynomial::from_ints(&[5, -6, 5]);
        let r = ratio_poly(&p, &p).squarefree_part();
        // ratios: 1 and ((3+4i)/5)^2 and its conjugate: (x - 1)(25x^2 + 14x + 25)
        let expect = (&Polynomial::from_ints(&[-1, 1]) * &Polynomial::from_ints(&[25, 14, 25])).monic();
        assert_eq!(r, expect);
    }

    #[test]
    fn product_and_image() {
        let p = Polynomial::from_ints(&[5, -6, 5]);
        let m = product_poly(&p, &p).squarefree_part();
        // products: a*a, a*conj(a) = 1, conj(a)^2
        assert_eq!(m.eval(&int(1)), int(0));
        let g = Polynomial::from_ints(&[1, 0, 1]);
        let im = image_poly(&g, &Polynomial::from_ints(&[0, 2]));
        assert_eq!(im.monic(), Polynomial::from_ints(&[4, 0, 1]));
    }
}
