//! Certified isolation of the complex roots of a squarefree rational polynomial.
//!
//! Approximations come from a floating-point Aberth iteration, are polished by
//! Weierstrass (Durand-Kerner) corrections in exact dyadic arithmetic, and are
//! then certified with Smith's inclusion theorem: for monic `p` of degree `d`
//! and distinct points `z_i`, every root lies in some disc
//! `|z - z_i| <= d |W_i|` with `W_i = p(z_i) / prod_{j != i} (z_i - z_j)`, and
//! a connected component made of `m` discs holds exactly `m` roots.
//!
//! The output is *well separated*: all discs share a radius `R` and centers
//! are pairwise more than `6R` apart, so each disc holds one root and the
//! 5-fold enlargement of any disc holds no other root.

use super::complex::CRational;
use super::poly::Polynomial;
use super::rational::{bits_for, int, round_dyadic, sqrt_upper, Rational};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed disc with rational center and radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disc {
    pub center: CRational,
    pub radius: Rational,
}

impl Disc {
    pub fn point(c: CRational) -> Self {
        Disc { center: c, radius: Rational::zero() }
    }

    pub fn intersects(&self, o: &Disc) -> bool {
        let s = &self.radius + &o.radius;
        (&self.center - &o.center).norm_sqr() <= &s * &s
    }

    pub fn conj(&self) -> Disc {
        Disc { center: self.center.conj(), radius: self.radius.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.center.im.is_zero()
    }
}

/// Isolating discs for the roots of the squarefree polynomial `p`, each of
/// radius at most `max_radius`. Real roots get centers on the real axis.
pub fn isolate_squarefree(p: &Polynomial, max_radius: &Rational) -> Vec<Disc> {
    assert!(!p.is_zero(), "isolating roots of the zero polynomial");
    let d = p.degree();
    if d == 0 {
        return vec![];
    }
    let q = p.monic();
    if d == 1 {
        return vec![Disc::point(CRational::real(-q.coeff(0)))];
    }
    let real_count = q.count_real_roots();

    let mut attempt = 0u64;
    loop {
        let mut z: Vec<CRational> = aberth_f64(&q, attempt)
            .into_iter()
            .map(|c| to_dyadic(c, 60))
            .collect();
        let mut prec = 60u32;
        for _round in 0..80 {
            if let Some(zs) = symmetrize(&z, real_count, prec) {
                z = zs;
            }
            let Some(w) = weierstrass(&q, &z) else {
                break;
            };
            if let Some(discs) = certify(&z, &w, max_radius) {
                return discs;
            }
            z = z
                .iter()
                .zip(&w)
                .map(|(zi, wi)| {
                    let n = zi - wi;
                    CRational::new(round_dyadic(&n.re, prec), round_dyadic(&n.im, prec))
                })
                .collect();
            prec = (prec * 2).min(8192);
        }
        attempt += 1;
        assert!(attempt < 20, "root isolation failed to converge for {p}");
    }
}

fn to_dyadic(c: Complex64, bits: u32) -> CRational {
    let f = |x: f64| {
        let r = Rational::from_float(if x.is_finite() { x } else { 0.0 }).unwrap_or_else(Rational::zero);
        round_dyadic(&r, bits)
    };
    CRational::new(f(c.re), f(c.im))
}

/// Forces conjugate symmetry of the approximation set: the `real_count`
/// approximations closest to the real axis become real, the rest are paired.
fn symmetrize(z: &[CRational], real_count: usize, prec: u32) -> Option<Vec<CRational>> {
    let n = z.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| z[a].im.abs().cmp(&z[b].im.abs()));
    let mut out = vec![CRational::zero(); n];
    for &i in &idx[..real_count] {
        out[i] = CRational::real(z[i].re.clone());
    }
    let mut rest: Vec<usize> = idx[real_count..].to_vec();
    if rest.len() % 2 == 1 {
        return None;
    }
    while let Some(i) = rest.pop() {
        let target = z[i].conj();
        let (pos, _) = rest.iter().enumerate().min_by(|(_, &a), (_, &b)| {
            (&z[a] - &target).norm_sqr().cmp(&(&z[b] - &target).norm_sqr())
        })?;
        let j = rest.swap_remove(pos);
        let two = int(2);
        let (re, im) = if z[i].im.is_positive() {
            ((&z[i].re + &z[j].re) / &two, (&z[i].im - &z[j].im) / &two)
        } else {
            ((&z[i].re + &z[j].re) / &two, (&z[j].im - &z[i].im) / &two)
        };
        let c = CRational::new(round_dyadic(&re, prec), round_dyadic(&im, prec));
        if !c.im.is_positive() {
            return None;
        }
        out[i] = if z[i].im.is_positive() { c.clone() } else { c.conj() };
        out[j] = out[i].conj();
    }
    Some(out)
}

/// Exact Weierstrass corrections `p(z_i)/prod(z_i - z_j)` for monic `p`.
/// `None` when two approximations coincide.
fn weierstrass(p: &Polynomial, z: &[CRational]) -> Option<Vec<CRational>> {
    let mut out = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        let mut den = CRational::one();
        for (j, zj) in z.iter().enumerate() {
            if i != j {
                den = &den * &(zi - zj);
            }
        }
        if den.is_zero() {
            return None;
        }
        out.push(&p.eval_complex(zi) * &den.inv());
    }
    Some(out)
}

/// Smith-disc certification. Succeeds when the common radius
/// `R = max_i d|W_i|` is at most `max_radius` and all centers are pairwise
/// more than `6R` apart.
fn certify(z: &[CRational], w: &[CRational], max_radius: &Rational) -> Option<Vec<Disc>> {
    let d = int(z.len() as i64);
    let bits = bits_for(max_radius).max(8) + 8;
    let mut r = Rational::zero();
    for wi in w {
        let ri = sqrt_upper(&wi.norm_sqr(), bits) * &d;
        if ri > r {
            r = ri;
        }
    }
    if &r > max_radius {
        return None;
    }
    let sep = &r * int(6);
    let sep2 = &sep * &sep;
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            if (&z[i] - &z[j]).norm_sqr() <= sep2 {
                return None;
            }
        }
    }
    // a root found exactly (W_i = 0) still gets the common radius so that the
    // separation invariant is uniform
    Some(z.iter().map(|c| Disc { center: c.clone(), radius: r.clone() }).collect())
}

/// Floating-point Aberth-Ehrlich iteration for initial approximations.
fn aberth_f64(p: &Polynomial, attempt: u64) -> Vec<Complex64> {
    let d = p.degree();
    let c: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|r| Complex64::new(r.to_f64().unwrap_or(0.0), 0.0))
        .collect();
    let dc: Vec<Complex64> = (1..=d).map(|i| c[i] * i as f64).collect();
    let eval = |cs: &[Complex64], x: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * x + k);
    let a0 = c[0].norm().max(1e-300);
    let radius = (a0 / c[d].norm()).powf(1.0 / d as f64).clamp(1e-3, 1e6);
    let offset = 0.4 + 0.37 * attempt as f64;
    let scale = 1.0 + 0.1 * attempt as f64;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius * scale,
                offset + 2.0 * std::f64::consts::PI * k as f64 / d as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let pv = eval(&c, z[i]);
            let dv = eval(&dc, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}
