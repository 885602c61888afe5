//! The decision procedure.
//!
//! An empty limit set comes with linear growth, which bounds how long the
//! orbit can stay near `y`. A nonempty one is compared against `delta` by
//! the gap search; below the distance, the contracting remainder bounds how
//! long the orbit can stay near `y`, and above it hits recur forever and are
//! found by enumeration. Every verdict ends in exact membership checks.

use crate::arith::rational::{ceil_dyadic, ceil_u64, int, sqrt_upper};
use crate::arith::{Rational, RationalMatrix};
use crate::distance::{Distance, DistanceBound, GapOutcome, GapResult, NetOptions};
use crate::error::{OrbitError, Result};
use crate::limitset::{analyze, p_frobenius, BlockCase, GrowthCertificate, LimitSetAnalysis, LimitSetDescriptor};
use crate::norm::Norm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub norm: Norm,
    /// Last level tried by the gap search.
    pub j_max: u32,
    pub net_cap: u64,
    /// Orbit points enumerated for a witness: above the distance, where one
    /// must exist, and at the boundary before giving up.
    pub witness_cap: u64,
    /// Largest search bound swept exhaustively.
    pub sweep_cap: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            norm: Norm::Euclidean,
            j_max: 64,
            net_cap: NetOptions::default().net_cap,
            witness_cap: 20_000,
            sweep_cap: 10_000_000,
        }
    }
}

/// For every `k >= K`, `D(A^k x, S_L) <= s lambda^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionCertificate {
    #[serde(with = "crate::report::rational")]
    pub s: Rational,
    #[serde(with = "crate::report::rational")]
    pub lambda: Rational,
    #[serde(with = "crate::report::rational")]
    pub rho: Rational,
    #[serde(rename = "K")]
    pub k: u64,
    /// No contracting block carries mass: the orbit lies on `S_L`.
    pub zero: bool,
}

impl ContractionCertificate {
    pub fn envelope(&self, k: u64) -> Rational {
        if self.zero {
            return Rational::zero();
        }
        &self.s * pow_rat(&self.lambda, k)
    }

    /// Least `k >= K` with `s lambda^k < eta`.
    pub fn steps_below(&self, eta: &Rational) -> u64 {
        if self.zero {
            return self.k;
        }
        let below = |k: u64| self.envelope(k) < *eta;
        self.k.max(least_true(0, below))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictTag {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
    #[serde(rename = "UNDECIDED_BOUNDARY")]
    UndecidedBoundary,
}

impl std::fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictTag::Yes => "YES",
            VerdictTag::No => "NO",
            VerdictTag::UndecidedBoundary => "UNDECIDED_BOUNDARY",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitSetKind {
    #[serde(rename = "EMPTY")]
    Empty,
    #[serde(rename = "TORUS")]
    Torus,
}

/// Everything a verdict relied on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub limit_set: LimitSetKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthCertificate>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub y_norm_upper: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_phases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<GapResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionCertificate>,
    /// Least `k` with `s lambda^k < eta`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_steps: Option<u64>,
}

impl Certificates {
    fn new(kind: LimitSetKind) -> Self {
        Certificates {
            limit_set: kind,
            growth: None,
            y_norm_upper: None,
            period: None,
            free_phases: None,
            gap: None,
            contraction: None,
            envelope_steps: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
    /// Every `k <= bound` was checked exactly (NO only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<DistanceBound>,
    pub certificates: Certificates,
}

impl Verdict {
    pub fn tag(&self) -> VerdictTag {
        self.verdict
    }
}

mod opt_rational {
    use crate::arith::rational::fmt_rational;
    use crate::arith::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }
}

fn pow_rat(r: &Rational, k: u64) -> Rational {
    num_traits::pow::Pow::pow(r, num_bigint::BigUint::from(k))
}

/// Least `k >= lo` with `p(k)`, for `p` false then true from some point on.
fn least_true(lo: u64, p: impl Fn(u64) -> bool) -> u64 {
    if p(lo) {
        return lo;
    }
    let mut step = 1u64;
    let mut bad = lo;
    let mut good = loop {
        let k = lo.saturating_add(step);
        if p(k) {
            break k;
        }
        bad = k;
        step = step.saturating_mul(2);
    };
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if p(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

fn check_instance(a: &RationalMatrix, x: &[Rational], y: &[Rational], delta: &Rational) -> Result<()> {
    use crate::arith::matrix::DimensionError;
    if !a.is_square() {
        return Err(DimensionError(format!("matrix is {}x{}", a.rows(), a.cols())).into());
    }
    if x.len() != a.rows() || y.len() != a.rows() {
        return Err(DimensionError(format!(
            "matrix is {n}x{n} but x has {} and y has {} entries",
            x.len(),
            y.len(),
            n = a.rows()
        ))
        .into());
    }
    if !delta.is_positive() {
        return Err(OrbitError::NonPositiveRadius(delta.clone()));
    }
    Ok(())
}

/// `||A^k x - y|| < delta`, exactly.
pub fn member_check(a: &RationalMatrix, x: &[Rational], y: &[Rational], delta: &Rational, k: u64, norm: Norm) -> bool {
    let mut v = x.to_vec();
    for _ in 0..k {
        v = a.mul_vec(&v).expect("square matrix");
    }
    norm.within(&v, y, delta)
}

/// `A^k x` as integer numerators over a common denominator, never reduced:
/// each step is a product by small integers instead of a gcd.
struct ExactOrbit {
    n: usize,
    m: Vec<BigInt>,
    d: BigInt,
    num: Vec<BigInt>,
    den: BigInt,
}

fn common_denominator<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

fn scaled(v: &[Rational], by: &BigInt) -> Vec<BigInt> {
    v.iter().map(|q| (q * Rational::from_integer(by.clone())).to_integer()).collect()
}

impl ExactOrbit {
    fn new(a: &RationalMatrix, x: &[Rational]) -> Self {
        let rows = a.to_rows();
        let d = common_denominator(rows.iter().flatten());
        let m = rows.iter().flat_map(|r| scaled(r, &d)).collect();
        let den = common_denominator(x.iter());
        ExactOrbit { n: a.rows(), m, d, num: scaled(x, &den), den }
    }

    fn step(&mut self) {
        let n = self.n;
        self.num = (0..n)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..n {
                    let a = &self.m[i * n + j];
                    if !a.is_zero() {
                        s += a * &self.num[j];
                    }
                }
                s
            })
            .collect();
        self.den *= &self.d;
    }
}

/// `||v - y|| < delta` with `v = num / den` and the right side pre-scaled:
/// `y = ys / yd`, `delta = dn / dd`.
struct Target {
    ys: Vec<BigInt>,
    yd: BigInt,
    dn: BigInt,
    dd: BigInt,
    norm: Norm,
}

impl Target {
    fn new(y: &[Rational], delta: &Rational, norm: Norm) -> Self {
        let yd = common_denominator(y.iter());
        Target { ys: scaled(y, &yd), yd, dn: delta.numer().clone(), dd: delta.denom().clone(), norm }
    }

    fn contains(&self, o: &ExactOrbit) -> bool {
        if self.clearly_outside(o) {
            return false;
        }
        // ||yd num - den ys|| dd < dn den yd
        let diff = o.num.iter().zip(&self.ys).map(|(v, y)| &self.yd * v - &o.den * y);
        let rhs = &self.dn * &o.den * &self.yd;
        match self.norm {
            Norm::Euclidean => {
                let s: BigInt = diff.map(|t| &t * &t).sum();
                s * &self.dd * &self.dd < &rhs * &rhs
            }
            Norm::Max => diff.map(|t| t.abs() * &self.dd).all(|t| t < rhs),
        }
    }
}

/// `num / den` to a relative `2^-50`; infinite above `2^900`, zero below
/// `2^-900`.
fn approx_ratio(num: &BigInt, den: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    if num.is_zero() {
        return 0.0;
    }
    let sa = num.bits().saturating_sub(60);
    let sb = den.bits().saturating_sub(60);
    let a = (num >> sa).to_f64().expect("61 bits");
    let b = (den >> sb).to_f64().expect("61 bits");
    let e = sa as i64 - sb as i64;
    if e > 900 {
        return a.signum() * f64::INFINITY;
    }
    if e < -900 {
        return 0.0;
    }
    a / b * 2f64.powi(e as i32)
}

impl Target {
    /// A float screen: the computed distance exceeds `delta` by far more than
    /// its rounding error, so the exact test would fail.
    fn clearly_outside(&self, o: &ExactOrbit) -> bool {
        let yd = &self.yd;
        let delta = approx_ratio(&self.dn, &self.dd);
        let mut dist_sq = 0.0f64;
        let mut dist_max = 0.0f64;
        let mut scale = delta;
        for (v, y) in o.num.iter().zip(&self.ys) {
            let v = approx_ratio(v, &o.den);
            let y = approx_ratio(y, yd);
            if v.is_infinite() {
                return y.abs() + delta < 1e300;
            }
            let t = (v - y).abs();
            dist_sq += t * t;
            dist_max = dist_max.max(t);
            scale += v.abs() + y.abs();
        }
        let dist = match self.norm {
            Norm::Euclidean => dist_sq.sqrt(),
            Norm::Max => dist_max,
        };
        dist.is_finite() && dist > delta + 1e-9 * scale + 1e-12
    }
}

/// First `k` in `0..=last` with `||A^k x - y|| < delta`.
fn sweep(a: &RationalMatrix, x: &[Rational], y: &[Rational], delta: &Rational, last: u64, norm: Norm) -> Option<u64> {
    let target = Target::new(y, delta, norm);
    let mut o = ExactOrbit::new(a, x);
    for k in 0..=last {
        if target.contains(&o) {
            return Some(k);
        }
        if k < last {
            o.step();
        }
    }
    None
}

fn post_checked(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    norm: Norm,
    k: u64,
    certificates: Certificates,
) -> Verdict {
    let v = a.pow(k).mul_vec(x).expect("square matrix");
    assert!(norm.within(&v, y, delta), "witness {k} failed its exact re-check");
    Verdict { verdict: VerdictTag::Yes, witness: Some(k), bound: None, boundary: None, certificates }
}

fn sweep_verdict(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    bound: u64,
    opts: &DecideOptions,
    certificates: Certificates,
) -> Result<Verdict> {
    if bound > opts.sweep_cap {
        return Err(OrbitError::ResourceCap {
            cap: "sweep-cap",
            limit: opts.sweep_cap,
            context: format!("search bound {bound}"),
        });
    }
    Ok(match sweep(a, x, y, delta, bound, opts.norm) {
        Some(k) => post_checked(a, x, y, delta, opts.norm, k, certificates),
        None => Verdict { verdict: VerdictTag::No, witness: None, bound: Some(bound), boundary: None, certificates },
    })
}

/// Empty limit set: `||A^k x|| > c k` past `N` caps the search.
pub fn decide_empty(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    cert: &GrowthCertificate,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let y_up = opts.norm.upper(y, 16);
    let bound = ceil_u64(&((delta + &y_up) / &cert.c)).max(cert.n);
    let mut c = Certificates::new(LimitSetKind::Empty);
    c.growth = Some(cert.clone());
    c.y_norm_upper = Some(y_up);
    sweep_verdict(a, x, y, delta, bound, opts, c)
}

/// Envelope of the contracting blocks around `S_L`.
pub fn contraction_certificate(analysis: &LimitSetAnalysis) -> Result<ContractionCertificate> {
    if analysis.descriptor.is_empty() {
        return Err(OrbitError::EmptyLimitSet);
    }
    let f = &analysis.form;
    let contracting: Vec<usize> = analysis
        .classification
        .iter()
        .filter(|c| c.case == BlockCase::ToZero)
        .map(|c| c.block)
        .collect();
    let s = p_frobenius(f);
    if contracting.is_empty() {
        return Ok(ContractionCertificate { s, lambda: crate::arith::rational::rat(1, 2), rho: Rational::zero(), k: 0, zero: true });
    }
    let mut rho = Rational::zero();
    let mut mass = Rational::zero();
    let mut size = 1usize;
    for &i in &contracting {
        let b = &f.blocks[i];
        let mut prec = 16;
        let r = loop {
            let r = b.eigenvalue.abs_upper(prec);
            if r < Rational::one() {
                break r;
            }
            prec *= 2;
        };
        if r > rho {
            rho = r;
        }
        size = size.max(b.size);
        for v in &analysis.z[b.offset..b.offset + b.size] {
            let u = v.ball(24).abs_upper(24);
            mass += &u * &u;
        }
    }
    // a dyadic bound keeps the powers below cheap
    let mut bits = 16;
    let rho = loop {
        let r = if rho.is_zero() { crate::arith::rational::rat(1, 2) } else { ceil_dyadic(&rho, bits) };
        if r < Rational::one() {
            break r;
        }
        bits *= 2;
    };
    let mass = sqrt_upper(&mass, 24);
    let lambda = (&rho + int(1)) / int(2);
    let q = &lambda / &rho;
    // past k0 the polynomial factor grows slower than q^k
    let t = size as u64;
    let k0 = if t == 1 {
        0
    } else {
        let need = (int(1) + &q * int(t as i64 - 2)) / (&q - int(1));
        ceil_u64(&need).max(t - 1)
    };
    let rho_inv = rho.recip();
    let poly = |k: u64| -> Rational {
        let mut sum = Rational::zero();
        let mut binom = Rational::one();
        let mut pw = Rational::one();
        for i in 0..t.min(k + 1) {
            sum += &binom * &pw;
            binom = binom * int((k - i) as i64) / int(i as i64 + 1);
            pw *= &rho_inv;
        }
        sum
    };
    let k = least_true(k0, |k| &mass * poly(k) <= pow_rat(&q, k));
    Ok(ContractionCertificate { s, lambda, rho, k, zero: false })
}

/// Nonempty limit set with a decided gap.
pub fn decide_nonempty(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    analysis: &LimitSetAnalysis,
    gap: &GapResult,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let d = analysis.descriptor.torus()?;
    let mut c = Certificates::new(LimitSetKind::Torus);
    c.period = Some(d.period);
    c.free_phases = Some(d.free_phase_count);
    c.gap = Some(gap.clone());
    match gap.outcome {
        GapOutcome::Exhausted => Err(OrbitError::Precondition("gap search exhausted".into())),
        GapOutcome::RadiusExceedsD => match sweep(a, x, y, delta, opts.witness_cap, opts.norm) {
            Some(k) => Ok(post_checked(a, x, y, delta, opts.norm, k, c)),
            None => Err(OrbitError::ResourceCap {
                cap: "witness-cap",
                limit: opts.witness_cap,
                context: "no witness among the enumerated orbit points".into(),
            }),
        },
        GapOutcome::RadiusBelowD => {
            let cert = contraction_certificate(analysis)?;
            let steps = cert.steps_below(&gap.eta);
            c.contraction = Some(cert);
            c.envelope_steps = Some(steps);
            sweep_verdict(a, x, y, delta, steps, opts, c)
        }
    }
}

pub fn decide(
    a: &RationalMatrix,
    x: &[Rational],
    y: &[Rational],
    delta: &Rational,
    opts: &DecideOptions,
) -> Result<Verdict> {
    check_instance(a, x, y, delta)?;
    let analysis = analyze(a, x, opts.norm)?;
    match &analysis.descriptor {
        LimitSetDescriptor::Empty(cert) => decide_empty(a, x, y, delta, cert, opts),
        LimitSetDescriptor::Torus(d) => {
            let gap = Distance::new(d, y, opts.norm)
                .with_options(NetOptions { net_cap: opts.net_cap })
                .bound_gap(delta, opts.j_max)?;
            if gap.outcome == GapOutcome::Exhausted {
                let mut c = Certificates::new(LimitSetKind::Torus);
                c.period = Some(d.period);
                c.free_phases = Some(d.free_phase_count);
                c.gap = Some(gap.clone());
                // the boundary itself is open, but a hit in a checked prefix is not
                if let Some(k) = sweep(a, x, y, delta, opts.witness_cap, opts.norm) {
                    return Ok(post_checked(a, x, y, delta, opts.norm, k, c));
                }
                return Ok(Verdict {
                    verdict: VerdictTag::UndecidedBoundary,
                    witness: None,
                    bound: None,
                    boundary: Some(gap.bound),
                    certificates: c,
                });
            }
            decide_nonempty(a, x, y, delta, &analysis, &gap, opts)
        }
    }
}
