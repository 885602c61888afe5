//! Distance from `y` to the limit set, bracketed to any dyadic accuracy.
//!
//! On family `k` the distance is `d_k = min over the phase torus of f_k`,
//! `f_k(mu) = || y - fixed - sum_j 2 Re(mu_j F_j) ||`. Each circle is swept by
//! the rational parametrisation `mu(t) = s (1 + it) / (1 - it)`, `t in [-1, 1]`,
//! `s = +-1`, on which `|mu'| <= 2` and `|mu''| <= 4`. The uniform net on `t`
//! is evaluated lazily: cells of the net are split best-first and a cell is
//! dropped once a Taylor lower bound over it cannot beat the best point found.
//!
//! All evaluation is in exact rationals on rational approximations of the
//! algebraic data; the approximation error enters as an additive slack.

use crate::arith::ball::Ball;
use crate::arith::complex::{CRational, ComplexBox};
use crate::arith::rational::{bits_for, int, pow2, sqrt_lower, sqrt_upper};
use crate::arith::Rational;
use crate::error::{OrbitError, Result};
use crate::limitset::{torus_family, TorusDescriptor};
use crate::norm::Norm;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// `lower <= D(y, S_L) <= upper` at level `level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceBound {
    #[serde(with = "crate::report::rational")]
    pub lower: Rational,
    #[serde(with = "crate::report::rational")]
    pub upper: Rational,
    pub level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapOutcome {
    #[serde(rename = "RADIUS_EXCEEDS_D")]
    RadiusExceedsD,
    #[serde(rename = "RADIUS_BELOW_D")]
    RadiusBelowD,
    #[serde(rename = "EXHAUSTED")]
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapResult {
    pub outcome: GapOutcome,
    /// Positive margin for the first two outcomes, zero when exhausted.
    #[serde(with = "crate::report::rational")]
    pub eta: Rational,
    pub level: u32,
    pub bound: DistanceBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetOptions {
    /// Most net points evaluated by one minimisation.
    pub net_cap: u64,
}

impl Default for NetOptions {
    fn default() -> Self {
        NetOptions { net_cap: 1 << 20 }
    }
}

/// Rational approximation of family `k` with its error slack.
#[derive(Clone, Debug)]
struct FamilyData {
    /// `y - fixed`, real.
    base: Vec<Rational>,
    /// `free[j][i]`.
    free: Vec<Vec<CRational>>,
    /// Upper bounds on `|free[j][i]|`.
    free_abs: Vec<Vec<Rational>>,
    /// `|f_true - f_approx| <= slack` everywhere on the torus.
    slack: Rational,
}

/// Distance computations for one descriptor, target and norm.
pub struct Distance<'a> {
    pub d: &'a TorusDescriptor,
    pub y: &'a [Rational],
    pub norm: Norm,
    pub options: NetOptions,
}

impl<'a> Distance<'a> {
    pub fn new(d: &'a TorusDescriptor, y: &'a [Rational], norm: Norm) -> Self {
        Distance { d, y, norm, options: NetOptions::default() }
    }

    pub fn with_options(mut self, options: NetOptions) -> Self {
        self.options = options;
        self
    }

    fn data(&self, k: u64, prec: u32) -> Result<FamilyData> {
        let fam = torus_family(self.d, k)?;
        let n = self.d.n;
        let fixed: Vec<Ball> = fam.fixed.iter().map(|v| v.ball(prec)).collect();
        let free: Vec<Vec<Ball>> = fam.free.iter().map(|f| f.iter().map(|v| v.ball(prec)).collect()).collect();
        let mut slack_i = vec![Rational::zero(); n];
        for i in 0..n {
            slack_i[i] = fixed[i].rad.clone();
            for f in &free {
                slack_i[i] += int(2) * &f[i].rad;
            }
        }
        let slack = self.norm.upper(&slack_i, prec + 2);
        let bits = prec + 2;
        Ok(FamilyData {
            base: (0..n).map(|i| &self.y[i] - &fixed[i].mid.re).collect(),
            free_abs: free.iter().map(|f| f.iter().map(|b| b.mid.abs_upper(bits)).collect()).collect(),
            free: free.into_iter().map(|f| f.into_iter().map(|b| b.mid).collect()).collect(),
            slack,
        })
    }

    /// Interval containing `f_k(phases)`, of width at most `precision` when
    /// the phase boxes are narrow enough.
    pub fn eval_f(&self, k: u64, phases: &[ComplexBox], precision: &Rational) -> Result<(Rational, Rational)> {
        let fam = torus_family(self.d, k)?;
        if phases.len() != fam.phase_count() {
            return Err(OrbitError::Precondition(format!(
                "{} phases given, the family has {}",
                phases.len(),
                fam.phase_count()
            )));
        }
        let mut prec = bits_for(precision).max(8) + 8;
        loop {
            let mu: Vec<Ball> = phases.iter().map(|b| Ball::from_box(b, prec + 4)).collect();
            let mut lo = Vec::with_capacity(self.d.n);
            let mut hi = Vec::with_capacity(self.d.n);
            for i in 0..self.d.n {
                let mut e = Ball::real(self.y[i].clone()).sub(&fam.fixed[i].ball(prec + 4));
                for (j, f) in fam.free.iter().enumerate() {
                    let t = mu[j].mul(&f[i].ball(prec + 4), prec + 4);
                    e = e.sub(&t.scale(&int(2)));
                }
                let (a, b) = e.re();
                let (l, u) = if a.is_positive() {
                    (a, b)
                } else if b.is_negative() {
                    (-b, -a)
                } else {
                    (Rational::zero(), if -&a > b { -a } else { b })
                };
                lo.push(l);
                hi.push(u);
            }
            let (l, u) = match self.norm {
                Norm::Euclidean => (
                    sqrt_lower(&lo.iter().map(|v| v * v).sum(), prec),
                    sqrt_upper(&hi.iter().map(|v| v * v).sum(), prec),
                ),
                Norm::Max => (lo.into_iter().max().unwrap(), hi.into_iter().max().unwrap()),
            };
            if &u - &l <= *precision || prec > 4096 {
                return Ok((l, u));
            }
            prec *= 2;
        }
    }

    /// `L` with `|f_k(mu) - f_k(nu)| <= L max_j |mu_j - nu_j|` for every `k`.
    pub fn lipschitz_bound(&self) -> Rational {
        lipschitz_bound(self.d)
    }

    /// Upper bound `u` on `d_k` from the uniform net of covering radius
    /// `spacing`, within `precision` of the net minimum.
    pub fn net_min(&self, k: u64, spacing: &Rational, precision: &Rational) -> Result<Rational> {
        Ok(self.minimise(k, spacing, precision)?.0)
    }

    /// `(upper, lower)` bounds on `d_k`.
    fn minimise(&self, k: u64, spacing: &Rational, precision: &Rational) -> Result<(Rational, Rational)> {
        let h = self.d.free_phase_count;
        let n = self.d.n as u64;
        let want = precision / int(4);
        let prec = bits_for(&want) + 2 + bits_for_int(n * (1 + 2 * h as u64));
        let data = self.data(k, prec)?;
        let m = bits_for(spacing).max(1);
        if m >= 126 {
            return Err(OrbitError::Precondition(format!("net spacing 2^-{m} is too fine")));
        }
        let search = NetSearch { data: &data, norm: self.norm, m, bits: prec + 8 };
        let (best, low) = search.run(&(precision / int(2)), self.options.net_cap)?;
        Ok((best + &data.slack, low - &data.slack))
    }

    /// Upper series at level `j`; one call per level, non-increasing thanks to
    /// the running minimum carried in `prev`.
    fn level(&self, j: u32, prev: Option<&Rational>) -> Result<Rational> {
        let l = self.lipschitz_bound();
        let quarter = pow2(-(j as i64 + 2));
        let spacing = if l.is_zero() { int(1) } else { pow2(-(j as i64 + 3)) / &l };
        let precision = pow2(-(j as i64 + 3));
        let mut best: Option<Rational> = None;
        for k in 0..self.d.period {
            let u = self.net_min(k, &spacing, &precision)?;
            if best.as_ref().is_none_or(|b| &u < b) {
                best = Some(u);
            }
        }
        let mut x = best.unwrap() + quarter;
        if let Some(p) = prev {
            if p < &x {
                x = p.clone();
            }
        }
        Ok(x)
    }

    /// `x_j` with `0 < x_j - D(y, S_L) < 2^-j`, as a bound `[x_j - 2^-j, x_j]`.
    pub fn distance_upper_series(&self, j: u32) -> Result<DistanceBound> {
        let mut x: Option<Rational> = None;
        for level in 1..=j {
            x = Some(self.level(level, x.as_ref())?);
        }
        let x = x.ok_or_else(|| OrbitError::Precondition("level must be at least 1".into()))?;
        Ok(DistanceBound { lower: &x - pow2(-(j as i64)), upper: x, level: j })
    }

    /// Which side of `D(y, S_L)` the radius lies on.
    pub fn bound_gap(&self, delta: &Rational, j_max: u32) -> Result<GapResult> {
        if !delta.is_positive() {
            return Err(OrbitError::NonPositiveRadius(delta.clone()));
        }
        if j_max == 0 {
            return Err(OrbitError::Precondition("j_max must be at least 1".into()));
        }
        let mut x: Option<Rational> = None;
        for j in 1..=j_max {
            let xj = self.level(j, x.as_ref())?;
            let two_j = pow2(-(j as i64));
            let bound = DistanceBound { lower: &xj - &two_j, upper: xj.clone(), level: j };
            let a = &xj - delta;
            if a.is_negative() {
                return Ok(GapResult { outcome: GapOutcome::RadiusExceedsD, eta: -a, level: j, bound });
            }
            let b = a - &two_j;
            if b.is_positive() {
                return Ok(GapResult { outcome: GapOutcome::RadiusBelowD, eta: b, level: j, bound });
            }
            x = Some(xj);
        }
        let xj = x.unwrap();
        let bound = DistanceBound { lower: &xj - pow2(-(j_max as i64)), upper: xj, level: j_max };
        Ok(GapResult { outcome: GapOutcome::Exhausted, eta: Rational::zero(), level: j_max, bound })
    }

    /// Certified lower bound on `D(y, S_L)` within `precision` of the truth.
    pub fn lower_bound(&self, precision: &Rational) -> Result<Rational> {
        let mut low: Option<Rational> = None;
        for k in 0..self.d.period {
            let (_, l) = self.minimise(k, &int(1), precision)?;
            if low.as_ref().is_none_or(|b| &l < b) {
                low = Some(l);
            }
        }
        Ok(low.unwrap())
    }
}

/// `L = 2 sum_j sum_(m in class j) ||w_m||`, valid for every family.
pub fn lipschitz_bound(d: &TorusDescriptor) -> Rational {
    let mut l = Rational::zero();
    for c in d.classes.iter().filter(|c| !c.rigid) {
        for &m in &c.phase_members {
            let s: Rational = d.modes[m]
                .at(0)
                .iter()
                .map(|v| {
                    let u = v.ball(24).abs_upper(24);
                    &u * &u
                })
                .sum();
            l += int(2) * sqrt_upper(&s, 24);
        }
    }
    l
}

fn bits_for_int(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// A box of net indices: per phase a sign and an inclusive index range on the
/// grid `t_i = -1 + i 2^-m`, `0 <= i <= 2^(m+1)`, with `m < 126`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cell {
    sign: Vec<bool>,
    lo: Vec<u128>,
    hi: Vec<u128>,
}

struct NetSearch<'a> {
    data: &'a FamilyData,
    norm: Norm,
    m: u32,
    bits: u32,
}

struct Eval {
    upper: Rational,
    lower: Rational,
}

impl NetSearch<'_> {
    fn t_of(&self, i: u128) -> Rational {
        let one = num_bigint::BigInt::from(1u128 << self.m);
        Rational::new(num_bigint::BigInt::from(i) - &one, one)
    }

    /// Exact value, and a lower bound over the cell around the given center.
    fn eval(&self, center: &[u128], sign: &[bool], radius: &[Rational]) -> Eval {
        let d = self.data;
        let h = center.len();
        let mut mu = Vec::with_capacity(h);
        let mut dmu = Vec::with_capacity(h);
        for j in 0..h {
            let t = self.t_of(center[j]);
            let t2 = &t * &t;
            let den = int(1) + &t2;
            let s = if sign[j] { int(1) } else { int(-1) };
            mu.push(CRational::new(&s * (int(1) - &t2) / &den, &s * int(2) * &t / &den));
            let den2 = &den * &den;
            dmu.push(CRational::new(&s * int(-4) * &t / &den2, &s * int(2) * (int(1) - &t2) / &den2));
        }
        let n = d.base.len();
        let mut e = Vec::with_capacity(n);
        let mut grad = vec![vec![Rational::zero(); h]; n];
        for i in 0..n {
            let mut v = d.base[i].clone();
            for j in 0..h {
                let f = &d.free[j][i];
                v -= int(2) * (&mu[j].re * &f.re - &mu[j].im * &f.im);
                grad[i][j] = int(-2) * (&dmu[j].re * &f.re - &dmu[j].im * &f.im);
            }
            e.push(v);
        }
        // second-derivative bounds per component and phase
        let curv = |i: usize, j: usize| int(8) * &d.free_abs[j][i];
        match self.norm {
            Norm::Max => {
                let upper = e.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
                let mut lower = Rational::zero();
                for i in 0..n {
                    let mut lb = e[i].abs();
                    for j in 0..h {
                        lb -= grad[i][j].abs() * &radius[j] + &curv(i, j) * &radius[j] * &radius[j] / int(2);
                    }
                    if lb > lower {
                        lower = lb;
                    }
                }
                Eval { upper, lower }
            }
            Norm::Euclidean => {
                let fsq: Rational = e.iter().map(|v| v * v).sum();
                let upper = sqrt_upper(&fsq, self.bits);
                // componentwise bound
                let mut comp = Rational::zero();
                for i in 0..n {
                    let mut lb = e[i].abs();
                    for j in 0..h {
                        lb -= grad[i][j].abs() * &radius[j] + &curv(i, j) * &radius[j] * &radius[j] / int(2);
                    }
                    if lb.is_positive() {
                        comp += &lb * &lb;
                    }
                }
                // second-order bound on the square
                let mut so = fsq.clone();
                for j in 0..h {
                    let g: Rational = (0..n).map(|i| int(2) * &e[i] * &grad[i][j]).sum();
                    so -= g.abs() * &radius[j];
                }
                let emax: Vec<Rational> = (0..n)
                    .map(|i| d.base[i].abs() + (0..h).map(|j| int(2) * &d.free_abs[j][i]).sum::<Rational>())
                    .collect();
                for j in 0..h {
                    for l in 0..h {
                        let mut hb = Rational::zero();
                        for i in 0..n {
                            hb += int(16) * &d.free_abs[j][i] * &d.free_abs[l][i];
                            if j == l {
                                hb += &emax[i] * curv(i, j);
                            }
                        }
                        so -= hb * &radius[j] * &radius[l];
                    }
                }
                let best = if so > comp { so } else { comp };
                let lower = if best.is_positive() { sqrt_lower(&best, self.bits) } else { Rational::zero() };
                Eval { upper, lower }
            }
        }
    }

    fn eval_cell(&self, c: &Cell) -> (Eval, Vec<u128>) {
        let h = c.lo.len();
        let center: Vec<u128> = (0..h).map(|j| (c.lo[j] + c.hi[j]) / 2).collect();
        let step = pow2(-(self.m as i64));
        let radius: Vec<Rational> = (0..h)
            .map(|j| Rational::from_integer((center[j] - c.lo[j]).max(c.hi[j] - center[j]).into()) * &step)
            .collect();
        (self.eval(&center, &c.sign, &radius), center)
    }

    /// `(best upper, global lower)` on the approximate objective.
    fn run(&self, tol: &Rational, cap: u64) -> Result<(Rational, Rational)> {
        let h = self.data.free.len();
        let top = 1u128 << (self.m + 1);
        let mut heap: BinaryHeap<Reverse<(Rational, Cell)>> = BinaryHeap::new();
        let mut best: Option<Rational> = None;
        let mut evals = 0u64;
        for signs in 0..(1u32 << h) {
            let cell = Cell {
                sign: (0..h).map(|j| signs >> j & 1 == 0).collect(),
                lo: vec![0; h],
                hi: vec![top; h],
            };
            let (ev, _) = self.eval_cell(&cell);
            evals += 1;
            if best.as_ref().is_none_or(|b| &ev.upper < b) {
                best = Some(ev.upper);
            }
            heap.push(Reverse((ev.lower, cell)));
        }
        loop {
            let b = best.clone().unwrap();
            let Some(Reverse((lb, cell))) = heap.pop() else {
                return Ok((b.clone(), b));
            };
            if lb >= &b - tol {
                return Ok((b, lb));
            }
            // split the widest phase range
            let j = (0..h).max_by_key(|&j| cell.hi[j] - cell.lo[j]).unwrap();
            if cell.hi[j] == cell.lo[j] {
                // a single net point: its lower bound is its value
                continue;
            }
            let mid = (cell.lo[j] + cell.hi[j]) / 2;
            let mut left = cell.clone();
            left.hi[j] = mid;
            let mut right = cell;
            right.lo[j] = mid + 1;
            for c in [left, right] {
                let (ev, _) = self.eval_cell(&c);
                evals += 1;
                if evals > cap {
                    return Err(OrbitError::ResourceCap {
                        cap: "net-cap",
                        limit: cap,
                        context: "net minimisation did not converge".into(),
                    });
                }
                if best.as_ref().is_none_or(|b| &ev.upper < b) {
                    best = Some(ev.upper.clone());
                }
                heap.push(Reverse((ev.lower, c)));
            }
        }
    }
}

/// Free functions mirroring the method API.
pub fn eval_f(
    d: &TorusDescriptor,
    y: &[Rational],
    norm: Norm,
    k: u64,
    phases: &[ComplexBox],
    precision: &Rational,
) -> Result<(Rational, Rational)> {
    Distance::new(d, y, norm).eval_f(k, phases, precision)
}

pub fn net_min(d: &TorusDescriptor, y: &[Rational], norm: Norm, k: u64, spacing: &Rational) -> Result<Rational> {
    let prec = pow2(-(bits_for(spacing) as i64 + 2));
    Distance::new(d, y, norm).net_min(k, spacing, &prec)
}

pub fn distance_upper_series(d: &TorusDescriptor, y: &[Rational], norm: Norm, j: u32) -> Result<DistanceBound> {
    Distance::new(d, y, norm).distance_upper_series(j)
}

pub fn bound_gap(d: &TorusDescriptor, y: &[Rational], norm: Norm, delta: &Rational, j_max: u32) -> Result<GapResult> {
    Distance::new(d, y, norm).bound_gap(delta, j_max)
}

impl std::fmt::Display for GapOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GapOutcome::RadiusExceedsD => "RADIUS_EXCEEDS_D",
            GapOutcome::RadiusBelowD => "RADIUS_BELOW_D",
            GapOutcome::Exhausted => "EXHAUSTED",
        })
    }
}
