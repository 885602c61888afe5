//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use num_traits::{Signed, Zero};
use orbit_core::arith::matrix::norm_sq;
use orbit_core::arith::rational::{int, pow2, rat};
use orbit_core::decide::{contraction_certificate, decide, member_check, DecideOptions, VerdictTag};
use orbit_core::distance::{bound_gap, distance_upper_series, GapOutcome};
use orbit_core::limitset::{analyze, limit_set, LimitSetDescriptor};
use orbit_core::norm::Norm;
use orbit_core::oracle::{brute_force_decide, OracleAnswer};
use orbit_core::spectral::jordan_decompose;
use orbit_core::{AlgebraicNumber, Polynomial, Rational, RationalMatrix};
use rand::Rng;
use std::time::Instant;

const SUITE_SEED: u64 = 20_240_601;
const SUITE_SIZE: usize = 200;
const ORACLE_FLOOR: u64 = 1_000_000;
const AGREEMENT_HORIZON: u64 = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn v(xs: &[(i64, i64)]) -> Vec<Rational> {
    xs.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn rotation() -> RationalMatrix {
    RationalMatrix::from_ratios(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]])
}

fn quarter() -> RationalMatrix {
    RationalMatrix::from_ints(&[&[0, -1], &[1, 0]])
}

fn diag_half_third() -> RationalMatrix {
    RationalMatrix::from_ratios(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 3)]])
}

type Verdicts = Vec<Result<orbit_core::decide::Verdict, String>>;

fn soundness(suite: &[common::Case], verdicts: &Verdicts) -> Outcome {
    let (mut yes, mut no, mut undecided, mut errors) = (0, 0, 0, 0);
    let mut failures = Vec::new();
    let mut largest = 0u64;
    for (i, (c, r)) in suite.iter().zip(verdicts).enumerate() {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                errors += 1;
                failures.push(format!("#{i}: engine error {e}"));
                continue;
            }
        };
        match r.verdict {
            VerdictTag::Yes => {
                yes += 1;
                let k = r.witness.unwrap();
                if !member_check(&c.a, &c.x, &c.y, &c.delta, k, Norm::Euclidean) {
                    failures.push(format!("#{i}: witness {k} fails the exact check"));
                }
            }
            VerdictTag::No => {
                no += 1;
                let horizon = r.bound.unwrap().saturating_mul(10).max(ORACLE_FLOOR);
                largest = largest.max(horizon);
                match brute_force_decide(&c.a, &c.x, &c.y, &c.delta, horizon, Norm::Euclidean) {
                    Ok(OracleAnswer::Unknown) => {}
                    Ok(OracleAnswer::Yes(k)) => failures.push(format!("#{i}: NO, but the oracle hits at k = {k}")),
                    Err(e) => failures.push(format!("#{i}: oracle stopped before {horizon}: {e}")),
                }
            }
            VerdictTag::UndecidedBoundary => undecided += 1,
        }
    }
    let detail = format!(
        "{} instances: {yes} YES, {no} NO, {undecided} UNDECIDED, {errors} errors; NO checked by the oracle up to max(10 B, 10^6) (largest {largest}); tolerance exact",
        suite.len()
    );
    if failures.is_empty() {
        outcome(suite.len() >= 200, detail)
    } else {
        outcome(false, format!("{detail}; {}", failures.join("; ")))
    }
}

fn agreement(suite: &[common::Case], verdicts: &Verdicts) -> Outcome {
    let mut hits = 0;
    let mut bad = Vec::new();
    for (i, (c, r)) in suite.iter().zip(verdicts).enumerate() {
        match brute_force_decide(&c.a, &c.x, &c.y, &c.delta, AGREEMENT_HORIZON, Norm::Euclidean) {
            Ok(OracleAnswer::Yes(k)) => {
                hits += 1;
                if !matches!(r, Ok(v) if v.verdict == VerdictTag::Yes) {
                    bad.push(format!("#{i}: oracle hit at {k}, engine said {:?}", r.as_ref().map(|v| v.verdict)));
                }
            }
            Ok(OracleAnswer::Unknown) => {}
            Err(e) => bad.push(format!("#{i}: oracle error {e}")),
        }
    }
    let detail = format!("{hits} oracle hits within k_max = 10^4, {} disagreements", bad.len());
    if bad.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}: {}", bad.join("; ")))
    }
}

fn jordan_exactness() -> Outcome {
    let mut r = common::rng(SUITE_SEED + 3);
    let mut bad = Vec::new();
    let start = Instant::now();
    let mut slowest = 0f64;
    for i in 0..100 {
        let n = 1 + i % 4;
        let a = common::matrix(&mut r, n, 10, 10);
        let t = Instant::now();
        let f = match jordan_decompose(&a) {
            Ok(f) => f,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if let Err(e) = f.verify(&a) {
            bad.push(format!("#{i}: {e}"));
        }
        if f.reassemble() != a {
            bad.push(format!("#{i}: P J P^-1 != A"));
        }
        slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    let detail = format!(
        "100 matrices, n <= 4: A P = P J and P P^-1 = I exactly; slowest {slowest:.3}s, total {:.1}s",
        start.elapsed().as_secs_f64()
    );
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn emptiness() -> Outcome {
    let empty: Vec<(&str, RationalMatrix, Vec<Rational>)> = vec![
        ("2I", RationalMatrix::from_ints(&[&[2, 0], &[0, 2]]), v(&[(1, 1), (0, 1)])),
        ("J2(1), x = (0,1)", RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]), v(&[(0, 1), (1, 1)])),
        ("companion x^2-x-1", RationalMatrix::from_ints(&[&[0, 1], &[1, 1]]), v(&[(1, 1), (0, 1)])),
        ("companion x^3-2", RationalMatrix::from_ints(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 0]]), v(&[(1, 1), (0, 1), (0, 1)])),
        ("companion x^2+x+3", RationalMatrix::from_ints(&[&[0, -3], &[1, -1]]), v(&[(1, 1), (1, 1)])),
        ("companion x^2-2x+2", RationalMatrix::from_ints(&[&[0, -2], &[1, 2]]), v(&[(0, 1), (1, 2)])),
    ];
    let torus: Vec<(&str, RationalMatrix, Vec<Rational>)> = vec![
        ("rotation (3+4i)/5", rotation(), v(&[(1, 1), (0, 1)])),
        ("rotation by 90", quarter(), v(&[(1, 1), (0, 1)])),
        ("contraction diag(1/2,1/3)", diag_half_third(), v(&[(1, 1), (1, 1)])),
        ("J2(1), x = (1,0)", RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]), v(&[(1, 1), (0, 1)])),
    ];
    let mut bad = Vec::new();
    for (name, a, x) in &empty {
        match limit_set(a, x) {
            Ok(LimitSetDescriptor::Empty(cert)) => {
                let mut p = x.clone();
                for m in 1..=cert.n + 100 {
                    p = a.mul_vec(&p).unwrap();
                    if m > cert.n {
                        let cm = &cert.c * int(m as i64);
                        if norm_sq(&p) <= &cm * &cm {
                            bad.push(format!("{name}: ||A^{m} x|| <= c m"));
                            break;
                        }
                    }
                }
            }
            Ok(_) => bad.push(format!("{name}: not empty")),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    for (name, a, x) in &torus {
        if !matches!(limit_set(a, x), Ok(LimitSetDescriptor::Torus(_))) {
            bad.push(format!("{name}: not a torus"));
        }
    }
    let detail = format!(
        "{} empty families with ||A^m x|| > c m exactly on (N, N+100], {} torus families",
        empty.len(),
        torus.len()
    );
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn torus_of(a: &RationalMatrix, x: &[Rational]) -> orbit_core::limitset::TorusDescriptor {
    match limit_set(a, x).unwrap() {
        LimitSetDescriptor::Torus(t) => t,
        _ => panic!("expected a torus"),
    }
}

fn convergence() -> Outcome {
    let mut bad = Vec::new();
    let start = Instant::now();
    let cases = [
        ("rotation, y = (2,0)", torus_of(&rotation(), &v(&[(1, 1), (0, 1)])), v(&[(2, 1), (0, 1)]), int(1)),
        ("rotation by 90, y = (9/10,0)", torus_of(&quarter(), &v(&[(1, 1), (0, 1)])), v(&[(9, 10), (0, 1)]), rat(1, 10)),
    ];
    let mut slowest = 0f64;
    for (name, t, y, d) in &cases {
        for j in 1..=20u32 {
            let s = Instant::now();
            match distance_upper_series(t, y, Norm::Euclidean, j) {
                Ok(b) => {
                    let gap = &b.upper - d;
                    if !(gap.is_positive() && gap <= pow2(-(j as i64))) {
                        bad.push(format!("{name}: x_{j} - D = {gap}"));
                    }
                }
                Err(e) => bad.push(format!("{name}, level {j}: {e}")),
            }
            slowest = slowest.max(s.elapsed().as_secs_f64());
        }
    }
    let detail = format!(
        "x_j - D in (0, 2^-j] for j = 1..20 on both instances; slowest level {slowest:.3}s, total {:.1}s",
        start.elapsed().as_secs_f64()
    );
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn trichotomy() -> Outcome {
    let t = torus_of(&rotation(), &v(&[(1, 1), (0, 1)]));
    let y = v(&[(2, 1), (0, 1)]);
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (delta, want) in [
        (rat(3, 2), GapOutcome::RadiusExceedsD),
        (rat(1, 2), GapOutcome::RadiusBelowD),
        (int(1), GapOutcome::Exhausted),
    ] {
        match bound_gap(&t, &y, Norm::Euclidean, &delta, 64) {
            Ok(g) => {
                seen.push(format!("{delta} -> {} (eta {}, level {})", g.outcome, g.eta, g.level));
                let margin = (&delta - int(1)).abs();
                let eta_ok = match want {
                    GapOutcome::Exhausted => g.eta.is_zero() && g.level == 64,
                    _ => g.eta.is_positive() && g.eta <= margin,
                };
                if g.outcome != want || !eta_ok {
                    bad.push(format!("delta {delta}: {} eta {}", g.outcome, g.eta));
                }
            }
            Err(e) => bad.push(format!("delta {delta}: {e}")),
        }
    }
    let detail = format!("{}; 0 < eta <= |delta - 1|", seen.join(", "));
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn envelope() -> Outcome {
    let a = diag_half_third();
    let x = v(&[(1, 1), (1, 1)]);
    let an = analyze(&a, &x, Norm::Euclidean).unwrap();
    let c = match contraction_certificate(&an) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut p = x.clone();
    let mut first_bad = None;
    for k in 0..=200u64 {
        let e = c.envelope(k);
        if norm_sq(&p) > &e * &e {
            first_bad.get_or_insert(k);
        }
        p = a.mul_vec(&p).unwrap();
    }
    let detail = format!(
        "s = {}, lambda = {}, K = {}; s lambda^k >= ||A^k x|| checked exactly for k = 0..200",
        c.s, c.lambda, c.k
    );
    match first_bad {
        None => outcome(true, detail),
        Some(k) => outcome(false, format!("{detail}; fails at k = {k}")),
    }
}

fn roots_of_unity() -> Outcome {
    let cases: Vec<(&str, Polynomial, Option<u64>)> = vec![
        ("i", Polynomial::from_ints(&[1, 0, 1]), Some(4)),
        ("-1", Polynomial::from_ints(&[1, 1]), Some(2)),
        ("1", Polynomial::from_ints(&[-1, 1]), Some(1)),
        ("(3+4i)/5", Polynomial::from_ints(&[5, -6, 5]), None),
        ("primitive 5th root", Polynomial::from_ints(&[1, 1, 1, 1, 1]), Some(5)),
    ];
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (name, p, want) in &cases {
        for r in AlgebraicNumber::roots_of(p) {
            let got = r.root_of_unity_order();
            if got != *want {
                bad.push(format!("{name}: got {got:?}"));
            }
        }
        seen.push(format!("{name} -> {}", want.map_or("absent".to_string(), |n| n.to_string())));
    }
    let detail = seen.join(", ");
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn scaling(suite: &[common::Case], verdicts: &Verdicts) -> Outcome {
    let mut r = common::rng(SUITE_SEED + 9);
    let mut bad = Vec::new();
    let tag = |x: &Result<orbit_core::decide::Verdict, String>| match x {
        Ok(v) => v.verdict.to_string(),
        Err(_) => "error".to_string(),
    };
    for (i, (c, base)) in suite.iter().zip(verdicts).take(50).enumerate() {
        let f = loop {
            let f = rat(r.gen_range(1..=10), r.gen_range(1..=10));
            if f != int(1) {
                break f;
            }
        };
        let sx: Vec<Rational> = c.x.iter().map(|v| v * &f).collect();
        let sy: Vec<Rational> = c.y.iter().map(|v| v * &f).collect();
        let scaled = decide(&c.a, &sx, &sy, &(&c.delta * &f), &DecideOptions::default()).map_err(|e| e.to_string());
        if tag(&scaled) != tag(base) {
            bad.push(format!("#{i} scaled by {f}: {} vs {}", tag(&scaled), tag(base)));
        }
    }
    let detail = "50 instances scaled by random positive rationals keep their verdict".to_string();
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn worked() -> Outcome {
    let two = RationalMatrix::from_ints(&[&[2, 0], &[0, 2]]);
    let cases: Vec<(&str, RationalMatrix, Vec<Rational>, Vec<Rational>, Rational, VerdictTag, Option<u64>)> = vec![
        ("(2I,(1,0),(4,0),1/2)", two.clone(), v(&[(1, 1), (0, 1)]), v(&[(4, 1), (0, 1)]), rat(1, 2), VerdictTag::Yes, Some(2)),
        ("(2I,(1,0),(5,0),1/2)", two, v(&[(1, 1), (0, 1)]), v(&[(5, 1), (0, 1)]), rat(1, 2), VerdictTag::No, None),
        (
            "(diag(1/2,1/3),(1,1),0,1/10)",
            diag_half_third(),
            v(&[(1, 1), (1, 1)]),
            v(&[(0, 1), (0, 1)]),
            rat(1, 10),
            VerdictTag::Yes,
            Some(4),
        ),
        ("(rot-90,(1,0),(9/10,0),1/5)", quarter(), v(&[(1, 1), (0, 1)]), v(&[(9, 10), (0, 1)]), rat(1, 5), VerdictTag::Yes, Some(0)),
        (
            "(rotation,(1,0),(2,0),1)",
            rotation(),
            v(&[(1, 1), (0, 1)]),
            v(&[(2, 1), (0, 1)]),
            int(1),
            VerdictTag::UndecidedBoundary,
            None,
        ),
    ];
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (name, a, x, y, d, tag, k) in &cases {
        match decide(a, x, y, d, &DecideOptions::default()) {
            Ok(r) => {
                let shown = match r.witness {
                    Some(w) => format!("{} k={w}", r.verdict),
                    None => r.verdict.to_string(),
                };
                seen.push(format!("{name} -> {shown}"));
                if r.verdict != *tag || r.witness != *k {
                    bad.push(format!("{name}: {shown}"));
                }
            }
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let detail = seen.join(", ");
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join("; ")) })
}

fn main() {
    let suite = common::suite(SUITE_SEED, SUITE_SIZE);
    let start = Instant::now();
    let verdicts: Verdicts = suite
        .iter()
        .map(|c| decide(&c.a, &c.x, &c.y, &c.delta, &DecideOptions::default()).map_err(|e| e.to_string()))
        .collect();
    eprintln!("suite decided in {:.1}s", start.elapsed().as_secs_f64());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("soundness sweep", Box::new(|| soundness(&suite, &verdicts))),
        ("oracle agreement", Box::new(|| agreement(&suite, &verdicts))),
        ("Jordan exactness", Box::new(jordan_exactness)),
        ("limit-set emptiness", Box::new(emptiness)),
        ("distance convergence", Box::new(convergence)),
        ("gap trichotomy", Box::new(trichotomy)),
        ("contraction envelope", Box::new(envelope)),
        ("root-of-unity detection", Box::new(roots_of_unity)),
        ("scaling coherence", Box::new(|| scaling(&suite, &verdicts))),
        ("worked instances", Box::new(worked)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{:>2}] {:<24} {}  ({:.1}s) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
