//! Limit points of an orbit.
//!
//! With `z = P^-1 x`, each Jordan block evolves independently. A block with
//! `|lambda| > 1`, or `|lambda| = 1` and a component beyond the eigenvector
//! coordinate, drives the orbit to infinity and the limit set is empty. Blocks
//! with `|lambda| < 1` vanish in the limit. What remains is a sum of unit
//! modulus modes `lambda^k w`, whose closure is a finite union of tori: modes
//! whose ratios are roots of unity rotate together and share one free phase,
//! and after a universal period `N` every phase class repeats up to that
//! phase.

use crate::arith::ball::Ball;
use crate::arith::field::{FieldValue, QuotientRing};
use crate::arith::rational::{ceil_int, floor_dyadic, int, sqrt_upper};
use crate::arith::{AlgebraicNumber, Polynomial, Rational, RationalMatrix};
use crate::error::{OrbitError, Result};
use crate::norm::Norm;
use crate::spectral::{jordan_decompose, transform_initial_field, JordanForm};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockCase {
    #[serde(rename = "CASE_I_DIVERGENT")]
    Divergent,
    #[serde(rename = "CASE_II_TO_ZERO")]
    ToZero,
    #[serde(rename = "CASE_III_UNIT_SCALAR")]
    UnitScalar,
    #[serde(rename = "CASE_IV_BOUNDED")]
    UnitBounded,
    #[serde(rename = "CASE_IV_DIVERGENT")]
    UnitDivergent,
    #[serde(rename = "INERT_ZERO_COMPONENT")]
    Inert,
}

impl BlockCase {
    pub fn diverges(self) -> bool {
        matches!(self, BlockCase::Divergent | BlockCase::UnitDivergent)
    }

    pub fn survives(self) -> bool {
        matches!(self, BlockCase::UnitScalar | BlockCase::UnitBounded)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockClassification {
    pub block: usize,
    pub case: BlockCase,
}

/// `||A^m x|| > c m` for every `m > n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCertificate {
    #[serde(with = "crate::report::rational")]
    pub c: Rational,
    #[serde(rename = "N")]
    pub n: u64,
}

/// A surviving unit-modulus eigenvalue together with its contribution
/// `lambda^k w` to the orbit. `w` is given by polynomials in the eigenvalue.
#[derive(Clone, Debug)]
pub struct UnitMode {
    pub eigenvalue: AlgebraicNumber,
    pub modulus: Polynomial,
    pub w: Vec<Polynomial>,
    pub part: usize,
    pub root: usize,
}

impl UnitMode {
    /// `lambda^k w`.
    pub fn at(&self, k: u64) -> Vec<FieldValue> {
        let ring = QuotientRing::new(&self.modulus);
        let lk = ring.pow(&ring.gen(), k);
        self.w
            .iter()
            .map(|h| FieldValue::new(ring.mul(&lk, h), self.eigenvalue.clone()))
            .collect()
    }
}

/// An equivalence class of unit eigenvalues under "ratio is a root of unity".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseClass {
    pub members: Vec<usize>,
    pub rigid: bool,
    pub period: u64,
    /// Members multiplied by the free phase `mu`; the remaining members of a
    /// non-rigid class are their complex conjugates and carry `conj(mu)`.
    pub phase_members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TorusDescriptor {
    pub n: usize,
    pub modes: Vec<UnitMode>,
    /// Classes with each conjugate pair of non-rigid classes merged, so that
    /// every class with a free phase describes a real orbit component.
    pub classes: Vec<PhaseClass>,
    pub period: u64,
    pub free_phase_count: usize,
}

#[derive(Clone, Debug)]
pub enum LimitSetDescriptor {
    Empty(GrowthCertificate),
    Torus(TorusDescriptor),
}

impl LimitSetDescriptor {
    pub fn is_empty(&self) -> bool {
        matches!(self, LimitSetDescriptor::Empty(_))
    }

    pub fn torus(&self) -> Result<&TorusDescriptor> {
        match self {
            LimitSetDescriptor::Torus(t) => Ok(t),
            LimitSetDescriptor::Empty(_) => Err(OrbitError::EmptyLimitSet),
        }
    }
}

/// Everything computed on the way to the descriptor.
#[derive(Clone, Debug)]
pub struct LimitSetAnalysis {
    pub form: JordanForm,
    pub z: Vec<FieldValue>,
    pub classification: Vec<BlockClassification>,
    pub descriptor: LimitSetDescriptor,
}

pub fn classify_blocks(f: &JordanForm, z: &[FieldValue]) -> Vec<BlockClassification> {
    f.blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let comp = &z[b.offset..b.offset + b.size];
            let nonzero: Vec<bool> = comp.iter().map(|v| !v.is_zero()).collect();
            let case = if !nonzero.iter().any(|&v| v) {
                BlockCase::Inert
            } else {
                match b.eigenvalue.cmp_modulus_one() {
                    Ordering::Greater => BlockCase::Divergent,
                    Ordering::Less => BlockCase::ToZero,
                    Ordering::Equal if b.size == 1 => BlockCase::UnitScalar,
                    Ordering::Equal if !nonzero[1..].iter().any(|&v| v) => BlockCase::UnitBounded,
                    Ordering::Equal => BlockCase::UnitDivergent,
                }
            };
            BlockClassification { block: i, case }
        })
        .collect()
}

pub fn analyze(a: &RationalMatrix, x: &[Rational], norm: Norm) -> Result<LimitSetAnalysis> {
    let form = jordan_decompose(a)?;
    let z = transform_initial_field(&form, x)?;
    let classification = classify_blocks(&form, &z);
    let descriptor = if classification.iter().any(|c| c.case.diverges()) {
        LimitSetDescriptor::Empty(growth_certificate(&form, &z, &classification, norm)?)
    } else {
        LimitSetDescriptor::Torus(torus_descriptor(&form, &z, &classification))
    };
    Ok(LimitSetAnalysis { form, z, classification, descriptor })
}

pub fn limit_set(a: &RationalMatrix, x: &[Rational]) -> Result<LimitSetDescriptor> {
    Ok(analyze(a, x, Norm::Euclidean)?.descriptor)
}

fn torus_descriptor(f: &JordanForm, z: &[FieldValue], cls: &[BlockClassification]) -> TorusDescriptor {
    let mut modes: Vec<UnitMode> = Vec::new();
    for c in cls.iter().filter(|c| c.case.survives()) {
        let b = &f.blocks[c.block];
        let part = &f.parts[b.part];
        let ring = QuotientRing::new(&part.modulus);
        let col = f.p_column(b.offset);
        let w: Vec<Polynomial> = col.iter().map(|v| ring.mul(&z[b.offset].h, &v.h)).collect();
        match modes.iter_mut().find(|m| m.part == b.part && m.root == b.root) {
            Some(m) => {
                for (a, d) in m.w.iter_mut().zip(&w) {
                    *a = ring.reduce(&(&*a + d));
                }
            }
            None => modes.push(UnitMode {
                eigenvalue: b.eigenvalue.clone(),
                modulus: part.modulus.clone(),
                w,
                part: b.part,
                root: b.root,
            }),
        }
    }
    let units: Vec<AlgebraicNumber> = modes.iter().map(|m| m.eigenvalue.clone()).collect();
    let raw = partition_classes(&units);
    let conj_mode = |m: usize| {
        let md = &modes[m];
        let cr = f.parts[md.part].conj_root[md.root];
        modes.iter().position(|o| o.part == md.part && o.root == cr).expect("conjugate mode")
    };
    let mut classes: Vec<PhaseClass> = Vec::new();
    let mut taken = vec![false; raw.len()];
    for i in 0..raw.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        let c = &raw[i];
        if c.rigid {
            classes.push(c.clone());
            continue;
        }
        let partner = conj_mode(c.members[0]);
        let j = raw.iter().position(|d| d.members.contains(&partner)).unwrap();
        assert!(j != i, "a non-rigid class cannot be closed under conjugation");
        taken[j] = true;
        let mut members = c.members.clone();
        members.extend(&raw[j].members);
        members.sort();
        classes.push(PhaseClass { members, rigid: false, period: c.period, phase_members: c.members.clone() });
    }
    let period = universal_period(&classes);
    let free_phase_count = classes.iter().filter(|c| !c.rigid).count();
    TorusDescriptor { n: f.n, modes, classes, period, free_phase_count }
}

/// Partition unit-modulus numbers by "ratio is a root of unity".
pub fn partition_classes(units: &[AlgebraicNumber]) -> Vec<PhaseClass> {
    let mut classes: Vec<PhaseClass> = Vec::new();
    for (i, u) in units.iter().enumerate() {
        let mut placed = false;
        for c in classes.iter_mut() {
            let rep = &units[c.members[0]];
            let ratio = u.ratio(rep).expect("unit modulus numbers are nonzero");
            if let Some(ord) = ratio.root_of_unity_order() {
                c.members.push(i);
                c.period = c.period.lcm(&ord);
                if c.rigid {
                    c.period = c.period.lcm(&u.root_of_unity_order().expect("member of a rigid class"));
                }
                placed = true;
                break;
            }
        }
        if !placed {
            let own = u.root_of_unity_order();
            classes.push(PhaseClass {
                members: vec![i],
                rigid: own.is_some(),
                period: own.unwrap_or(1),
                phase_members: if own.is_some() { vec![] } else { vec![i] },
            });
        }
    }
    for c in classes.iter_mut().filter(|c| !c.rigid) {
        c.phase_members = c.members.clone();
    }
    classes
}

pub fn universal_period(classes: &[PhaseClass]) -> u64 {
    classes.iter().fold(1u64, |n, c| n.lcm(&c.period))
}

/// A sum of field values from possibly different number fields.
#[derive(Clone, Debug, Default)]
pub struct ValueSum(pub Vec<FieldValue>);

impl ValueSum {
    /// Ball of radius at most `2^-prec`.
    pub fn ball(&self, prec: u32) -> Ball {
        let extra = usize::BITS - self.0.len().leading_zeros() + 1;
        self.0.iter().fold(Ball::zero(), |s, v| s.add(&v.ball(prec + extra)))
    }
}

/// Parameters of the family `S_L^k`: the orbit points `A^(k + sN) x`
/// approach `fixed + sum_j 2 Re(mu_j free_j)` for unit `mu_j`.
#[derive(Clone, Debug)]
pub struct TorusFamily {
    pub k: u64,
    pub fixed: Vec<ValueSum>,
    pub free: Vec<Vec<ValueSum>>,
}

impl TorusFamily {
    pub fn phase_count(&self) -> usize {
        self.free.len()
    }
}

pub fn torus_family(d: &TorusDescriptor, k: u64) -> Result<TorusFamily> {
    if k >= d.period {
        return Err(OrbitError::Precondition(format!("family index {k} outside [0, {})", d.period)));
    }
    let n = d.n;
    let values: Vec<Vec<FieldValue>> = d.modes.iter().map(|m| m.at(k)).collect();
    let collect = |members: &[usize]| -> Vec<ValueSum> {
        (0..n).map(|i| ValueSum(members.iter().map(|&m| values[m][i].clone()).collect())).collect()
    };
    let rigid: Vec<usize> = d.classes.iter().filter(|c| c.rigid).flat_map(|c| c.members.clone()).collect();
    let fixed = collect(&rigid);
    let free = d.classes.iter().filter(|c| !c.rigid).map(|c| collect(&c.phase_members)).collect();
    Ok(TorusFamily { k, fixed, free })
}

fn abs_lower_positive(v: &FieldValue) -> Rational {
    let mut prec = 16;
    loop {
        let l = v.ball(prec).abs_lower(prec);
        if l.is_positive() {
            return l;
        }
        prec *= 2;
    }
}

/// Upper bound on the Frobenius norm of a matrix given by field values.
pub(crate) fn frobenius_upper(entries: impl Iterator<Item = FieldValue>) -> Rational {
    let s: Rational = entries
        .map(|v| {
            let u = v.ball(24).abs_upper(24);
            &u * &u
        })
        .sum();
    sqrt_upper(&s, 24)
}

pub(crate) fn p_inv_frobenius(f: &JordanForm) -> Rational {
    frobenius_upper((0..f.n).flat_map(|r| f.p_inv_row(r)))
}

pub(crate) fn p_frobenius(f: &JordanForm) -> Rational {
    frobenius_upper((0..f.n).flat_map(|c| f.p_column(c)))
}

/// Linear growth certificate from the divergent blocks; the largest
/// constant found is returned.
pub fn growth_certificate(
    f: &JordanForm,
    z: &[FieldValue],
    cls: &[BlockClassification],
    norm: Norm,
) -> Result<GrowthCertificate> {
    let div: Vec<&BlockClassification> = cls.iter().filter(|c| c.case.diverges()).collect();
    if div.is_empty() {
        return Err(OrbitError::Precondition("growth certificate requested without a divergent block".into()));
    }
    let denom = p_inv_frobenius(f) * norm.euclidean_ratio(f.n, 24);
    let mut best: Option<GrowthCertificate> = None;
    for c in div {
        let b = &f.blocks[c.block];
        let comp = &z[b.offset..b.offset + b.size];
        let q = comp.iter().rposition(|v| !v.is_zero()).expect("divergent block has mass");
        let zq = abs_lower_positive(&comp[q]);
        let cert = match c.case {
            BlockCase::Divergent => {
                // |(J^m z)_q| = |lambda|^m |z_q| >= (1 + m(a - 1)) |z_q|
                let mut prec = 16;
                let a = loop {
                    let a = b.eigenvalue.abs_lower(prec);
                    if a > Rational::one() {
                        break a;
                    }
                    prec *= 2;
                };
                GrowthCertificate { c: (a - int(1)) * zq / &denom, n: 0 }
            }
            _ => {
                // |(J^m z)_(q-1)| >= m |z_q| - |z_(q-1)| > m |z_q| / 2 once m > 2|z_(q-1)|/|z_q|
                let prev = comp[q - 1].ball(24).abs_upper(24);
                let n = ceil_int(&(int(2) * prev / &zq)).to_u64().unwrap_or(u64::MAX);
                GrowthCertificate { c: zq / (int(3) * &denom), n }
            }
        };
        let cert = GrowthCertificate { c: round_down_positive(&cert.c), n: cert.n };
        if best.as_ref().is_none_or(|b| cert.c > b.c || (cert.c == b.c && cert.n < b.n)) {
            best = Some(cert);
        }
    }
    Ok(best.unwrap())
}

fn round_down_positive(c: &Rational) -> Rational {
    let mut bits = 32;
    loop {
        let r = floor_dyadic(c, bits);
        if r.is_positive() {
            return r;
        }
        bits *= 2;
    }
}

impl TorusDescriptor {
    pub fn unit_diagonal(&self) -> Vec<AlgebraicNumber> {
        self.modes.iter().map(|m| m.eigenvalue.clone()).collect()
    }

    /// `S_L` is the single point 0.
    pub fn is_origin(&self) -> bool {
        self.modes.is_empty()
    }
}

/// `sum over modes of lambda^k w`, the unit part of `A^k x`, as balls.
pub fn unit_part(d: &TorusDescriptor, k: u64, prec: u32) -> Vec<Ball> {
    let vals: Vec<Vec<FieldValue>> = d.modes.iter().map(|m| m.at(k)).collect();
    (0..d.n)
        .map(|i| ValueSum(vals.iter().map(|v| v[i].clone()).collect()).ball(prec))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn rotation() -> RationalMatrix {
        RationalMatrix::from_ratios(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]])
    }

    fn cases(a: &RationalMatrix, x: &[Rational]) -> Vec<BlockCase> {
        let an = analyze(a, x, Norm::Euclidean).unwrap();
        an.classification.iter().map(|c| c.case).collect()
    }

    #[test]
    fn shear_cases() {
        let j = RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(cases(&j, &[int(0), int(1)]), vec![BlockCase::UnitDivergent]);
        assert_eq!(cases(&j, &[int(1), int(0)]), vec![BlockCase::UnitBounded]);
    }

    #[test]
    fn scalar_cases() {
        assert_eq!(cases(&RationalMatrix::from_ints(&[&[2]]), &[int(1)]), vec![BlockCase::Divergent]);
        assert_eq!(cases(&RationalMatrix::from_ratios(&[&[(1, 2)]]), &[int(1)]), vec![BlockCase::ToZero]);
        assert_eq!(cases(&RationalMatrix::from_ints(&[&[3]]), &[int(0)]), vec![BlockCase::Inert]);
    }

    #[test]
    fn irrational_rotation_is_one_free_circle() {
        let d = limit_set(&rotation(), &[int(1), int(0)]).unwrap();
        let t = d.torus().unwrap();
        assert_eq!(t.classes.len(), 1);
        assert!(!t.classes[0].rigid);
        assert_eq!(t.period, 1);
        assert_eq!(t.free_phase_count, 1);
        for u in t.unit_diagonal() {
            assert_eq!(u.cmp_modulus_one(), Ordering::Equal);
        }
    }

    #[test]
    fn doubling_is_empty() {
        let a = RationalMatrix::from_ints(&[&[2, 0], &[0, 2]]);
        match limit_set(&a, &[int(1), int(0)]).unwrap() {
            LimitSetDescriptor::Empty(c) => {
                assert!(c.c.is_positive());
                let x = vec![int(1), int(0)];
                for m in (c.n + 1)..(c.n + 30) {
                    let v = a.pow(m).mul_vec(&x).unwrap();
                    let nsq: Rational = v.iter().map(|t| t * t).sum();
                    let cm = &c.c * int(m as i64);
                    assert!(nsq > &cm * &cm);
                }
            }
            _ => panic!("expected empty"),
        }
    }

    #[test]
    fn quarter_rotation_is_rigid() {
        let a = RationalMatrix::from_ints(&[&[0, -1], &[1, 0]]);
        let d = limit_set(&a, &[int(1), int(0)]).unwrap();
        let t = d.torus().unwrap();
        assert_eq!(t.classes.len(), 1);
        assert!(t.classes[0].rigid);
        assert_eq!(t.period, 4);
        assert_eq!(t.free_phase_count, 0);
        let fam = torus_family(t, 1).unwrap();
        let p: Vec<Ball> = fam.fixed.iter().map(|v| v.ball(30)).collect();
        // A x = (0, 1)
        assert!(p[0].contains_zero());
        assert!(p[1].sub(&Ball::real(int(1))).contains_zero());
        assert!(torus_family(t, 4).is_err());
    }

    #[test]
    fn zero_vector_gives_origin() {
        let a = RationalMatrix::from_ints(&[&[3, 1], &[0, 3]]);
        let t = limit_set(&a, &[int(0), int(0)]).unwrap();
        let t = t.torus().unwrap();
        assert!(t.is_origin());
        assert_eq!(t.period, 1);
        assert_eq!(t.free_phase_count, 0);
    }

    #[test]
    fn class_partition_examples() {
        let roots = AlgebraicNumber::roots_of(&Polynomial::from_ints(&[1, 0, 1]));
        let c = partition_classes(&roots);
        assert_eq!(c.len(), 1);
        assert!(c[0].rigid);
        assert_eq!(c[0].period, 4);
        let rot = AlgebraicNumber::roots_of(&Polynomial::from_ints(&[5, -6, 5]));
        let one = partition_classes(&rot[..1]);
        assert_eq!((one.len(), one[0].rigid, one[0].period), (1, false, 1));
        assert_eq!(partition_classes(&rot).len(), 2);
        let p = |v: &[u64]| {
            universal_period(
                &v.iter()
                    .map(|&n| PhaseClass { members: vec![], rigid: true, period: n, phase_members: vec![] })
                    .collect::<Vec<_>>(),
            )
        };
        assert_eq!(p(&[2, 3]), 6);
        assert_eq!(p(&[1]), 1);
        let _ = rat(1, 2);
    }
}
