//! Characteristic polynomial and exact Jordan decomposition `A = P J P^-1`.
//!
//! Eigenvalues sharing a squarefree factor `g` of the characteristic
//! polynomial are handled together: generalized eigenvectors are computed
//! once over `Q[t]/(g)` and specialised at each root of `g`. A zero test
//! that is not uniform over the roots splits `g` and the factor is redone on
//! both halves, so every root of a part has the same block structure.

use crate::arith::field::{FieldValue, QuotientRing, RingResult, Split};
use crate::arith::matrix::DimensionError;
use crate::arith::{AlgebraicNumber, Polynomial, Rational, RationalMatrix};
use num_traits::{One, Zero};

/// Characteristic polynomial `det(xI - A)` by Berkowitz's division-free
/// algorithm.
pub fn char_poly(a: &RationalMatrix) -> Result<Polynomial, DimensionError> {
    if !a.is_square() {
        return Err(DimensionError(format!("characteristic polynomial of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    // coefficients, highest degree first
    let mut p: Vec<Rational> = vec![Rational::one()];
    for k in 0..n {
        // leading k x k block `s`, column c = a[0..k][k], row r = a[k][0..k]
        let mut t = vec![Rational::one(), -a[(k, k)].clone()];
        let mut col: Vec<Rational> = (0..k).map(|i| a[(i, k)].clone()).collect();
        for _ in 0..k {
            let rc: Rational = (0..k).map(|j| &a[(k, j)] * &col[j]).sum();
            t.push(-rc);
            col = (0..k)
                .map(|i| (0..k).map(|j| &a[(i, j)] * &col[j]).sum())
                .collect();
        }
        let mut q = vec![Rational::zero(); k + 2];
        for (i, qi) in q.iter_mut().enumerate() {
            for j in 0..p.len() {
                if i >= j && i - j < t.len() {
                    *qi += &t[i - j] * &p[j];
                }
            }
        }
        p = q;
    }
    p.reverse();
    Ok(Polynomial::new(p))
}

/// Generalized eigenvectors for all roots of one squarefree factor.
#[derive(Clone, Debug)]
pub struct FactorPart {
    pub modulus: Polynomial,
    /// Algebraic multiplicity of each root.
    pub multiplicity: usize,
    /// Jordan chain lengths, non-increasing.
    pub chain_lengths: Vec<usize>,
    /// Columns of `P` for one root, as polynomials in the root.
    pub v: Vec<Vec<Polynomial>>,
    /// Matching rows of `P^-1`.
    pub w: Vec<Vec<Polynomial>>,
    pub roots: Vec<AlgebraicNumber>,
    /// `conj_root[i]` is the index of the complex conjugate of `roots[i]`.
    pub conj_root: Vec<usize>,
}

impl FactorPart {
    fn chain_start(&self, c: usize) -> usize {
        self.chain_lengths[..c].iter().sum()
    }

    /// Whether local column `i` is the first of its chain.
    fn starts_chain(&self, i: usize) -> bool {
        let mut s = 0;
        for &l in &self.chain_lengths {
            if s == i {
                return true;
            }
            s += l;
        }
        false
    }
}

#[derive(Clone, Debug)]
pub struct JordanBlock {
    pub eigenvalue: AlgebraicNumber,
    pub size: usize,
    pub part: usize,
    pub root: usize,
    pub chain: usize,
    /// Index of the block's first column in `P`.
    pub offset: usize,
}

#[derive(Clone, Debug)]
pub struct JordanForm {
    pub n: usize,
    pub parts: Vec<FactorPart>,
    pub blocks: Vec<JordanBlock>,
}

/// Jordan decomposition over the algebraic numbers, verified exactly before
/// it is returned.
pub fn jordan_decompose(a: &RationalMatrix) -> Result<JordanForm, DimensionError> {
    let chi = char_poly(a)?;
    let n = a.rows();
    let mut work: Vec<(Polynomial, usize)> = chi.squarefree_decomposition();
    let mut parts = Vec::new();
    while let Some((g, m)) = work.pop() {
        match decompose_part(a, &g, m) {
            Ok(p) => parts.push(p),
            Err(Split(g1, g2)) => {
                work.push((g1, m));
                work.push((g2, m));
            }
        }
    }
    parts.sort_by_key(|p| (std::cmp::Reverse(p.multiplicity), p.modulus.degree()));
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (pi, p) in parts.iter().enumerate() {
        for (ri, root) in p.roots.iter().enumerate() {
            for (c, &l) in p.chain_lengths.iter().enumerate() {
                blocks.push(JordanBlock { eigenvalue: root.clone(), size: l, part: pi, root: ri, chain: c, offset });
                offset += l;
            }
        }
    }
    assert_eq!(offset, n, "block sizes must sum to the dimension");
    let f = JordanForm { n, parts, blocks };
    if let Err(e) = f.verify(a) {
        panic!("Jordan decomposition failed verification: {e}");
    }
    Ok(f)
}

fn decompose_part(a: &RationalMatrix, g: &Polynomial, m: usize) -> RingResult<FactorPart> {
    let n = a.rows();
    let ring = QuotientRing::new(g);
    let t = ring.gen();
    let big_m: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Polynomial::constant(a[(i, j)].clone());
                    if i == j { ring.reduce(&(&c - &t)) } else { c }
                })
                .collect()
        })
        .collect();
    let mut powers = vec![big_m.clone()];
    let mut kernels: Vec<Vec<Vec<Polynomial>>> = vec![vec![]];
    loop {
        let l = kernels.len();
        let k = ring.kernel(&powers[l - 1], n)?;
        let dim = k.len();
        kernels.push(k);
        if dim >= m {
            assert_eq!(dim, m, "generalized eigenspace larger than the multiplicity");
            break;
        }
        powers.push(ring.mat_mul(&powers[l - 1], &big_m));
    }
    let s = kernels.len() - 1;
    let apply = |v: &Vec<Polynomial>, times: usize| {
        let mut v = v.clone();
        for _ in 0..times {
            v = ring.mat_vec(&big_m, &v);
        }
        v
    };

    let mut tops: Vec<(Vec<Polynomial>, usize)> = Vec::new();
    for l in (1..=s).rev() {
        let mut span: Vec<Vec<Polynomial>> = kernels[l - 1].clone();
        for (u, len) in &tops {
            span.push(apply(u, len - l));
        }
        let mut r = ring.rank(&span)?;
        for cand in &kernels[l] {
            span.push(cand.clone());
            let r2 = ring.rank(&span)?;
            if r2 > r {
                tops.push((cand.clone(), l));
                r = r2;
            } else {
                span.pop();
            }
        }
    }
    let mut v = Vec::with_capacity(m);
    for (u, l) in &tops {
        for i in (0..*l).rev() {
            v.push(apply(u, i));
        }
    }
    let chain_lengths: Vec<usize> = tops.iter().map(|(_, l)| *l).collect();
    debug_assert_eq!(v.len(), m);

    // left generalized eigenvectors, normalised against v
    let mt: Vec<Vec<Polynomial>> = (0..n).map(|i| (0..n).map(|j| powers[s - 1][j][i].clone()).collect()).collect();
    let u = ring.kernel(&mt, n)?;
    assert_eq!(u.len(), m, "left generalized eigenspace has the wrong dimension");
    let vt: Vec<Vec<Polynomial>> = (0..n).map(|i| v.iter().map(|col| col[i].clone()).collect()).collect();
    let uv = ring.mat_mul(&u, &vt);
    let w = ring.mat_mul(&ring.mat_inv(&uv)?, &u);

    let roots = AlgebraicNumber::roots_of(g);
    let conj_root = (0..roots.len())
        .map(|i| {
            if roots[i].is_real() {
                return i;
            }
            let c = roots[i].disc().conj();
            (0..roots.len()).find(|&j| roots[j].disc().intersects(&c)).expect("conjugate root")
        })
        .collect();
    Ok(FactorPart { modulus: ring.modulus().clone(), multiplicity: m, chain_lengths, v, w, roots, conj_root })
}

impl JordanForm {
    /// Part and local column of a global column of `P`.
    fn locate(&self, col: usize) -> (usize, usize, usize) {
        let b = self
            .blocks
            .iter()
            .find(|b| b.offset <= col && col < b.offset + b.size)
            .expect("column in range");
        let p = &self.parts[b.part];
        (b.part, b.root, p.chain_start(b.chain) + col - b.offset)
    }

    pub fn eigenvalue_of_column(&self, col: usize) -> &AlgebraicNumber {
        let (p, r, _) = self.locate(col);
        &self.parts[p].roots[r]
    }

    /// Column `col` of `P`.
    pub fn p_column(&self, col: usize) -> Vec<FieldValue> {
        let (p, r, i) = self.locate(col);
        let part = &self.parts[p];
        part.v[i].iter().map(|h| FieldValue::new(h.clone(), part.roots[r].clone())).collect()
    }

    /// Row `row` of `P^-1`.
    pub fn p_inv_row(&self, row: usize) -> Vec<FieldValue> {
        let (p, r, i) = self.locate(row);
        let part = &self.parts[p];
        part.w[i].iter().map(|h| FieldValue::new(h.clone(), part.roots[r].clone())).collect()
    }

    pub fn p_matrix(&self) -> Vec<Vec<AlgebraicNumber>> {
        let cols: Vec<Vec<AlgebraicNumber>> =
            (0..self.n).map(|c| self.p_column(c).iter().map(|f| f.to_algebraic()).collect()).collect();
        (0..self.n).map(|r| (0..self.n).map(|c| cols[c][r].clone()).collect()).collect()
    }

    pub fn p_inv_matrix(&self) -> Vec<Vec<AlgebraicNumber>> {
        (0..self.n).map(|r| self.p_inv_row(r).iter().map(|f| f.to_algebraic()).collect()).collect()
    }

    /// Global index of the block holding the complex conjugate eigenvalue
    /// with the same chain.
    pub fn conj_block(&self, b: usize) -> usize {
        let blk = &self.blocks[b];
        let cr = self.parts[blk.part].conj_root[blk.root];
        self.blocks
            .iter()
            .position(|o| o.part == blk.part && o.root == cr && o.chain == blk.chain)
            .expect("conjugate block")
    }

    /// Exact checks: `A V = V J` and `W V = I` on every part (identities in
    /// `Q[t]/(g)`, hence at every root), and `P P^-1 = I` as a rational
    /// identity obtained by summing over the roots.
    pub fn verify(&self, a: &RationalMatrix) -> Result<(), String> {
        let n = self.n;
        for (pi, part) in self.parts.iter().enumerate() {
            let ring = QuotientRing::new(&part.modulus);
            let t = ring.gen();
            for (i, col) in part.v.iter().enumerate() {
                let av: Vec<Polynomial> = (0..n)
                    .map(|r| {
                        let s = (0..n).fold(Polynomial::zero(), |s, c| &s + &col[c].scale(&a[(r, c)]));
                        ring.reduce(&s)
                    })
                    .collect();
                for r in 0..n {
                    let mut want = ring.mul(&t, &col[r]);
                    if !part.starts_chain(i) {
                        want = &want + &part.v[i - 1][r];
                    }
                    if av[r] != ring.reduce(&want) {
                        return Err(format!("A P != P J in part {pi}, column {i}"));
                    }
                }
            }
            for (i, row) in part.w.iter().enumerate() {
                for (j, col) in part.v.iter().enumerate() {
                    let s = row.iter().zip(col).fold(Polynomial::zero(), |s, (x, y)| &s + &(x * y));
                    let want = if i == j { Polynomial::one() } else { Polynomial::zero() };
                    if ring.reduce(&s) != want {
                        return Err(format!("P^-1 P != I in part {pi} at ({i}, {j})"));
                    }
                }
            }
        }
        let id = self.sum_over_roots(|_, _| false);
        if id != RationalMatrix::identity(n) {
            return Err("P P^-1 != I".into());
        }
        Ok(())
    }

    /// `P J P^-1` as a rational matrix.
    pub fn reassemble(&self) -> RationalMatrix {
        self.sum_over_roots(|_, _| true)
    }

    /// `sum over parts and roots of V (J or I) W`, with `with_j` choosing J.
    fn sum_over_roots(&self, with_j: impl Fn(usize, usize) -> bool) -> RationalMatrix {
        let n = self.n;
        let mut out = RationalMatrix::zeros(n, n);
        for (pi, part) in self.parts.iter().enumerate() {
            let ring = QuotientRing::new(&part.modulus);
            let t = ring.gen();
            let m = part.v.len();
            // rows of J W (or W)
            let jw: Vec<Vec<Polynomial>> = (0..m)
                .map(|i| {
                    (0..n)
                        .map(|c| {
                            if !with_j(pi, i) {
                                return part.w[i][c].clone();
                            }
                            let mut s = ring.mul(&t, &part.w[i][c]);
                            if i + 1 < m && !part.starts_chain(i + 1) {
                                s = &s + &part.w[i + 1][c];
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            for r in 0..n {
                for c in 0..n {
                    let s = (0..m).fold(Polynomial::zero(), |s, i| &s + &(&part.v[i][r] * &jw[i][c]));
                    out[(r, c)] += part.modulus.trace_of(&s);
                }
            }
        }
        out
    }
}

/// `z = P^-1 x`, one field value per column of `P`.
pub fn transform_initial_field(f: &JordanForm, x: &[Rational]) -> Result<Vec<FieldValue>, DimensionError> {
    if x.len() != f.n {
        return Err(DimensionError(format!("vector of length {} for a {}-dimensional form", x.len(), f.n)));
    }
    Ok((0..f.n)
        .map(|row| {
            let (p, r, i) = f.locate(row);
            let part = &f.parts[p];
            let h = part.w[i]
                .iter()
                .zip(x)
                .fold(Polynomial::zero(), |s, (w, xi)| &s + &w.scale(xi))
                .rem(&part.modulus);
            FieldValue::new(h, part.roots[r].clone())
        })
        .collect())
}

/// `z = P^-1 x` as algebraic numbers.
pub fn transform_initial(f: &JordanForm, x: &[Rational]) -> Result<Vec<AlgebraicNumber>, DimensionError> {
    Ok(transform_initial_field(f, x)?.iter().map(|v| v.to_algebraic()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::arith::CRational;

    fn rot90() -> RationalMatrix {
        RationalMatrix::from_ints(&[&[0, -1], &[1, 0]])
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&rot90()).unwrap(), Polynomial::from_ints(&[1, 0, 1]));
        let j = RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(char_poly(&j).unwrap(), Polynomial::from_ints(&[1, -2, 1]));
        let r = RationalMatrix::from_ratios(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
        assert_eq!(
            char_poly(&r).unwrap(),
            Polynomial::new(vec![int(1), rat(-6, 5), int(1)])
        );
        let a = RationalMatrix::from_ints(&[&[2, 1, 0], &[0, 3, 4], &[5, 0, 1]]);
        // det(xI - A) = x^3 - 6x^2 + 11x - 26
        assert_eq!(char_poly(&a).unwrap(), Polynomial::from_ints(&[-26, 11, -6, 1]));
        assert!(char_poly(&RationalMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn shear_is_its_own_form() {
        let j = RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let f = jordan_decompose(&j).unwrap();
        assert_eq!(f.blocks.len(), 1);
        assert_eq!(f.blocks[0].size, 2);
        assert_eq!(f.blocks[0].eigenvalue.as_rational(), Some(int(1)));
        assert_eq!(f.reassemble(), j);
    }

    #[test]
    fn diagonal_form() {
        let d = RationalMatrix::diagonal(&[rat(1, 2), rat(1, 3)]);
        let f = jordan_decompose(&d).unwrap();
        let mut ev: Vec<Rational> = f.blocks.iter().map(|b| b.eigenvalue.as_rational().unwrap()).collect();
        ev.sort();
        assert_eq!(ev, vec![rat(1, 3), rat(1, 2)]);
        let z = transform_initial(&f, &[int(1), int(0)]).unwrap();
        let mut zr: Vec<Rational> = z.iter().map(|a| a.as_rational().unwrap()).collect();
        zr.sort();
        assert_eq!(zr, vec![int(0), int(1)]);
    }

    #[test]
    fn quarter_rotation() {
        let f = jordan_decompose(&rot90()).unwrap();
        assert_eq!(f.blocks.len(), 2);
        assert_eq!(f.reassemble(), rot90());
        let p = f.p_matrix();
        for c in 0..2 {
            // column is (1, -i) or (1, i) up to scaling: second / first = -+lambda... check A v = lambda v
            let lam = f.eigenvalue_of_column(c);
            let ratio = p[1][c].ratio(&p[0][c]).unwrap();
            // v = (1, -i) for lambda = i
            assert!(ratio.eq_exact(&lam.conj()) || ratio.eq_exact(&lam.ratio(&AlgebraicNumber::from_int(-1)).unwrap()));
        }
        let z = transform_initial(&f, &[int(1), int(0)]).unwrap();
        let w = f.p_inv_matrix();
        assert_eq!(w.len(), 2);
        // z scales with the column normalisation; P z = x is the invariant
        let pz0: Vec<_> = (0..2).map(|c| (p[0][c].ball(40), z[c].ball(40))).collect();
        let mut s = crate::arith::ball::Ball::zero();
        for (a, b) in &pz0 {
            s = s.add(&a.mul(b, 40));
        }
        assert!(s.sub(&crate::arith::ball::Ball::exact(CRational::one())).contains_zero());
    }

    #[test]
    fn derogatory_and_mixed_blocks() {
        // J2(2) + J1(2) + J1(-1): repeated eigenvalue with two chains
        let a = RationalMatrix::from_ints(&[&[2, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, -1]]);
        let f = jordan_decompose(&a).unwrap();
        let mut sizes: Vec<(Rational, usize)> =
            f.blocks.iter().map(|b| (b.eigenvalue.as_rational().unwrap(), b.size)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(int(-1), 1), (int(2), 1), (int(2), 2)]);
        assert_eq!(f.reassemble(), a);
    }

    #[test]
    fn split_factor_in_dense_matrix() {
        // similar to diag(1, 1, 2) but dense; char poly (x-1)^2 (x-2)
        let s = RationalMatrix::from_ints(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let d = RationalMatrix::diagonal(&[int(1), int(1), int(2)]);
        let sinv = inverse(&s);
        let a = s.mul(&d).unwrap().mul(&sinv).unwrap();
        let f = jordan_decompose(&a).unwrap();
        assert_eq!(f.reassemble(), a);
        assert!(f.blocks.iter().all(|b| b.size == 1));
    }

    fn inverse(m: &RationalMatrix) -> RationalMatrix {
        let n = m.rows();
        let ring = QuotientRing::new(&Polynomial::x());
        let rows: Vec<Vec<Polynomial>> =
            m.to_rows().into_iter().map(|r| r.into_iter().map(Polynomial::constant).collect()).collect();
        let inv = ring.mat_inv(&rows).unwrap();
        RationalMatrix::from_rows(
            (0..n).map(|i| (0..n).map(|j| inv[i][j].coeff(0)).collect()).collect(),
        )
        .unwrap()
    }
}
