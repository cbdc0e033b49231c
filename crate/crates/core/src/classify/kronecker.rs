//! Representations `M₁ ⇉ M₂` of the Kronecker quiver and their decomposition.
//!
//! A representation is the pencil `(A, B)` of the actions of `h₁, h₂`. Minimal
//! indices come from kernels of the block matrices of `sA + tB` acting on
//! homogeneous polynomial vectors; Jordan data from rank drops of the block
//! bidiagonal matrices of `B − λA` (finite `λ`) and `A` (infinite).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ClassifyError, FinModule};
use crate::algebra_base::{
    complement_basis, roots_in_field, solve_matrix, span_basis, Field, Matrix, Scalar, UniPoly,
};

/// The five series; `Sink` is the simple at the second vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KroneckerLabel {
    S1,
    Sink,
    S2(usize),
    S3(usize),
    S4(usize, Scalar),
    S5(usize),
}

impl KroneckerLabel {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            KroneckerLabel::S1 => (1, 0),
            KroneckerLabel::Sink => (0, 1),
            KroneckerLabel::S2(n) => (*n, n + 1),
            KroneckerLabel::S3(n) => (n + 1, *n),
            KroneckerLabel::S4(n, _) | KroneckerLabel::S5(n) => (*n, *n),
        }
    }

    /// The label of the same block read as a `D₂`-module: the second-vertex
    /// simple is again `K = D₂/𝔪`.
    pub fn as_d2_label(&self) -> KroneckerLabel {
        match self {
            KroneckerLabel::Sink => KroneckerLabel::S1,
            other => other.clone(),
        }
    }
}

impl fmt::Display for KroneckerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KroneckerLabel::S1 => f.write_str("S1"),
            KroneckerLabel::Sink => f.write_str("Sink"),
            KroneckerLabel::S2(n) => write!(f, "S2({})", n),
            KroneckerLabel::S3(n) => write!(f, "S3({})", n),
            KroneckerLabel::S4(n, l) => write!(f, "S4({},{})", n, l),
            KroneckerLabel::S5(n) => write!(f, "S5({})", n),
        }
    }
}

/// `A, B : K^{d₁} → K^{d₂}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerRep {
    pub d1: usize,
    pub d2: usize,
    pub a: Matrix,
    pub b: Matrix,
}

impl KroneckerRep {
    pub fn new(d1: usize, d2: usize, a: Matrix, b: Matrix) -> Result<KroneckerRep, ClassifyError> {
        if a.shape() != (d2, d1) || b.shape() != (d2, d1) {
            return Err(ClassifyError::DimensionMismatch);
        }
        Ok(KroneckerRep { d1, d2, a, b })
    }

    pub fn zero() -> KroneckerRep {
        KroneckerRep {
            d1: 0,
            d2: 0,
            a: Matrix::zeros(0, 0),
            b: Matrix::zeros(0, 0),
        }
    }

    pub fn direct_sum(&self, o: &KroneckerRep) -> KroneckerRep {
        KroneckerRep {
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            a: Matrix::block_diag(&[self.a.clone(), o.a.clone()]),
            b: Matrix::block_diag(&[self.b.clone(), o.b.clone()]),
        }
    }

    /// New bases `P₁` of `M₁` and `P₂` of `M₂` (as columns).
    pub fn conjugate(&self, p1: &Matrix, p2: &Matrix) -> KroneckerRep {
        let p2i = p2.inverse().expect("invertible base change");
        KroneckerRep {
            d1: self.d1,
            d2: self.d2,
            a: p2i.mul(&self.a).mul(p1),
            b: p2i.mul(&self.b).mul(p1),
        }
    }

    /// The path-algebra module on `M₁ ⊕ M₂`: vertex idempotents and arrows.
    pub fn to_module(&self) -> FinModule {
        let d = self.d1 + self.d2;
        let e1 = Matrix::from_fn(d, d, |r, c| {
            if r == c && r < self.d1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let e2 = Matrix::identity(d).sub(&e1);
        let arrow = |m: &Matrix| {
            Matrix::from_fn(d, d, |r, c| {
                if r >= self.d1 && c < self.d1 {
                    m.get(r - self.d1, c).clone()
                } else {
                    Scalar::zero()
                }
            })
        };
        FinModule {
            dim: d,
            gens: vec![e1, e2, arrow(&self.a), arrow(&self.b)],
        }
    }

    /// The representation `(M/𝔪M ⇉ 𝔪M)` of a module with `𝔪²M = 0`.
    pub fn from_local_module(h1: &Matrix, h2: &Matrix) -> Result<KroneckerRep, ClassifyError> {
        let d = h1.rows();
        if h1.shape() != (d, d) || h2.shape() != (d, d) {
            return Err(ClassifyError::DimensionMismatch);
        }
        for x in [h1, h2] {
            for y in [h1, h2] {
                if !x.mul(y).is_zero() {
                    return Err(ClassifyError::NotLocalModule);
                }
            }
        }
        let mut imgs = h1.columns();
        imgs.extend(h2.columns());
        let m2 = span_basis(d, &imgs);
        let m1 = complement_basis(d, &m2);
        let b2 = Matrix::from_columns(d, &m2);
        let b1 = Matrix::from_columns(d, &m1);
        let coords = |h: &Matrix| {
            if m2.is_empty() {
                Matrix::zeros(0, m1.len())
            } else {
                solve_matrix(&b2, &h.mul(&b1)).expect("image inside m M")
            }
        };
        KroneckerRep::new(m1.len(), m2.len(), coords(h1), coords(h2))
    }
}

/// The listed representative of a series.
pub fn kronecker_block(label: &KroneckerLabel) -> KroneckerRep {
    let (d1, d2) = label.dims();
    let mut a = Matrix::zeros(d2, d1);
    let mut b = Matrix::zeros(d2, d1);
    match label {
        KroneckerLabel::S1 | KroneckerLabel::Sink => {}
        KroneckerLabel::S2(n) => {
            for i in 0..*n {
                a.set(i, i, Scalar::one());
                b.set(i + 1, i, Scalar::one());
            }
        }
        KroneckerLabel::S3(n) => {
            for i in 0..*n {
                a.set(i, i, Scalar::one());
                b.set(i, i + 1, Scalar::one());
            }
        }
        KroneckerLabel::S4(n, l) => {
            for i in 0..*n {
                a.set(i, i, Scalar::one());
                b.set(i, i, l.clone());
                if i > 0 {
                    b.set(i - 1, i, Scalar::one());
                }
            }
        }
        KroneckerLabel::S5(n) => {
            for i in 0..*n {
                b.set(i, i, Scalar::one());
                if i > 0 {
                    a.set(i - 1, i, Scalar::one());
                }
            }
        }
    }
    KroneckerRep { d1, d2, a, b }
}

/// `dim ker` of `sA + tB` on homogeneous polynomial vectors of degree `k`.
fn poly_kernel_dim(a: &Matrix, b: &Matrix, k: usize) -> usize {
    let (r, c) = a.shape();
    if r == 0 {
        return (k + 1) * c;
    }
    let m = Matrix::from_fn((k + 2) * r, (k + 1) * c, |row, col| {
        let (bi, i) = (row / r, row % r);
        let (bj, j) = (col / c, col % c);
        if bi == bj {
            a.get(i, j).clone()
        } else if bi == bj + 1 {
            b.get(i, j).clone()
        } else {
            Scalar::zero()
        }
    });
    (k + 1) * c - m.rank()
}

/// Multiplicities of minimal indices `ε` (blocks with `d₁ = ε + 1`, `d₂ = ε`).
fn minimal_indices(a: &Matrix, b: &Matrix) -> Vec<usize> {
    let c = a.cols();
    let generic_rank = if a.rows() == 0 {
        0
    } else {
        let mu = generic_point(b, a);
        b.sub(&a.scale(&mu)).rank()
    };
    let total = c - generic_rank;
    let mut n = Vec::new();
    let mut counts = Vec::new();
    let mut found = 0;
    for k in 0..c {
        if found == total {
            break;
        }
        n.push(poly_kernel_dim(a, b, k) as i64);
        let at = |j: i64| if j < 0 { 0 } else { n[j as usize] };
        let k = k as i64;
        let cnt = (at(k) - 2 * at(k - 1) + at(k - 2)) as usize;
        found += cnt;
        counts.push(cnt);
    }
    counts
}

/// Block bidiagonal `W_k`: `P − λQ` on the diagonal, `Q` below it.
fn bidiagonal_rank(p: &Matrix, q: &Matrix, lambda: &Scalar, k: usize) -> usize {
    let d = p.sub(&q.scale(lambda));
    let (r, c) = p.shape();
    Matrix::from_fn(k * r, k * c, |row, col| {
        let (bi, i) = (row / r, row % r);
        let (bj, j) = (col / c, col % c);
        if bi == bj {
            d.get(i, j).clone()
        } else if bi == bj + 1 {
            q.get(i, j).clone()
        } else {
            Scalar::zero()
        }
    })
    .rank()
}

/// A parameter where `P − μQ` has generic rank.
fn generic_point(p: &Matrix, q: &Matrix) -> Scalar {
    let bound = (p.rows() + p.cols() + 2) as i64;
    let mut best: Option<(usize, Scalar)> = None;
    for m in 0..=bound {
        let mu = Scalar::from_int(m);
        let r = p.sub(&q.scale(&mu)).rank();
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, mu));
        }
    }
    best.expect("at least one candidate").1
}

/// Jordan block sizes of the pencil `P − λQ` at `λ`.
fn pencil_jordan(p: &Matrix, q: &Matrix, lambda: &Scalar, generic: &Scalar) -> Vec<usize> {
    let mut defs = vec![0usize];
    let limit = p.rows().min(p.cols());
    for k in 1..=limit {
        let def = bidiagonal_rank(p, q, generic, k) - bidiagonal_rank(p, q, lambda, k);
        if def == defs[k - 1] {
            break;
        }
        defs.push(def);
    }
    let at_least = |j: usize| if j < defs.len() { defs[j] - defs[j - 1] } else { 0 };
    let mut sizes = Vec::new();
    for j in (1..defs.len()).rev() {
        for _ in 0..(at_least(j) - at_least(j + 1)) {
            sizes.push(j);
        }
    }
    sizes
}

/// `det(U(B − λA)V)` as a polynomial, by interpolation.
fn projected_det(a: &Matrix, b: &Matrix, u: &Matrix, v: &Matrix) -> UniPoly {
    let r = u.rows();
    let mut result = UniPoly::zero();
    // Newton-free Lagrange interpolation at 0..=r
    for j in 0..=r {
        let xj = Scalar::from_int(j as i64);
        let val = u.mul(&b.sub(&a.scale(&xj))).mul(v).det();
        if val.is_zero() {
            continue;
        }
        let mut basis = UniPoly::constant(val);
        for m in 0..=r {
            if m == j {
                continue;
            }
            let xm = Scalar::from_int(m as i64);
            let inv = (&xj - &xm).inv().expect("distinct nodes");
            basis = basis.mul(&UniPoly::linear_root(&xm)).scale(&inv);
        }
        result = result.add(&basis);
    }
    result
}

/// The finite eigenvalue polynomial of the regular part.
fn regular_char_poly(a: &Matrix, b: &Matrix, rank: usize) -> UniPoly {
    if rank == 0 {
        return UniPoly::one();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b52);
    let mut g: Option<UniPoly> = None;
    for _ in 0..3 {
        let u = Matrix::from_fn(rank, a.rows(), |_, _| Scalar::from_int(rng.random_range(-20..=20)));
        let v = Matrix::from_fn(a.cols(), rank, |_, _| Scalar::from_int(rng.random_range(-20..=20)));
        let p = projected_det(a, b, &u, &v);
        if p.is_zero() {
            continue;
        }
        g = Some(match g {
            None => p.monic(),
            Some(h) => h.gcd(&p).monic(),
        });
    }
    g.unwrap_or_else(UniPoly::one)
}

/// The multiset of series whose direct sum is isomorphic to `R`, sorted.
pub fn kronecker_decompose(r: &KroneckerRep, field: Field) -> Result<Vec<KroneckerLabel>, ClassifyError> {
    if r.a.shape() != (r.d2, r.d1) || r.b.shape() != (r.d2, r.d1) {
        return Err(ClassifyError::DimensionMismatch);
    }
    for m in [&r.a, &r.b] {
        for row in m.to_rows() {
            if row.iter().any(|x| !field.contains(x)) {
                return Err(ClassifyError::EntryOutsideField { field });
            }
        }
    }
    let mut out = Vec::new();
    for (eps, &c) in minimal_indices(&r.a, &r.b).iter().enumerate() {
        for _ in 0..c {
            out.push(if eps == 0 { KroneckerLabel::S1 } else { KroneckerLabel::S3(eps) });
        }
    }
    let (at, bt) = (r.a.transpose(), r.b.transpose());
    for (eta, &c) in minimal_indices(&at, &bt).iter().enumerate() {
        for _ in 0..c {
            out.push(if eta == 0 { KroneckerLabel::Sink } else { KroneckerLabel::S2(eta) });
        }
    }
    if r.d1 > 0 && r.d2 > 0 {
        let mu = generic_point(&r.b, &r.a);
        let rank = r.b.sub(&r.a.scale(&mu)).rank();
        let chi = regular_char_poly(&r.a, &r.b, rank);
        let (roots, rest) = roots_in_field(&chi, field);
        if rest.degree().unwrap_or(0) > 0 {
            return Err(ClassifyError::EigenvalueOutsideField { field });
        }
        for (lambda, _) in roots {
            for s in pencil_jordan(&r.b, &r.a, &lambda, &mu) {
                out.push(KroneckerLabel::S4(s, lambda.clone()));
            }
        }
        let nu = generic_point(&r.a, &r.b);
        for s in pencil_jordan(&r.a, &r.b, &Scalar::zero(), &nu) {
            out.push(KroneckerLabel::S5(s));
        }
    }
    let (s1, s2) = out.iter().fold((0, 0), |(x, y), l| {
        let (a, b) = l.dims();
        (x + a, y + b)
    });
    if (s1, s2) != (r.d1, r.d2) {
        return Err(ClassifyError::CertificationFailed);
    }
    out.sort();
    Ok(out)
}

/// Basis of the morphisms `(X₁, X₂) : R → R'` with `X₂A = A'X₁`, `X₂B = B'X₁`.
pub fn kronecker_hom_basis(r: &KroneckerRep, s: &KroneckerRep) -> Vec<(Matrix, Matrix)> {
    let (n1, n2) = (r.d1 * s.d1, r.d2 * s.d2);
    let unknowns = n1 + n2;
    if unknowns == 0 {
        return Vec::new();
    }
    // X₁ is s.d1 × r.d1, X₂ is s.d2 × r.d2
    let i1 = |a: usize, b: usize| a * r.d1 + b;
    let i2 = |a: usize, b: usize| n1 + a * r.d2 + b;
    let mut rows = Vec::new();
    for (m, ms) in [(&r.a, &s.a), (&r.b, &s.b)] {
        for row in 0..s.d2 {
            for col in 0..r.d1 {
                let mut eq = vec![Scalar::zero(); unknowns];
                for k in 0..r.d2 {
                    eq[i2(row, k)] += m.get(k, col);
                }
                for k in 0..s.d1 {
                    eq[i1(k, col)] -= ms.get(row, k);
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    let kernel: Vec<Vec<Scalar>> = if rows.is_empty() {
        (0..unknowns)
            .map(|u| {
                let mut e = vec![Scalar::zero(); unknowns];
                e[u] = Scalar::one();
                e
            })
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    kernel
        .into_iter()
        .map(|k| {
            (
                Matrix::from_fn(s.d1, r.d1, |a, b| k[i1(a, b)].clone()),
                Matrix::from_fn(s.d2, r.d2, |a, b| k[i2(a, b)].clone()),
            )
        })
        .collect()
}

/// An isomorphism `(X₁, X₂) : R → R'`, found as a seeded random element of
/// the Hom space and verified by multiplying back.
pub fn kronecker_isomorphism(r: &KroneckerRep, s: &KroneckerRep, seed: u64) -> Option<(Matrix, Matrix)> {
    if (r.d1, r.d2) != (s.d1, s.d2) {
        return None;
    }
    let basis = kronecker_hom_basis(r, s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let mut x1 = Matrix::zeros(r.d1, r.d1);
        let mut x2 = Matrix::zeros(r.d2, r.d2);
        for (b1, b2) in &basis {
            let c = Scalar::from_int(rng.random_range(-50..=50));
            x1 = x1.add(&b1.scale(&c));
            x2 = x2.add(&b2.scale(&c));
        }
        let ok = x2.mul(&r.a) == s.a.mul(&x1)
            && x2.mul(&r.b) == s.b.mul(&x1)
            && x1.is_invertible()
            && x2.is_invertible();
        if ok {
            return Some((x1, x2));
        }
    }
    None
}
