//! The action of `𝕀ₙ` on `Pₙ = K[x₁..xₙ]` in the divided-power basis
//! `x^[α] = x^α/α!`, truncated to `α ∈ [0, N]ⁿ`.
//!
//! [`act_generator`] is written directly from the generator formulas and is
//! independent of the canonical-form multiplication; it is the oracle used to
//! check every structure constant.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra_base::{Matrix, Scalar};
use crate::operator::{BasisTerm1, BasisTermN, Generator, Operator};

/// A sparse vector in `Pₙ`: exponent vector → coefficient.
pub type Poly = BTreeMap<Vec<u32>, Scalar>;

/// Monomials `x^[α]`, `α ∈ [0, N]ⁿ`, in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedSpace {
    pub n: usize,
    pub bound: u32,
}

impl TruncatedSpace {
    pub fn new(n: usize, bound: u32) -> Self {
        TruncatedSpace { n, bound }
    }

    pub fn dim(&self) -> usize {
        (self.bound as usize + 1).pow(self.n as u32)
    }

    pub fn index(&self, alpha: &[u32]) -> Option<usize> {
        let b = self.bound as usize + 1;
        let mut idx = 0;
        for &a in alpha {
            if a > self.bound {
                return None;
            }
            idx = idx * b + a as usize;
        }
        Some(idx)
    }

    pub fn alpha(&self, mut idx: usize) -> Vec<u32> {
        let b = self.bound as usize + 1;
        let mut out = vec![0; self.n];
        for j in (0..self.n).rev() {
            out[j] = (idx % b) as u32;
            idx /= b;
        }
        out
    }

    pub fn basis(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.dim()).map(move |i| self.alpha(i))
    }
}

/// One generator applied to `x^[α]`, straight from the defining formulas.
pub fn act_generator(g: Generator, slot: usize, alpha: &[u32]) -> Poly {
    let mut out = Poly::new();
    let a = alpha[slot];
    let mut beta = alpha.to_vec();
    match g {
        Generator::X => {
            // x·x^s/s! = (s+1)·x^{s+1}/(s+1)!
            beta[slot] = a + 1;
            out.insert(beta, Scalar::from_int(a as i64 + 1));
        }
        Generator::D => {
            if a > 0 {
                beta[slot] = a - 1;
                out.insert(beta, Scalar::one());
            }
        }
        Generator::Int => {
            beta[slot] = a + 1;
            out.insert(beta, Scalar::one());
        }
        Generator::H => {
            out.insert(beta, Scalar::from_int(a as i64 + 1));
        }
        Generator::E { s, t } => {
            if a == t {
                beta[slot] = s;
                out.insert(beta, Scalar::one());
            }
        }
    }
    out
}

/// A canonical basis term applied to `x^[α]`; the image is a single monomial.
pub fn act_term(t: &BasisTermN, alpha: &[u32]) -> Option<(Vec<u32>, Scalar)> {
    let mut beta = alpha.to_vec();
    let mut c = Scalar::one();
    for (j, s) in t.0.iter().enumerate() {
        let a = alpha[j];
        match *s {
            BasisTerm1::DPow { i, k } => {
                if a < i {
                    return None;
                }
                beta[j] = a - i;
                c = &c * &Scalar::from_int((a - i) as i64 + 1).pow(k);
            }
            BasisTerm1::HPow { k } => c = &c * &Scalar::from_int(a as i64 + 1).pow(k),
            BasisTerm1::IPow { i, k } => {
                beta[j] = a + i;
                c = &c * &Scalar::from_int(a as i64 + 1).pow(k);
            }
            BasisTerm1::E { s, t } => {
                if a != t {
                    return None;
                }
                beta[j] = s;
            }
        }
    }
    Some((beta, c))
}

fn add_into(acc: &mut Poly, m: Vec<u32>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(m.clone()).or_insert_with(Scalar::zero);
    *e += &c;
    if e.is_zero() {
        acc.remove(&m);
    }
}

/// `a · p`.
pub fn apply(a: &Operator, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (alpha, c) in p {
        for (t, ct) in a.terms() {
            if let Some((beta, k)) = act_term(t, alpha) {
                add_into(&mut out, beta, &(c * ct) * &k);
            }
        }
    }
    out
}

/// `g_1 g_2 ⋯ g_k · p` using only [`act_generator`].
pub fn apply_word(word: &[(Generator, usize)], p: &Poly) -> Poly {
    let mut cur = p.clone();
    for &(g, slot) in word.iter().rev() {
        let mut next = Poly::new();
        for (alpha, c) in &cur {
            for (beta, k) in act_generator(g, slot, alpha) {
                add_into(&mut next, beta, c * &k);
            }
        }
        cur = next;
    }
    cur
}

/// An exact action matrix from `[0, N_in]ⁿ` into `[0, N_out]ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    pub n: usize,
    pub n_in: u32,
    pub n_out: u32,
    pub matrix: Matrix,
}

impl ActionMatrix {
    fn from_columns(n: usize, n_in: u32, n_out: u32, cols: impl Fn(&[u32]) -> Poly) -> Self {
        let dom = TruncatedSpace::new(n, n_in);
        let cod = TruncatedSpace::new(n, n_out);
        let mut m = Matrix::zeros(cod.dim(), dom.dim());
        for (c, alpha) in dom.basis().enumerate() {
            for (beta, v) in cols(&alpha) {
                let r = cod.index(&beta).expect("image within output bound");
                m.set(r, c, v);
            }
        }
        ActionMatrix {
            n,
            n_in,
            n_out,
            matrix: m,
        }
    }

    /// Nonzero entries keyed by (output monomial, input monomial).
    pub fn entries(&self) -> BTreeMap<(Vec<u32>, Vec<u32>), Scalar> {
        let dom = TruncatedSpace::new(self.n, self.n_in);
        let cod = TruncatedSpace::new(self.n, self.n_out);
        let mut out = BTreeMap::new();
        for c in 0..self.matrix.cols() {
            for r in 0..self.matrix.rows() {
                let v = self.matrix.get(r, c);
                if !v.is_zero() {
                    out.insert((cod.alpha(r), dom.alpha(c)), v.clone());
                }
            }
        }
        out
    }

    /// Same linear map on the same domain, whatever the output bounds.
    pub fn same_action(&self, o: &ActionMatrix) -> bool {
        self.n == o.n && self.n_in == o.n_in && self.entries() == o.entries()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// The matrix of `a` on `[0, N]ⁿ`, with `N_out = N + (max positive degree)`.
pub fn to_matrix(a: &Operator, n_in: u32) -> ActionMatrix {
    let n_out = n_in + a.max_positive_degree();
    ActionMatrix::from_columns(a.arity(), n_in, n_out, |alpha| {
        let mut p = Poly::new();
        p.insert(alpha.to_vec(), Scalar::one());
        apply(a, &p)
    })
}

fn generator_raise(g: Generator) -> u32 {
    match g {
        Generator::X | Generator::Int => 1,
        Generator::E { s, t } => s.saturating_sub(t),
        _ => 0,
    }
}

/// The composed generator matrices of a word on `[0, N]ⁿ`.
pub fn word_matrix(word: &[(Generator, usize)], n: usize, n_in: u32) -> ActionMatrix {
    let n_out = n_in + word.iter().map(|(g, _)| generator_raise(*g)).sum::<u32>();
    ActionMatrix::from_columns(n, n_in, n_out, |alpha| {
        let mut p = Poly::new();
        p.insert(alpha.to_vec(), Scalar::one());
        apply_word(word, &p)
    })
}

/// Faithfulness test: `a = 0` iff its action vanishes below its index bound.
pub fn acts_as_zero(a: &Operator) -> bool {
    to_matrix(a, a.index_bound()).is_zero()
}

/// `⊗ e_{β_i α_i}`, which sends `x^[α]` to `x^[β]`.
pub fn transporter(alpha: &[u32], beta: &[u32]) -> Operator {
    let t = BasisTermN(
        alpha
            .iter()
            .zip(beta)
            .map(|(&a, &b)| BasisTerm1::E { s: b, t: a })
            .collect(),
    );
    Operator::from_term(t, Scalar::one())
}
