//! Sparse polynomials in `H₁..Hₙ` under the graded-lexicographic order.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::Scalar;

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// `h_j` (0-based slot).
    pub fn var(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials in `n` variables of total degree `< bound`, ascending.
    pub fn below_degree(n: usize, bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..bound {
            let mut e = vec![0u32; n];
            all_of_degree(n, d, 0, &mut e, &mut out);
        }
        out.sort();
        out
    }
}

fn all_of_degree(n: usize, left: u32, slot: usize, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if n == 0 {
        if left == 0 {
            out.push(Monomial(e.clone()));
        }
        return;
    }
    if slot == n - 1 {
        e[slot] = left;
        out.push(Monomial(e.clone()));
        e[slot] = 0;
        return;
    }
    for k in 0..=left {
        e[slot] = k;
        all_of_degree(n, left - k, slot + 1, e, out);
    }
    e[slot] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    coeffs: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        MultiPoly::term(Monomial::one(n), c)
    }

    /// The variable `H_j` (0-based).
    pub fn var(n: usize, j: usize) -> Self {
        MultiPoly::term(Monomial::var(n, j), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(m.arity());
        p.add_term(m, c);
        p
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree among the terms, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next().map(Monomial::degree)
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.arity(), self.n, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(m.clone()).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (m, c) in o.terms() {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        let mut r = MultiPoly::zero(self.n);
        for (m, c) in self.terms() {
            r.add_term(m.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero(self.n);
        for (a, ca) in self.terms() {
            for (b, cb) in o.terms() {
                r.add_term(a.mul(b), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut r = MultiPoly::constant(self.n, Scalar::one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Drops every term of total degree `≥ bound`.
    pub fn truncate(&self, bound: u32) -> MultiPoly {
        MultiPoly {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (xi, e) in x.iter().zip(&m.0) {
                t = &t * &xi.pow(*e);
            }
            acc += &t;
        }
        acc
    }
}

/// Substitutes `H_j ↦ H_j + d` (0-based `j`) and expands exactly.
pub fn poly_shift(p: &MultiPoly, j: usize, d: &Scalar) -> MultiPoly {
    assert!(j < p.arity(), "slot index out of range");
    let n = p.arity();
    let mut lin = MultiPoly::var(n, j);
    lin.add_term(Monomial::one(n), d.clone());
    let mut r = MultiPoly::zero(n);
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let k = rest.0[j];
        rest.0[j] = 0;
        let t = MultiPoly::term(rest, c.clone()).mul(&lin.pow(k));
        r = r.add(&t);
    }
    r
}

/// Substitutes `H_j ↦ H_j + d_j` in every slot.
pub fn poly_shift_all(p: &MultiPoly, d: &[Scalar]) -> MultiPoly {
    let mut r = p.clone();
    for (j, dj) in d.iter().enumerate() {
        if !dj.is_zero() {
            r = poly_shift(&r, j, dj);
        }
    }
    r
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.coeffs.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (j, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*H_{}", j + 1)?,
                    _ => write!(f, "*H_{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
