//! Maximal ideals and 𝔪-primary local ideals of `Dₙ = K[H₁..Hₙ]`.
//!
//! Generators are stored in shifted coordinates `h_j = H_j − λ_j`, where
//! `𝔪^i` is the monomial ideal of all terms of degree `≥ i`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::linalg::{rref, Matrix};
use super::multipoly::{poly_shift_all, Monomial, MultiPoly};
use super::Scalar;

/// `𝔪_λ = (H₁ − λ₁, …, Hₙ − λₙ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxIdeal {
    pub lambda: Vec<Scalar>,
}

impl MaxIdeal {
    pub fn new(lambda: Vec<Scalar>) -> Self {
        MaxIdeal { lambda }
    }

    pub fn origin(n: usize) -> Self {
        MaxIdeal {
            lambda: alloc::vec![Scalar::zero(); n],
        }
    }

    pub fn arity(&self) -> usize {
        self.lambda.len()
    }
}

/// Errors for local ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealError {
    NonPositiveOrder,
    ArityMismatch { expected: usize, found: usize },
    GeneratorOutsideMaximal { index: usize },
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::NonPositiveOrder => f.write_str("nilpotency order must be at least 1"),
            IdealError::ArityMismatch { expected, found } => {
                write!(f, "generator has {} variables, expected {}", found, expected)
            }
            IdealError::GeneratorOutsideMaximal { index } => {
                write!(f, "generator {} does not lie in the maximal ideal", index)
            }
        }
    }
}

/// An ideal `I` with `𝔪 ⊇ I ⊇ 𝔪^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalIdeal {
    center: MaxIdeal,
    order: u32,
    generators: Vec<MultiPoly>,
}

impl LocalIdeal {
    /// `I = (generators) + 𝔪^order`, generators in shifted coordinates.
    pub fn new(center: MaxIdeal, order: i64, generators: Vec<MultiPoly>) -> Result<Self, IdealError> {
        if order <= 0 {
            return Err(IdealError::NonPositiveOrder);
        }
        let n = center.arity();
        for (k, g) in generators.iter().enumerate() {
            if g.arity() != n {
                return Err(IdealError::ArityMismatch {
                    expected: n,
                    found: g.arity(),
                });
            }
            if !g.coeff(&Monomial::one(n)).is_zero() {
                return Err(IdealError::GeneratorOutsideMaximal { index: k });
            }
        }
        Ok(LocalIdeal {
            center,
            order: order as u32,
            generators,
        })
    }

    /// Same as [`LocalIdeal::new`] with generators written in `H` coordinates.
    pub fn from_h_coordinates(
        center: MaxIdeal,
        order: i64,
        generators: &[MultiPoly],
    ) -> Result<Self, IdealError> {
        let shifted = generators
            .iter()
            .map(|g| poly_shift_all(g, &center.lambda))
            .collect();
        LocalIdeal::new(center, order, shifted)
    }

    /// `𝔪^i`.
    pub fn power_of_maximal(center: MaxIdeal, order: i64) -> Result<Self, IdealError> {
        LocalIdeal::new(center, order, Vec::new())
    }

    pub fn center(&self) -> &MaxIdeal {
        &self.center
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn arity(&self) -> usize {
        self.center.arity()
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// Converts a polynomial in `H` coordinates to shifted coordinates.
    pub fn to_shifted(&self, p: &MultiPoly) -> MultiPoly {
        poly_shift_all(p, &self.center.lambda)
    }

    /// Converts a polynomial in shifted coordinates back to `H` coordinates.
    pub fn to_h(&self, p: &MultiPoly) -> MultiPoly {
        let neg: Vec<Scalar> = self.center.lambda.iter().map(|x| -x).collect();
        poly_shift_all(p, &neg)
    }

    pub fn quotient_basis(&self) -> QuotientBasis {
        QuotientBasis::compute(self)
    }
}

/// Basis and normal form of `Dₙ/I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    n: usize,
    order: u32,
    standard: Vec<Monomial>,
    /// pivot monomial → reduced row of `I` (pivot coefficient 1)
    reducers: BTreeMap<Monomial, MultiPoly>,
}

impl QuotientBasis {
    fn compute(ideal: &LocalIdeal) -> Self {
        let n = ideal.arity();
        let i = ideal.order;
        let mut cols = Monomial::below_degree(n, i);
        cols.reverse();
        let index: BTreeMap<Monomial, usize> =
            cols.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for g in &ideal.generators {
            for m in &cols {
                if m.degree() + g.order().unwrap_or(i) >= i {
                    continue;
                }
                let prod = g.mul(&MultiPoly::term(m.clone(), Scalar::one())).truncate(i);
                if prod.is_zero() {
                    continue;
                }
                let mut row = alloc::vec![Scalar::zero(); cols.len()];
                for (mm, c) in prod.terms() {
                    row[index[mm]] = c.clone();
                }
                rows.push(row);
            }
        }
        let mut reducers = BTreeMap::new();
        let mut is_pivot = alloc::vec![false; cols.len()];
        if !rows.is_empty() {
            let r = rref(&Matrix::from_rows(rows));
            for (k, &c) in r.pivots.iter().enumerate() {
                is_pivot[c] = true;
                let mut p = MultiPoly::zero(n);
                for (j, m) in cols.iter().enumerate() {
                    p.add_term(m.clone(), r.matrix.get(k, j).clone());
                }
                reducers.insert(cols[c].clone(), p);
            }
        }
        let mut standard: Vec<Monomial> = cols
            .iter()
            .zip(&is_pivot)
            .filter(|(_, p)| !**p)
            .map(|(m, _)| m.clone())
            .collect();
        standard.sort();
        QuotientBasis {
            n,
            order: i,
            standard,
            reducers,
        }
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Surviving monomials in increasing graded-lex order.
    pub fn monomials(&self) -> &[Monomial] {
        &self.standard
    }

    /// Rows spanning `I` modulo `𝔪^i`, one per leading monomial.
    pub fn ideal_rows(&self) -> impl Iterator<Item = &MultiPoly> {
        self.reducers.values()
    }

    /// Normal form of `p` (shifted coordinates).
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let mut r = p.truncate(self.order);
        for (m, row) in self.reducers.iter().rev() {
            let c = r.coeff(m);
            if !c.is_zero() {
                r = r.sub(&row.scale(&c));
            }
        }
        r
    }

    /// Coordinates of the normal form of `p` on [`QuotientBasis::monomials`].
    pub fn coordinates(&self, p: &MultiPoly) -> Vec<Scalar> {
        let r = self.reduce(p);
        self.standard.iter().map(|m| r.coeff(m)).collect()
    }

    /// Matrix of multiplication by `h_j` on the quotient basis.
    pub fn multiplication_matrix(&self, j: usize) -> Matrix {
        let d = self.dim();
        let hj = MultiPoly::var(self.n, j);
        let mut m = Matrix::zeros(d, d);
        for (c, b) in self.standard.iter().enumerate() {
            let img = hj.mul(&MultiPoly::term(b.clone(), Scalar::one()));
            for (r, v) in self.coordinates(&img).into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }
}

/// Normal form of `p` (shifted coordinates) modulo `I`.
pub fn reduce_mod(ideal: &LocalIdeal, p: &MultiPoly) -> MultiPoly {
    ideal.quotient_basis().reduce(p)
}
