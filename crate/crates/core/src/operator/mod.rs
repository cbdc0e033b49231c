//! Canonical-form elements of `𝕀ₙ`.
//!
//! Each slot carries a basis term `H^k∂^i`, `H^k`, `∫^iH^k` or `e_{st}`; an
//! [`Operator`] is a sparse combination of `n`-fold tensors of such terms.

mod expr;
mod ideal;
mod mul;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::algebra_base::Scalar;

pub use expr::{Expr, Generator};
pub use ideal::{
    left_ideal_obstruction, principal_left_ideal_membership, LeftGenerator, Membership,
    ObstructionCoord,
};
pub use mul::mul_basis1;

/// Errors from operator construction and arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorError {
    ArityMismatch { left: usize, right: usize },
    SlotOutOfRange { slot: usize, arity: usize },
    NegativePower(i64),
    ArityNotOne(usize),
    UnsupportedGenerator,
}

impl fmt::Display for OperatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorError::ArityMismatch { left, right } => {
                write!(f, "arity mismatch: {} vs {}", left, right)
            }
            OperatorError::SlotOutOfRange { slot, arity } => {
                write!(f, "slot {} out of range for arity {}", slot + 1, arity)
            }
            OperatorError::NegativePower(e) => write!(f, "negative power {} not allowed", e),
            OperatorError::ArityNotOne(n) => write!(f, "operation needs arity 1, got {}", n),
            OperatorError::UnsupportedGenerator => {
                f.write_str("only d and H - lambda generate supported left ideals")
            }
        }
    }
}

/// One slot of a canonical basis term.
///
/// The derived order is the printing order: `DPow < HPow < IPow < E`, then
/// indices lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisTerm1 {
    /// `H^k ∂^i`, `i ≥ 1`.
    DPow { i: u32, k: u32 },
    /// `H^k`.
    HPow { k: u32 },
    /// `∫^i H^k`, `i ≥ 1`.
    IPow { i: u32, k: u32 },
    /// `e_{st}`.
    E { s: u32, t: u32 },
}

impl BasisTerm1 {
    pub const ONE: BasisTerm1 = BasisTerm1::HPow { k: 0 };

    /// Graded degree of the term.
    pub fn degree(&self) -> i64 {
        match *self {
            BasisTerm1::DPow { i, .. } => -(i as i64),
            BasisTerm1::HPow { .. } => 0,
            BasisTerm1::IPow { i, .. } => i as i64,
            BasisTerm1::E { s, t } => s as i64 - t as i64,
        }
    }

    pub fn is_e(&self) -> bool {
        matches!(self, BasisTerm1::E { .. })
    }

    /// Image under the involution.
    pub fn star(&self) -> BasisTerm1 {
        match *self {
            BasisTerm1::DPow { i, k } => BasisTerm1::IPow { i, k },
            BasisTerm1::IPow { i, k } => BasisTerm1::DPow { i, k },
            BasisTerm1::HPow { k } => BasisTerm1::HPow { k },
            BasisTerm1::E { s, t } => BasisTerm1::E { s: t, t: s },
        }
    }
}

/// An `n`-fold tensor of slot terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisTermN(pub Vec<BasisTerm1>);

impl BasisTermN {
    pub fn one(n: usize) -> Self {
        BasisTermN(vec![BasisTerm1::ONE; n])
    }

    /// `term` in slot `j`, identity elsewhere.
    pub fn single(n: usize, j: usize, term: BasisTerm1) -> Self {
        let mut v = vec![BasisTerm1::ONE; n];
        v[j] = term;
        BasisTermN(v)
    }

    pub fn degree(&self) -> Vec<i64> {
        self.0.iter().map(BasisTerm1::degree).collect()
    }
}

/// An element of `𝕀ₙ` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Operator {
    n: usize,
    terms: BTreeMap<BasisTermN, Scalar>,
}

impl Operator {
    pub fn zero(n: usize) -> Self {
        Operator {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Operator::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Operator::from_term(BasisTermN::one(n), c)
    }

    pub fn from_term(t: BasisTermN, c: Scalar) -> Self {
        let mut r = Operator::zero(t.0.len());
        r.add_term(t, c);
        r
    }

    /// `term` placed in slot `j` (0-based).
    pub fn slot_term(n: usize, j: usize, term: BasisTerm1) -> Self {
        Operator::from_term(BasisTermN::single(n, j, term), Scalar::one())
    }

    /// `∂_j`.
    pub fn d(n: usize, j: usize) -> Self {
        Operator::slot_term(n, j, BasisTerm1::DPow { i: 1, k: 0 })
    }

    /// `∫_j`.
    pub fn int(n: usize, j: usize) -> Self {
        Operator::slot_term(n, j, BasisTerm1::IPow { i: 1, k: 0 })
    }

    /// `H_j = ∂_j x_j`.
    pub fn h(n: usize, j: usize) -> Self {
        Operator::slot_term(n, j, BasisTerm1::HPow { k: 1 })
    }

    /// `x_j = ∫_j H_j`.
    pub fn x(n: usize, j: usize) -> Self {
        Operator::slot_term(n, j, BasisTerm1::IPow { i: 1, k: 1 })
    }

    /// `e_{st}` in slot `j`.
    pub fn e(n: usize, j: usize, s: u32, t: u32) -> Self {
        Operator::slot_term(n, j, BasisTerm1::E { s, t })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &BasisTermN) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisTermN, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, t: BasisTermN, c: Scalar) {
        assert_eq!(t.0.len(), self.n, "basis term arity mismatch");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Operator {
        let mut r = Operator::zero(self.n);
        for (t, c) in self.terms() {
            r.add_term(t.clone(), c * s);
        }
        r
    }

    pub fn checked_add(&self, o: &Operator) -> Result<Operator, OperatorError> {
        self.same_arity(o)?;
        let mut r = self.clone();
        for (t, c) in o.terms() {
            r.add_term(t.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Operator) -> Result<Operator, OperatorError> {
        self.checked_add(&o.scale(&-Scalar::one()))
    }

    pub fn checked_mul(&self, o: &Operator) -> Result<Operator, OperatorError> {
        self.same_arity(o)?;
        Ok(mul::mul_operators(self, o))
    }

    pub fn pow(&self, e: u32) -> Operator {
        let mut r = Operator::one(self.n);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, o: &Operator) -> Result<Operator, OperatorError> {
        self.checked_mul(o)?.checked_sub(&o.checked_mul(self)?)
    }

    fn same_arity(&self, o: &Operator) -> Result<(), OperatorError> {
        if self.n != o.n {
            return Err(OperatorError::ArityMismatch {
                left: self.n,
                right: o.n,
            });
        }
        Ok(())
    }

    /// Homogeneous components keyed by degree in `ℤⁿ`.
    pub fn graded_components(&self) -> BTreeMap<Vec<i64>, Operator> {
        let mut out: BTreeMap<Vec<i64>, Operator> = BTreeMap::new();
        for (t, c) in self.terms() {
            out.entry(t.degree())
                .or_insert_with(|| Operator::zero(self.n))
                .add_term(t.clone(), c.clone());
        }
        out
    }

    /// The degree if the operator is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<Vec<i64>> {
        let comps = self.graded_components();
        if comps.len() == 1 {
            comps.into_keys().next()
        } else {
            None
        }
    }

    /// The involution `∂ ↔ ∫`, `H` fixed, `e_{st} ↦ e_{ts}`, conjugate-free.
    pub fn involution(&self) -> Operator {
        let mut r = Operator::zero(self.n);
        for (t, c) in self.terms() {
            r.add_term(BasisTermN(t.0.iter().map(BasisTerm1::star).collect()), c.clone());
        }
        r
    }

    /// Membership in `𝔭_I = Σ_{i∈I} 𝔭_i`: every term has an `e` factor in a slot of `I`.
    pub fn in_prime_sum(&self, slots: &[usize]) -> bool {
        self.terms()
            .all(|(t, _)| slots.iter().any(|&j| j < self.n && t.0[j].is_e()))
    }

    /// Drops every term with an `e` factor, giving the representative in `𝕀ₙ/𝔞ₙ`.
    pub fn quotient_mod_an(&self) -> Operator {
        let mut r = Operator::zero(self.n);
        for (t, c) in self.terms() {
            if !t.0.iter().any(BasisTerm1::is_e) {
                r.add_term(t.clone(), c.clone());
            }
        }
        r
    }

    /// Largest positive degree over all slots and terms (0 if none).
    pub fn max_positive_degree(&self) -> u32 {
        self.terms()
            .flat_map(|(t, _)| t.0.iter().map(BasisTerm1::degree))
            .filter(|d| *d > 0)
            .max()
            .unwrap_or(0) as u32
    }

    /// A degree bound `B` such that the operator is zero iff its action on
    /// all `x^[α]` with `α ∈ [0, B]ⁿ` vanishes.
    pub fn index_bound(&self) -> u32 {
        let mut max_e = 0;
        let mut max_d = 0;
        let mut max_h = 0;
        for (t, _) in self.terms() {
            for s in &t.0 {
                match *s {
                    BasisTerm1::DPow { i, k } => {
                        max_d = max_d.max(i);
                        max_h = max_h.max(k);
                    }
                    BasisTerm1::HPow { k } => max_h = max_h.max(k),
                    BasisTerm1::IPow { k, .. } => max_h = max_h.max(k),
                    BasisTerm1::E { s, t } => max_e = max_e.max(s.max(t)),
                }
            }
        }
        max_e + max_d + max_h + 1
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// Panics on arity mismatch; see [`Operator::checked_mul`].
    fn mul(self, o: &Operator) -> Operator {
        self.checked_mul(o).expect("operator arity mismatch")
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, o: &Operator) -> Operator {
        self.checked_add(o).expect("operator arity mismatch")
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, o: &Operator) -> Operator {
        self.checked_sub(o).expect("operator arity mismatch")
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale(&-Scalar::one())
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, t: &BasisTerm1, slot: usize) -> fmt::Result {
    let pow = |f: &mut fmt::Formatter<'_>, name: &str, e: u32| -> fmt::Result {
        if e == 1 {
            write!(f, "{}_{}", name, slot + 1)
        } else {
            write!(f, "{}_{}^{}", name, slot + 1, e)
        }
    };
    match *t {
        BasisTerm1::DPow { i, k } => {
            if k > 0 {
                pow(f, "H", k)?;
                f.write_str("*")?;
            }
            pow(f, "d", i)
        }
        BasisTerm1::HPow { k } => pow(f, "H", k),
        BasisTerm1::IPow { i, k } => {
            pow(f, "int", i)?;
            if k > 0 {
                f.write_str("*")?;
                pow(f, "H", k)?;
            }
            Ok(())
        }
        BasisTerm1::E { s, t } => write!(f, "e[{},{}]_{}", s, t, slot + 1),
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, t: &BasisTermN) -> fmt::Result {
    let mut first = true;
    for (j, s) in t.0.iter().enumerate() {
        if *s == BasisTerm1::ONE {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write_factor(f, s, j)?;
    }
    Ok(())
}

fn is_negative(c: &Scalar) -> bool {
    if c.re().is_zero() {
        c.im().is_negative()
    } else {
        c.re().is_negative()
    }
}

/// A scalar in expression syntax, parenthesized when it has two parts.
pub fn scalar_expr(c: &Scalar) -> alloc::string::String {
    use alloc::format;
    if !c.re().is_zero() && !c.im().is_zero() {
        format!("({})", c)
    } else {
        format!("{}", c)
    }
}

impl fmt::Display for Operator {
    /// Canonical text form, parseable by the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (t, c)) in self.terms().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c } else { c.clone() };
            match (idx == 0, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            let is_one_term = t.0.iter().all(|s| *s == BasisTerm1::ONE);
            if is_one_term {
                f.write_str(&scalar_expr(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", scalar_expr(&abs))?;
                }
                write_monomial(f, t)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
