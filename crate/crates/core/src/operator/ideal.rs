//! Principal left ideals `𝕀₁∂` and `𝕀₁(H − λ)`.

use alloc::collections::BTreeMap;

use super::mul::Graded;
use super::{BasisTerm1, BasisTermN, Operator, OperatorError};
use crate::algebra_base::{Scalar, UniPoly};

/// A supported left ideal generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeftGenerator {
    D,
    HMinus(Scalar),
}

impl LeftGenerator {
    /// Recognizes `∂` or `H − λ` (up to a nonzero scalar) in arity 1.
    pub fn from_operator(g: &Operator) -> Result<LeftGenerator, OperatorError> {
        if g.arity() != 1 {
            return Err(OperatorError::ArityNotOne(g.arity()));
        }
        let d = BasisTermN(alloc::vec![BasisTerm1::DPow { i: 1, k: 0 }]);
        let h = BasisTermN(alloc::vec![BasisTerm1::HPow { k: 1 }]);
        let one = BasisTermN(alloc::vec![BasisTerm1::ONE]);
        let terms: alloc::vec::Vec<_> = g.terms().collect();
        if terms.len() == 1 && *terms[0].0 == d {
            return Ok(LeftGenerator::D);
        }
        let ch = g.coeff(&h);
        let known = terms.iter().all(|(t, _)| **t == h || **t == one);
        match ch.inv() {
            Some(inv) if known => Ok(LeftGenerator::HMinus(-&(&g.coeff(&one) * &inv))),
            _ => Err(OperatorError::UnsupportedGenerator),
        }
    }

    pub fn to_operator(&self) -> Operator {
        match self {
            LeftGenerator::D => Operator::d(1, 0),
            LeftGenerator::HMinus(l) => &Operator::h(1, 0) - &Operator::scalar(1, l.clone()),
        }
    }
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `witness · gen = a`.
    Member { witness: Operator },
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Coordinates of the obstruction to membership in `𝕀₁(H − λ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ObstructionCoord {
    /// Remainder of the degree-`d` part modulo its shifted linear factor.
    Degree(i64),
    /// Coefficient of `e_{s, λ−1}`.
    Column { s: u32 },
}

fn check_arity(a: &Operator) -> Result<(), OperatorError> {
    if a.arity() != 1 {
        return Err(OperatorError::ArityNotOne(a.arity()));
    }
    Ok(())
}

/// Linear map whose kernel is exactly `𝕀₁(H − λ)`.
///
/// Writing `a = Σ L_d(H) v_d + Σ c_{st} e_{st}`, one has
/// `w·(H − λ) = Σ L^w_d(H)(H − d − λ) v_d + Σ c^w_{st}(t + 1 − λ) e_{st}`,
/// so the obstruction is `L_d(d + λ)` for each `d` and the coefficients of
/// `e_{st}` with `t + 1 = λ`.
pub fn left_ideal_obstruction(
    a: &Operator,
    lambda: &Scalar,
) -> Result<BTreeMap<ObstructionCoord, Scalar>, OperatorError> {
    check_arity(a)?;
    let g = Graded::from_terms(a.terms().map(|(t, c)| (&t.0[0], c)));
    let mut out = BTreeMap::new();
    for (d, l) in &g.parts {
        let v = l.eval(&(lambda + &Scalar::from_int(*d)));
        if !v.is_zero() {
            out.insert(ObstructionCoord::Degree(*d), v);
        }
    }
    for ((s, t), c) in &g.e {
        if Scalar::from_int(*t as i64 + 1) == *lambda {
            out.insert(ObstructionCoord::Column { s: *s }, c.clone());
        }
    }
    Ok(out)
}

/// Decides `a ∈ 𝕀₁·gen` and returns a witness when it holds.
pub fn principal_left_ideal_membership(
    a: &Operator,
    gen: &LeftGenerator,
) -> Result<Membership, OperatorError> {
    check_arity(a)?;
    match gen {
        LeftGenerator::D => {
            // a = w∂ implies a∫∂ = w∂∫∂ = a
            let w = a * &Operator::int(1, 0);
            if &w * &Operator::d(1, 0) == *a {
                Ok(Membership::Member { witness: w })
            } else {
                Ok(Membership::NotMember)
            }
        }
        LeftGenerator::HMinus(lambda) => {
            if !left_ideal_obstruction(a, lambda)?.is_empty() {
                return Ok(Membership::NotMember);
            }
            let g = Graded::from_terms(a.terms().map(|(t, c)| (&t.0[0], c)));
            let mut w = Graded::default();
            for (d, l) in &g.parts {
                let lin = UniPoly::linear_root(&(lambda + &Scalar::from_int(*d)));
                let (q, _) = l.div_rem(&lin);
                w.parts.insert(*d, q);
            }
            for ((s, t), c) in &g.e {
                let f = &Scalar::from_int(*t as i64 + 1) - lambda;
                let inv = f.inv().expect("reachable column");
                w.e.insert((*s, *t), c * &inv);
            }
            let mut witness = Operator::zero(1);
            for (t, c) in w.into_terms() {
                witness.add_term(BasisTermN(alloc::vec![t]), c);
            }
            Ok(Membership::Member { witness })
        }
    }
}
