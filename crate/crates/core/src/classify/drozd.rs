//! Tame/wild verdict for `D₂/I` with `I` an `𝔪`-primary local ideal.

use alloc::vec;
use alloc::vec::Vec;

use super::ClassifyError;
use crate::algebra_base::{span_basis, Field, LocalIdeal, Monomial, MultiPoly, Scalar};

/// Which condition decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TameReason {
    /// `I ⊇ 𝔪²`.
    OrderAtMostTwo,
    /// `I ⊄ 𝔪²`, so `D₂/I` is uniserial.
    LinearElement,
    /// `I` contains `ℓ₁ℓ₂` modulo `𝔪³` with independent linear forms.
    SplitQuadratic,
    /// The quadratic part of `I` is spanned by one form not splitting over the field.
    NonSplitQuadratic,
    /// The quadratic part is a square `ℓ²`.
    SquareQuadratic,
    /// `I ⊆ 𝔪³`.
    NoQuadratic,
}

/// `form = left · right` in shifted coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub form: MultiPoly,
    pub left: MultiPoly,
    pub right: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameVerdict {
    pub tame: bool,
    /// Tame after passing to the algebraic closure.
    pub over_closure: bool,
    pub reason: TameReason,
    pub witness: Option<Factorization>,
}

fn quad_monomials() -> [Monomial; 3] {
    [
        Monomial(vec![2, 0]),
        Monomial(vec![1, 1]),
        Monomial(vec![0, 2]),
    ]
}

fn discriminant(q: &[Scalar]) -> Scalar {
    &(&q[1] * &q[1]) - &(&Scalar::from_int(4) * &(&q[0] * &q[2]))
}

fn linear(a: Scalar, b: Scalar) -> MultiPoly {
    let mut p = MultiPoly::zero(2);
    p.add_term(Monomial(vec![1, 0]), a);
    p.add_term(Monomial(vec![0, 1]), b);
    p
}

/// Splits `a x² + b xy + c y²` given `δ² = b² − 4ac ≠ 0`.
fn factor(q: &[Scalar], delta: &Scalar) -> Factorization {
    let [m20, m11, m02] = quad_monomials();
    let mut form = MultiPoly::zero(2);
    form.add_term(m20, q[0].clone());
    form.add_term(m11, q[1].clone());
    form.add_term(m02, q[2].clone());
    let (left, right) = if q[0].is_zero() {
        (linear(Scalar::zero(), Scalar::one()), linear(q[1].clone(), q[2].clone()))
    } else {
        let two_a = &Scalar::from_int(2) * &q[0];
        let inv = two_a.inv().expect("a ≠ 0");
        let r_plus = &(&(-&q[1]) + delta) * &inv;
        let r_minus = &(&(-&q[1]) - delta) * &inv;
        (
            linear(q[0].clone(), -&(&q[0] * &r_plus)),
            linear(Scalar::one(), -&r_minus),
        )
    };
    debug_assert_eq!(left.mul(&right), form);
    Factorization { form, left, right }
}

fn split(q: &[Scalar], field: Field) -> Option<Factorization> {
    let d = discriminant(q);
    if d.is_zero() {
        return None;
    }
    d.sqrt_in(field).map(|delta| factor(q, &delta))
}

/// Integer pairs `(s, t) ≠ 0` with `max(|s|, |t|) ≤ r`, by increasing radius.
fn grid(r: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..=r).flat_map(move |k| {
        (-k..=k).flat_map(move |s| {
            (-k..=k)
                .filter(move |t| s.abs().max(t.abs()) == k)
                .map(move |t| (s, t))
        })
    })
}

/// Decides whether `D₂/I` is tame over `field`.
pub fn tame_local_ideal(ideal: &LocalIdeal, field: Field) -> Result<TameVerdict, ClassifyError> {
    if ideal.arity() != 2 {
        return Err(ClassifyError::ArityNotTwo(ideal.arity()));
    }
    let coefficients_ok = ideal.center().lambda.iter().all(|x| field.contains(x))
        && ideal
            .generators()
            .iter()
            .all(|g| g.terms().all(|(_, c)| field.contains(c)));
    if !coefficients_ok {
        return Err(ClassifyError::EntryOutsideField { field });
    }
    let verdict = |tame, over_closure, reason, witness| TameVerdict {
        tame,
        over_closure,
        reason,
        witness,
    };
    if ideal.order() <= 2 {
        return Ok(verdict(true, true, TameReason::OrderAtMostTwo, None));
    }
    let qb = ideal.quotient_basis();
    let rows: Vec<&MultiPoly> = qb.ideal_rows().collect();
    if rows.iter().any(|r| !r.homogeneous_part(1).is_zero()) {
        return Ok(verdict(true, true, TameReason::LinearElement, None));
    }
    let ms = quad_monomials();
    let quads: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| ms.iter().map(|m| r.coeff(m)).collect())
        .collect();
    let q = span_basis(3, &quads);
    match q.len() {
        0 => Ok(verdict(false, false, TameReason::NoQuadratic, None)),
        1 => {
            let d = discriminant(&q[0]);
            if d.is_zero() {
                Ok(verdict(false, false, TameReason::SquareQuadratic, None))
            } else if let Some(w) = split(&q[0], field) {
                Ok(verdict(true, true, TameReason::SplitQuadratic, Some(w)))
            } else {
                Ok(verdict(false, true, TameReason::NonSplitQuadratic, None))
            }
        }
        _ => {
            // every plane of binary forms holds a form with nonzero square discriminant
            let witness = if q.len() == 3 {
                split(&[Scalar::zero(), Scalar::one(), Scalar::zero()], field)
            } else {
                grid(64).find_map(|(s, t)| {
                    let (s, t) = (Scalar::from_int(s), Scalar::from_int(t));
                    let c: Vec<Scalar> = (0..3)
                        .map(|k| &(&s * &q[0][k]) + &(&t * &q[1][k]))
                        .collect();
                    split(&c, field)
                })
            };
            Ok(verdict(true, true, TameReason::SplitQuadratic, witness))
        }
    }
}
