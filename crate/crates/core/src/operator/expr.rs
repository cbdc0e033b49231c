//! Generator expressions and their normalization.

use alloc::boxed::Box;

use super::{Operator, OperatorError};
use crate::algebra_base::Scalar;

/// A generator symbol of one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    D,
    Int,
    H,
    E { s: u32, t: u32 },
}

/// Expression tree over generators; slots are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Scalar(Scalar),
    Gen { gen: Generator, slot: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn gen(gen: Generator, slot: usize) -> Expr {
        Expr::Gen { gen, slot }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
}

impl Operator {
    /// Normalizes an expression; `x_i` becomes `∫_i H_i`.
    pub fn from_expression(e: &Expr, n: usize) -> Result<Operator, OperatorError> {
        Ok(match e {
            Expr::Scalar(c) => Operator::scalar(n, c.clone()),
            Expr::Gen { gen, slot } => {
                if *slot >= n {
                    return Err(OperatorError::SlotOutOfRange { slot: *slot, arity: n });
                }
                match *gen {
                    Generator::X => Operator::x(n, *slot),
                    Generator::D => Operator::d(n, *slot),
                    Generator::Int => Operator::int(n, *slot),
                    Generator::H => Operator::h(n, *slot),
                    Generator::E { s, t } => Operator::e(n, *slot, s, t),
                }
            }
            Expr::Add(a, b) => Operator::from_expression(a, n)?
                .checked_add(&Operator::from_expression(b, n)?)?,
            Expr::Sub(a, b) => Operator::from_expression(a, n)?
                .checked_sub(&Operator::from_expression(b, n)?)?,
            Expr::Mul(a, b) => Operator::from_expression(a, n)?
                .checked_mul(&Operator::from_expression(b, n)?)?,
            Expr::Neg(a) => -&Operator::from_expression(a, n)?,
            Expr::Pow(a, k) => {
                if *k < 0 {
                    return Err(OperatorError::NegativePower(*k));
                }
                Operator::from_expression(a, n)?.pow(*k as u32)
            }
        })
    }
}
