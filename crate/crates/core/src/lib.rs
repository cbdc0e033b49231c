//! Exact algebra of polynomial integro-differential operators.
//!
//! Canonical forms, the faithful action on divided powers, weight and
//! generalized weight modules on finite windows, and the tame classifiers.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra_base;
pub mod classify;

pub use algebra_base::{Field, Matrix, MultiPoly, Scalar, UniPoly};
pub mod faithful_action;
pub mod operator;
pub mod weight_modules;

pub use operator::{BasisTerm1, BasisTermN, Operator, OperatorError};
