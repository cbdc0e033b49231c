//! Exact scalars, polynomials, local ideals and linear algebra.

pub mod ideal;
pub mod linalg;
pub mod multipoly;
pub mod roots;
pub mod scalar;
pub mod unipoly;

pub use ideal::{reduce_mod, IdealError, LocalIdeal, MaxIdeal, QuotientBasis};
pub use linalg::{
    bareiss, complement_basis, intersect_spans, rref, solve_linear, solve_matrix, span_basis,
    LinAlgError, Matrix, SolutionSet, SparseSystem,
};
pub use multipoly::{poly_shift, poly_shift_all, Monomial, MultiPoly};
pub use roots::roots_in_field;
pub use scalar::{rational_sqrt, Field, ParseScalarError, Scalar};
pub use unipoly::UniPoly;

/// `quotient_basis(I)` as a free function.
pub fn quotient_basis(ideal: &LocalIdeal) -> QuotientBasis {
    ideal.quotient_basis()
}
