//! Exact fields, sparse polynomials and dense linear algebra.

pub mod field;
pub mod labeled;
pub mod matrix;
pub mod poly;

pub use field::{is_prime, Field, PrimeField, Rationals};
pub use labeled::{Label, LabeledScalarMatrix, MatrixView};
pub use matrix::{corank, det, in_column_span, independent_columns, nullspace, rank, Matrix};
pub use poly::{PolyMatrix, SparsePoly};
