//! Exact arithmetic: fields, polynomials and matrices.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{Field, FieldSpec, FiniteField, Gf, Scalar};
pub use matrix::{Matrix, PolyMatrix};
pub use poly::Polynomial;
