pub mod arrangement;
pub mod classify;
pub mod derivations;
pub mod error;
pub mod exactalg;
pub mod extend;
pub mod lattice;

pub use arrangement::{Hyperplane, Multiarrangement};
pub use error::{Error, Result};
pub use exactalg::{Field, FieldSpec, Matrix, PolyMatrix, Polynomial, Scalar};
