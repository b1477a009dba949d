//! Field-generic sparse linear algebra.
//!
//! Exact rationals carry the homology computations, `Z2` the combinatorial
//! enumeration, and `f64` the optimization inner loops.

mod field;
mod reduce;
mod sparse;

pub use field::{convert, parse_rational, Field, FieldKind, Rational, Z2, FLOAT_ZERO_TOL};
pub use reduce::{independent_modulo, rank, row_reduce, solve_membership, EchelonBasis, Reduction};
pub use sparse::{Matrix, SparseVector};
