//! Chain-homotopy classes of chain maps between finite simplicial complexes.
//!
//! The pipeline builds the degree 0 and 1 terms of the hom-complex
//! `Hom(C(X), C(Y))`, extracts an affine chart of `[X, Y]` (chain-map
//! generators plus null-homotopic directions), and then selects concrete
//! representatives with combinatorial search, linear programming, or smooth
//! local optimization.

pub mod algebra;
pub mod apps;
pub mod cli;
pub mod complexes;
pub mod error;
pub mod homcomplex;
pub mod optimize;
pub mod parallel;

pub use error::{Error, Result};
