//! Tools for the Deligne–Simpson problem: Jordan-normal-form combinatorics,
//! the iterated reduction deciding solvability for generic eigenvalues, an
//! exact eigenvalue-genericity classifier, and exact verification of explicit
//! rational matrix tuples (closure, class membership, centralizers,
//! irreducibility, tangent-space dimensions).

pub mod error;
pub mod exact_linalg;
pub mod jnf;
pub mod reduction;
pub mod spectra;
pub mod tuple_lab;
pub mod workbench;

pub use error::{Error, Result};
pub use exact_linalg::{RatMatrix, Rational};
pub use jnf::{Jnf, Partition};
pub use reduction::JnfTuple;
pub use spectra::{FormalScalar, Mode, SpectrumAssignment};
pub use tuple_lab::MatrixTuple;
