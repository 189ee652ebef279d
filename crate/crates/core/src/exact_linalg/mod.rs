//! Exact rational scalars and dense matrices: the substrate for every
//! rank, kernel and closure computation in the crate.

mod matrix;
mod rational;

pub use matrix::{matrix_of_linear_map, vectorize_commutator_map, EchelonBasis, RatMatrix};
pub use rational::{q, qi, Rational};
