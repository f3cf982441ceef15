//! Exact linear algebra over the rationals.

pub(crate) mod matrix;
mod rational;
pub(crate) mod subspace;

pub use matrix::{kron, mat_inverse, mat_mul, RMatrix};
pub use rational::{ParseRationalError, Rational};
pub use subspace::{commutant_dim, kernel, orth_complement_within, subspace_intersect, subspace_sum, Subspace};
