pub mod check;
pub mod commutator;
pub mod complete_graph;
pub mod error;
pub mod hamming;
pub mod linalg;
pub mod split;
pub mod tmodule;

pub use check::{Check, Checks};
pub use error::{Error, Result};
pub use linalg::{RMatrix, Rational, Subspace};
