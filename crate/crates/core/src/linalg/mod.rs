//! Exact and floating matrix primitives shared by the representation-theoretic
//! modules.

pub mod rank;
pub mod rational;
pub mod scalar;
pub mod sparse;

pub use rank::{rank, RowReducer};
pub use rational::{format_rational, format_residual, parse_rational};
pub use scalar::Scalar;
pub use sparse::{MatrixTriplets, SparseMatrix};
