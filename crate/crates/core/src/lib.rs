//! Exact computation of the fixed-point algebra of the symmetric group acting
//! on `M_m^{⊗n}` by permuting tensor factors, and certified unital embeddings
//! of matrix algebras into such fixed-point algebras.
//!
//! - [`partitions`]: partitions, hooks, class sizes, factorial valuations,
//!   two-coin representability.
//! - [`characters`]: `S_n` characters (Murnaghan–Nakayama), the permutation
//!   character `m^{ℓ(g)}`, exact inner products.
//! - [`schur_weyl`]: multiplicities `μ(λ)`, block shapes, the divisibility
//!   check, isotropy types.
//! - [`tensor_rep`]: explicit exact permutation operators, isotypic
//!   projections, group averaging, commutant bases.
//! - [`embeddings`]: `M_p` into `(M_m^{⊗n})^{S_n}`, `M_p ⊕ M_q` into `M_k`,
//!   and the block construction of `M_p ⊕ M_q` into
//!   `((M_p ⊕ M_q)^{⊗n})^{S_n}`, each with a residual certificate.
//!
//! The matrix layer in [`linalg`] is generic over [`linalg::Scalar`]; the
//! aliases below fix the two instantiations used throughout.

pub mod characters;
pub mod embeddings;
pub mod error;
pub mod linalg;
pub mod partitions;
pub mod perm;
pub mod schur_weyl;
pub mod tensor_rep;

mod serde_util;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use perm::Permutation;

/// Exact rationals.
pub type Rational = num_rational::BigRational;
/// Exact sparse matrix; carrier of every structural computation.
pub type ExactMatrix = linalg::SparseMatrix<Rational>;
/// Floating sparse matrix, used for residual evaluation.
pub type FloatMatrix = linalg::SparseMatrix<f64>;
