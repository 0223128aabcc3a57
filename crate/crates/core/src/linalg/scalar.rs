use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::sparse::SparseMatrix;

/// Field elements the matrix layer can carry.
///
/// Exact rationals are used for all structural data; `f64` for the numeric
/// spectral splitting and for residual norms. `f32` is supported for
/// completeness.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64_lossy(&self) -> f64;

    /// Matrix product; types with a cheaper representation override it.
    fn matmul(a: &SparseMatrix<Self>, b: &SparseMatrix<Self>) -> SparseMatrix<Self> {
        super::sparse::generic_mul(a, b)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn matmul(a: &SparseMatrix<Self>, b: &SparseMatrix<Self>) -> SparseMatrix<Self> {
        super::sparse::rational_mul(a, b)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}
