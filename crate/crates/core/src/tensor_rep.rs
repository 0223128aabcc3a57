//! Exact matrices on `(C^m)^{⊗n}`: permutation operators `U_g`, isotypic
//! projections, the group average onto the commutant, and a commutant basis.
//!
//! Basis vectors `ξ_{i_1} ⊗ ⋯ ⊗ ξ_{i_n}` are indexed row-major with the
//! leftmost factor most significant. `U_g` places the entry of slot `j` into
//! slot `g(j)`, i.e. slot `j` of the image carries `i_{g^{-1}(j)}`; with
//! this convention `g ↦ U_g` is a homomorphism.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::characters::{irreducible_character, ClassFunction};
use crate::error::{Error, Result};
use crate::linalg::{RowReducer, Scalar, SparseMatrix};
use crate::partitions::{factorial, irrep_dimension, Partition};
use crate::perm::Permutation;
use crate::{ExactMatrix, Rational};

/// Default cap on `m^n`.
pub const MAX_TENSOR_DIM: usize = 4096;
/// Largest `n` for which projections sum over all of `S_n`.
pub const MAX_PROJECTION_N: usize = 8;

/// `m^n`, or a limit error if it exceeds `cap`.
pub fn tensor_dim(m: usize, n: usize, cap: usize) -> Result<usize> {
    let dim = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(Error::LimitExceeded {
            what: "m^n",
            value: dim,
            max: cap as u128,
        });
    }
    Ok(dim as usize)
}

/// A basis vector of `(C^m)^{⊗n}`; `digits` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorIndex {
    pub m: usize,
    pub n: usize,
    pub digits: Vec<usize>,
    pub flat: usize,
}

impl TensorIndex {
    pub fn from_flat(m: usize, n: usize, flat: usize) -> Self {
        let digits = flat_to_digits(&vec![m; n], flat).into_iter().map(|d| d + 1).collect();
        Self { m, n, digits, flat }
    }

    pub fn from_digits(m: usize, digits: Vec<usize>) -> Result<Self> {
        if digits.iter().any(|&d| d == 0 || d > m) {
            return Err(Error::InvalidArgument(format!("digits {digits:?} outside 1..={m}")));
        }
        let zero_based: Vec<usize> = digits.iter().map(|d| d - 1).collect();
        let flat = digits_to_flat(&vec![m; digits.len()], &zero_based);
        Ok(Self {
            m,
            n: digits.len(),
            digits,
            flat,
        })
    }
}

/// 0-based digits of `flat` in the mixed radix `dims`, most significant first.
pub fn flat_to_digits(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in dims.iter().enumerate().rev() {
        digits[slot] = flat % d;
        flat /= d;
    }
    digits
}

pub fn digits_to_flat(dims: &[usize], digits: &[usize]) -> usize {
    dims.iter().zip(digits).fold(0, |acc, (&d, &x)| acc * d + x)
}

/// Basis permutation realising `g` on `⊗_i C^{dims[i]}`.
///
/// Returns `(images, permuted_dims)`: the basis vector with flat index `f` is
/// sent to `images[f]` in `⊗_j C^{permuted_dims[j]}`, where
/// `permuted_dims[g(i)] = dims[i]` and the digit of slot `i` moves to slot
/// `g(i)`.
pub fn mixed_radix_permutation(dims: &[usize], g: &Permutation) -> (Vec<usize>, Vec<usize>) {
    assert_eq!(dims.len(), g.len(), "permutation degree does not match tensor length");
    let permuted_dims = g.act_on_slots(dims);
    let total: usize = dims.iter().product();
    let images = (0..total)
        .map(|f| digits_to_flat(&permuted_dims, &g.act_on_slots(&flat_to_digits(dims, f))))
        .collect();
    (images, permuted_dims)
}

/// `U_g` as basis images on `(C^m)^{⊗n}`.
pub fn permutation_images(g: &Permutation, m: usize) -> Vec<usize> {
    mixed_radix_permutation(&vec![m; g.len()], g).0
}

/// `U_g` as a 0/1 matrix of any scalar type.
pub fn permutation_operator<T: Scalar>(g: &Permutation, m: usize) -> Result<SparseMatrix<T>> {
    tensor_dim(m, g.len(), MAX_TENSOR_DIM)?;
    Ok(SparseMatrix::permutation(&permutation_images(g, m)))
}

/// `U_g` over the rationals.
pub fn build_permutation_operator(g: &Permutation, m: usize) -> Result<ExactMatrix> {
    permutation_operator(g, m)
}

/// `P_λ = (dim λ / n!) Σ_g χ_λ(g) U_g`, the central idempotent onto the
/// `λ`-isotypic component.
pub fn isotypic_projection(lambda: &Partition, m: usize) -> Result<ExactMatrix> {
    let n = lambda.n();
    if n > MAX_PROJECTION_N {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n as u128,
            max: MAX_PROJECTION_N as u128,
        });
    }
    let dim = tensor_dim(m, n, MAX_TENSOR_DIM)?;
    let chi: ClassFunction = irreducible_character(lambda)?;
    let classes = chi.class_labels();
    // integer accumulation in fixed group-element order, scaled once at the end
    let mut acc: SparseMatrix<Rational> = SparseMatrix::zeros(dim);
    for g in Permutation::all(n) {
        let idx = classes
            .iter()
            .position(|c| *c == g.cycle_type())
            .expect("every cycle type is a class");
        let value = &chi.values[idx];
        if *value == BigInt::from(0) {
            continue;
        }
        let coeff = Rational::from_integer(value.clone());
        for (col, row) in permutation_images(&g, m).into_iter().enumerate() {
            acc.add_at(row, col, coeff.clone());
        }
    }
    let scale = BigRational::new(BigInt::from(irrep_dimension(lambda)), BigInt::from(factorial(n)));
    Ok(acc.scale(&scale))
}

/// `(1/n!) Σ_g U_g X U_g^{-1}`, the trace-preserving conditional expectation
/// onto `{U_g}'`.
pub fn average_over_group<T: Scalar>(x: &SparseMatrix<T>, m: usize, n: usize) -> Result<SparseMatrix<T>> {
    let dim = tensor_dim(m, n, MAX_TENSOR_DIM)?;
    if x.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: x.dim(),
        });
    }
    let mut acc = SparseMatrix::zeros(dim);
    for g in Permutation::all(n) {
        let conj = x.conjugate_by_permutation(&permutation_images(&g, m));
        for (r, c, v) in conj.iter() {
            acc.add_at(r, c, v.clone());
        }
    }
    let inv = T::from_rational(&BigRational::new(1.into(), BigInt::from(factorial(n))));
    Ok(acc.scale(&inv))
}

/// A basis of `{U_g : g ∈ S_n}'`, obtained by averaging matrix units
/// `E_{rc}` and keeping the results that are independent by exact rank.
///
/// Matrix units already inside the support of an accepted element are
/// skipped: their averages coincide with it up to scale.
pub fn commutant_basis(m: usize, n: usize) -> Result<Vec<ExactMatrix>> {
    commutant_basis_capped(m, n, MAX_TENSOR_DIM)
}

pub fn commutant_basis_capped(m: usize, n: usize, cap: usize) -> Result<Vec<ExactMatrix>> {
    let dim = tensor_dim(m, n, cap)?;
    let group: Vec<Vec<usize>> = Permutation::all(n).iter().map(|g| permutation_images(g, m)).collect();
    let inv = Rational::new(1.into(), BigInt::from(group.len()));
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut reducer = RowReducer::new();
    let mut basis = Vec::new();
    for r in 0..dim {
        for c in 0..dim {
            if covered.contains(&(r, c)) {
                continue;
            }
            let mut avg: ExactMatrix = SparseMatrix::zeros(dim);
            for images in &group {
                avg.add_at(images[r], images[c], inv.clone());
            }
            covered.extend(avg.iter().map(|(i, j, _)| (i, j)));
            if reducer.insert(avg.flat_entries()) {
                basis.push(avg);
            }
        }
    }
    Ok(basis)
}
