//! The block algebra `(M_p ⊕ M_q)^{⊗n} = ⊕_{v ∈ {0,1}^n} ⊗_i M_{d_v(i)}` with
//! `d_v(i) = p` if `v(i) = 0` and `q` otherwise, the tensor-flip maps
//! `β_g` between its blocks, and `ψ : B → (M_p ⊕ M_q)^{⊗n}` with
//! `ψ(b)(v) = β_{g_v}(b(k_v))`.
//!
//! `S_n` acts on `{0,1}^n` and on tensor slots by `(g·v)(g(i)) = v(i)`, so
//! that `g ↦ β_g` and `g ↦ α_g` are homomorphisms.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMatrix};
use crate::partitions::ensure_prime;
use crate::perm::Permutation;
use crate::tensor_rep::{digits_to_flat, flat_to_digits, mixed_radix_permutation, MAX_TENSOR_DIM};
use crate::ExactMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLabel {
    pub v: Vec<u8>,
    pub dim: usize,
}

/// Blocks are listed in binary order of `v`, `v(1)` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockAlgebraDescriptor {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub blocks: Vec<BlockLabel>,
}

impl BlockAlgebraDescriptor {
    pub fn new(p: usize, q: usize, n: usize) -> Result<Self> {
        ensure_prime(p as u64)?;
        ensure_prime(q as u64)?;
        if p == q {
            return Err(Error::InvalidArgument(format!("p and q must differ (both {p})")));
        }
        if (p + q).checked_pow(n as u32).is_none_or(|d| d > MAX_TENSOR_DIM) {
            return Err(Error::LimitExceeded {
                what: "(p+q)^n",
                value: (p as u128 + q as u128).saturating_pow(n as u32),
                max: MAX_TENSOR_DIM as u128,
            });
        }
        let blocks = (0..1usize << n)
            .map(|idx| {
                let v: Vec<u8> = (0..n).map(|i| ((idx >> (n - 1 - i)) & 1) as u8).collect();
                let dim = factor_dims(p, q, &v).iter().product();
                BlockLabel { v, dim }
            })
            .collect();
        Ok(Self { p, q, n, blocks })
    }

    pub fn index_of(&self, v: &[u8]) -> usize {
        v.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn factor_dims(&self, v: &[u8]) -> Vec<usize> {
        factor_dims(self.p, self.q, v)
    }

    /// Dimension of `M_{p+q}^{⊗n}`'s underlying space.
    pub fn ambient_dim(&self) -> usize {
        (self.p + self.q).pow(self.n as u32)
    }

    /// Ambient basis index of each basis vector of block `v`.
    pub fn ambient_indices(&self, v: &[u8]) -> Vec<usize> {
        let dims = self.factor_dims(v);
        let total: usize = dims.iter().product();
        let ambient = vec![self.p + self.q; self.n];
        (0..total)
            .map(|f| {
                let digits: Vec<usize> = flat_to_digits(&dims, f)
                    .into_iter()
                    .zip(v)
                    .map(|(d, &bit)| if bit == 0 { d } else { self.p + d })
                    .collect();
                digits_to_flat(&ambient, &digits)
            })
            .collect()
    }
}

fn factor_dims(p: usize, q: usize, v: &[u8]) -> Vec<usize> {
    v.iter().map(|&b| if b == 0 { p } else { q }).collect()
}

/// `(k_v, w_v)`: the number of ones and the sorted vector `0…01…1`.
pub fn canonical_sorted_vector(v: &[u8]) -> (usize, Vec<u8>) {
    let k = v.iter().filter(|&&b| b != 0).count();
    let n = v.len();
    (k, (0..n).map(|i| u8::from(i >= n - k)).collect())
}

/// The permutation with `g_v · w_v = v` that is increasing on the zero
/// positions and on the one positions.
pub fn choose_gv(v: &[u8]) -> Permutation {
    let zeros = v.iter().enumerate().filter(|(_, &b)| b == 0).map(|(i, _)| i);
    let ones = v.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i);
    Permutation::new(zeros.chain(ones).collect()).expect("positions form a permutation")
}

/// `β_g` on `⊗_i M_{dims[i]}`: the tensor factor in slot `i` moves to slot
/// `g(i)`. Returns the image and the permuted factor dimensions.
pub fn beta_action<T: Scalar>(
    g: &Permutation,
    x: &SparseMatrix<T>,
    dims: &[usize],
) -> Result<(SparseMatrix<T>, Vec<usize>)> {
    if g.len() != dims.len() {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            actual: g.len(),
        });
    }
    let total: usize = dims.iter().product();
    if x.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            actual: x.dim(),
        });
    }
    let (images, permuted) = mixed_radix_permutation(dims, g);
    Ok((x.conjugate_by_permutation(&images), permuted))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockAlgebraElement {
    pub descriptor: BlockAlgebraDescriptor,
    pub components: Vec<ExactMatrix>,
}

impl BlockAlgebraElement {
    pub fn new(descriptor: BlockAlgebraDescriptor, components: Vec<ExactMatrix>) -> Result<Self> {
        if components.len() != descriptor.blocks.len() {
            return Err(Error::DimensionMismatch {
                expected: descriptor.blocks.len(),
                actual: components.len(),
            });
        }
        for (b, c) in descriptor.blocks.iter().zip(&components) {
            if b.dim != c.dim() {
                return Err(Error::DimensionMismatch {
                    expected: b.dim,
                    actual: c.dim(),
                });
            }
        }
        Ok(Self { descriptor, components })
    }

    pub fn zero(descriptor: &BlockAlgebraDescriptor) -> Self {
        let components = descriptor.blocks.iter().map(|b| ExactMatrix::zeros(b.dim)).collect();
        Self {
            descriptor: descriptor.clone(),
            components,
        }
    }

    pub fn identity(descriptor: &BlockAlgebraDescriptor) -> Self {
        let components = descriptor.blocks.iter().map(|b| ExactMatrix::identity(b.dim)).collect();
        Self {
            descriptor: descriptor.clone(),
            components,
        }
    }

    pub fn component(&self, v: &[u8]) -> &ExactMatrix {
        &self.components[self.descriptor.index_of(v)]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&ExactMatrix, &ExactMatrix) -> ExactMatrix) -> Self {
        assert_eq!(
            self.descriptor, other.descriptor,
            "elements of different block algebras"
        );
        Self {
            descriptor: self.descriptor.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            components: self.components.iter().map(SparseMatrix::transpose).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(SparseMatrix::is_zero)
    }

    /// `α_g(a)(v) = β_g(a(g^{-1}·v))`.
    pub fn alpha(&self, g: &Permutation) -> Self {
        let ginv = g.inverse();
        let components = self
            .descriptor
            .blocks
            .iter()
            .map(|b| {
                let u = ginv.act_on_slots(&b.v);
                let (x, dims) = beta_action(g, self.component(&u), &self.descriptor.factor_dims(&u))
                    .expect("block dimensions are consistent");
                debug_assert_eq!(dims, self.descriptor.factor_dims(&b.v));
                x
            })
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            components,
        }
    }

    /// `α_g` evaluated through coset representatives:
    /// `β_{h_1} β_{h_2}^{-1}(a(g^{-1}·v))` with `h_1·w_v = v` and
    /// `h_2·w_v = g^{-1}·v`. Agrees with [`Self::alpha`] on the image of `ψ`.
    pub fn alpha_via_cosets(&self, g: &Permutation) -> Self {
        let ginv = g.inverse();
        let components = self
            .descriptor
            .blocks
            .iter()
            .map(|b| {
                let u = ginv.act_on_slots(&b.v);
                let h1 = choose_gv(&b.v);
                let h2 = choose_gv(&u);
                let (y, wdims) = beta_action(&h2.inverse(), self.component(&u), &self.descriptor.factor_dims(&u))
                    .expect("block dimensions are consistent");
                beta_action(&h1, &y, &wdims).expect("block dimensions are consistent").0
            })
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            components,
        }
    }

    /// Fixed by every `α_g`, checked on adjacent transpositions.
    pub fn is_fixed(&self) -> bool {
        Permutation::adjacent_transpositions(self.descriptor.n)
            .iter()
            .all(|g| &self.alpha(g) == self)
    }

    /// The element as a matrix on `(C^{p+q})^{⊗n}`.
    pub fn to_ambient(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.descriptor.ambient_dim());
        for (b, c) in self.descriptor.blocks.iter().zip(&self.components) {
            let idx = self.descriptor.ambient_indices(&b.v);
            for (r, col, val) in c.iter() {
                out.set(idx[r], idx[col], val.clone());
            }
        }
        out
    }
}

/// An element of `B = ⊕_{k=0}^n (M_p^{⊗n-k})^{S_{n-k}} ⊗ (M_q^{⊗k})^{S_k}`;
/// component `k` acts on `(C^p)^{⊗n-k} ⊗ (C^q)^{⊗k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedSummandElement {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub components: Vec<ExactMatrix>,
}

impl FixedSummandElement {
    pub fn summand_dims(p: usize, q: usize, n: usize, k: usize) -> Vec<usize> {
        let mut dims = vec![p; n - k];
        dims.extend(std::iter::repeat_n(q, k));
        dims
    }

    pub fn summand_dim(p: usize, q: usize, n: usize, k: usize) -> usize {
        p.pow((n - k) as u32) * q.pow(k as u32)
    }

    /// Validates component sizes and `S_{n-k} × S_k`-invariance.
    pub fn new(p: usize, q: usize, n: usize, components: Vec<ExactMatrix>) -> Result<Self> {
        let x = Self::new_unchecked(p, q, n, components)?;
        if let Some(k) = (0..=n).find(|&k| !x.summand_is_fixed(k)) {
            return Err(Error::InvalidArgument(format!(
                "component {k} is not fixed by S_{} × S_{k}",
                n - k
            )));
        }
        Ok(x)
    }

    fn new_unchecked(p: usize, q: usize, n: usize, components: Vec<ExactMatrix>) -> Result<Self> {
        if components.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                actual: components.len(),
            });
        }
        for (k, c) in components.iter().enumerate() {
            let d = Self::summand_dim(p, q, n, k);
            if c.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: c.dim(),
                });
            }
        }
        Ok(Self { p, q, n, components })
    }

    pub fn zero(p: usize, q: usize, n: usize) -> Self {
        let components = (0..=n)
            .map(|k| ExactMatrix::zeros(Self::summand_dim(p, q, n, k)))
            .collect();
        Self { p, q, n, components }
    }

    pub fn identity(p: usize, q: usize, n: usize) -> Self {
        let components = (0..=n)
            .map(|k| ExactMatrix::identity(Self::summand_dim(p, q, n, k)))
            .collect();
        Self { p, q, n, components }
    }

    /// The element with `x` in summand `k` and zero elsewhere.
    pub fn single(p: usize, q: usize, n: usize, k: usize, x: ExactMatrix) -> Result<Self> {
        let mut components: Vec<ExactMatrix> = (0..=n)
            .map(|j| ExactMatrix::zeros(Self::summand_dim(p, q, n, j)))
            .collect();
        components[k] = x;
        Self::new(p, q, n, components)
    }

    /// Commutation of component `k` with the adjacent transpositions inside
    /// the first `n-k` slots and inside the last `k` slots.
    pub fn summand_is_fixed(&self, k: usize) -> bool {
        let dims = Self::summand_dims(self.p, self.q, self.n, k);
        let x = &self.components[k];
        (0..self.n.saturating_sub(1)).filter(|&i| i + 1 != self.n - k).all(|i| {
            let g = Permutation::transposition(self.n, i, i + 1);
            let (images, _) = mixed_radix_permutation(&dims, &g);
            &x.conjugate_by_permutation(&images) == x
        })
    }

    pub fn is_fixed(&self) -> bool {
        (0..=self.n).all(|k| self.summand_is_fixed(k))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a * b)
                .collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(SparseMatrix::is_zero)
    }
}

/// `ψ(b)(v) = β_{g_v}(b(k_v))`, with `g_v` from [`choose_gv`].
#[derive(Clone, Debug)]
pub struct Psi {
    pub descriptor: BlockAlgebraDescriptor,
    pub gv: Vec<Permutation>,
    pub kv: Vec<usize>,
}

pub fn construct_psi(p: usize, q: usize, n: usize) -> Result<Psi> {
    let descriptor = BlockAlgebraDescriptor::new(p, q, n)?;
    let gv = descriptor.blocks.iter().map(|b| choose_gv(&b.v)).collect();
    let kv = descriptor
        .blocks
        .iter()
        .map(|b| canonical_sorted_vector(&b.v).0)
        .collect();
    Ok(Psi { descriptor, gv, kv })
}

impl Psi {
    pub fn apply(&self, b: &FixedSummandElement) -> Result<BlockAlgebraElement> {
        self.apply_with(b, |i| self.gv[i].clone())
    }

    /// `ψ` computed with an arbitrary choice of `g` with `g·w_v = v` for
    /// block `i`.
    pub fn apply_with(
        &self,
        b: &FixedSummandElement,
        choose: impl Fn(usize) -> Permutation,
    ) -> Result<BlockAlgebraElement> {
        let d = &self.descriptor;
        if (b.p, b.q, b.n) != (d.p, d.q, d.n) {
            return Err(Error::InvalidArgument(format!(
                "element of B({},{},{}) given to ψ for ({},{},{})",
                b.p, b.q, b.n, d.p, d.q, d.n
            )));
        }
        let components = d
            .blocks
            .iter()
            .enumerate()
            .map(|(i, block)| {
                let k = self.kv[i];
                let g = choose(i);
                let w = canonical_sorted_vector(&block.v).1;
                if g.act_on_slots(&w) != block.v {
                    return Err(Error::InvalidArgument(format!(
                        "{g} does not carry w_v to v = {:?}",
                        block.v
                    )));
                }
                Ok(beta_action(&g, &b.components[k], &d.factor_dims(&w))?.0)
            })
            .collect::<Result<Vec<_>>>()?;
        BlockAlgebraElement::new(d.clone(), components)
    }
}

/// Every `g ∈ S_n` with `g·w_v = v`.
pub fn all_coset_representatives(v: &[u8]) -> Vec<Permutation> {
    let w = canonical_sorted_vector(v).1;
    Permutation::all(v.len())
        .into_iter()
        .filter(|g| g.act_on_slots(&w) == v)
        .collect()
}

/// Every component is an identity matrix.
pub fn is_identity_element(a: &BlockAlgebraElement) -> bool {
    a.components.iter().all(|c| {
        c.iter()
            .all(|(r, col, v)| if r == col { v.is_one() } else { v.is_zero() })
            && c.nnz() == c.dim()
    })
}
