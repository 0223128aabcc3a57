//! `φ = ⊕_k φ_k : M_p ⊕ M_q → B` and the composite `ψ ∘ φ` into
//! `((M_p ⊕ M_q)^{⊗n})^{S_n}`, for distinct primes `p, q > n`.
//!
//! For `k < n`, `φ_k(x, y) = L(x) ⊗ 1` where `L : M_p → (M_p^{⊗n-k})^{S_{n-k}}`
//! is the exact Lemma embedding; for `k = n`, `φ_n(x, y) = L(y)` with
//! `L : M_q → (M_q^{⊗n})^{S_n}`. Each `φ_k` kills one summand; `φ` does not.

use serde::{Deserialize, Serialize};

use super::block::{construct_psi, BlockAlgebraElement, FixedSummandElement, Psi};
use super::lemma::{construct_mp_embedding, LemmaOptions};
use super::{exact_certificate, EmbeddingCertificate, Mode, SourceAlgebra, TargetAlgebra};
use crate::error::{Error, Result};
use crate::linalg::RowReducer;
use crate::partitions::ensure_prime;
use crate::perm::Permutation;
use crate::ExactMatrix;

/// `φ_k` as images of the matrix units of `M_p ⊕ M_q`, each of dimension
/// `p^{n-k} q^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiK {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub k: usize,
    pub images: Vec<ExactMatrix>,
}

fn check_primes(p: usize, q: usize, n: usize) -> Result<()> {
    ensure_prime(p as u64)?;
    ensure_prime(q as u64)?;
    if p == q {
        return Err(Error::InvalidArgument(format!("p and q must differ (both {p})")));
    }
    if p <= n || q <= n {
        return Err(Error::HypothesisFailure(format!(
            "need p, q > n; got p={p}, q={q}, n={n}"
        )));
    }
    Ok(())
}

pub fn construct_phi_k(p: usize, q: usize, n: usize, k: usize) -> Result<PhiK> {
    check_primes(p, q, n)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if k > n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds n = {n}")));
    }
    let exact = LemmaOptions {
        mode: Mode::Exact,
        ..LemmaOptions::default()
    };
    let dim = FixedSummandElement::summand_dim(p, q, n, k);
    let mut images = Vec::with_capacity(p * p + q * q);
    if k < n {
        let lemma = construct_mp_embedding(p, n - k, p as u64, &exact)?;
        let pad = ExactMatrix::identity(q.pow(k as u32));
        images.extend(lemma.images.iter().map(|x| x.kron(&pad)));
        images.extend(std::iter::repeat_n(ExactMatrix::zeros(dim), q * q));
    } else {
        let lemma = construct_mp_embedding(q, n, q as u64, &exact)?;
        images.extend(std::iter::repeat_n(ExactMatrix::zeros(dim), p * p));
        images.extend(lemma.images);
    }
    Ok(PhiK { p, q, n, k, images })
}

/// `φ` on each matrix unit of `M_p ⊕ M_q`, in [`SourceAlgebra::units`] order.
pub fn construct_phi(p: usize, q: usize, n: usize) -> Result<Vec<FixedSummandElement>> {
    let parts = (0..=n)
        .map(|k| construct_phi_k(p, q, n, k))
        .collect::<Result<Vec<_>>>()?;
    (0..p * p + q * q)
        .map(|u| FixedSummandElement::new(p, q, n, parts.iter().map(|phi| phi.images[u].clone()).collect()))
        .collect()
}

/// Rank of the span of the given elements of `B`, each flattened.
pub fn span_rank(elements: &[FixedSummandElement]) -> usize {
    let mut reducer = RowReducer::new();
    for b in elements {
        let mut offset = 0;
        let mut flat = Vec::new();
        for c in &b.components {
            flat.extend(c.flat_entries().map(|(i, v)| (offset + i, v)));
            offset += c.dim() * c.dim();
        }
        reducer.insert(flat);
    }
    reducer.rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryChecks {
    /// Rank of `φ` on the `p² + q²` matrix units.
    pub phi_rank: usize,
    pub source_dim: usize,
    pub trivial_kernel: bool,
    /// `α_g(ψ(φ(x))) = ψ(φ(x))` for every unit `x` and every `g ∈ S_n`.
    pub image_fixed: bool,
    /// The same, evaluated through `β_{h_1} β_{h_2}^{-1}`.
    pub image_fixed_via_cosets: bool,
    /// `ψ(φ(x)*) = ψ(φ(x))*`.
    pub star_preserved: bool,
}

#[derive(Clone, Debug)]
pub struct CorollaryEmbedding {
    pub psi: Psi,
    pub phi: Vec<FixedSummandElement>,
    pub psi_phi: Vec<BlockAlgebraElement>,
    pub certificate: EmbeddingCertificate,
    pub checks: CorollaryChecks,
}

impl CorollaryEmbedding {
    pub fn is_valid(&self) -> bool {
        let c = &self.checks;
        self.certificate.is_valid() && c.trivial_kernel && c.image_fixed && c.image_fixed_via_cosets && c.star_preserved
    }
}

/// The full construction with its exact certificate in `M_{p+q}^{⊗n}`.
pub fn construct_corollary_embedding(p: usize, q: usize, n: usize) -> Result<CorollaryEmbedding> {
    let psi = construct_psi(p, q, n)?;
    let phi = construct_phi(p, q, n)?;
    let psi_phi = phi.iter().map(|b| psi.apply(b)).collect::<Result<Vec<_>>>()?;
    let source = SourceAlgebra::sum(p, q);
    let units = source.units();

    let group = Permutation::all(n);
    let image_fixed = psi_phi.iter().all(|a| group.iter().all(|g| &a.alpha(g) == a));
    let image_fixed_via_cosets = psi_phi
        .iter()
        .all(|a| group.iter().all(|g| &a.alpha_via_cosets(g) == a));
    let star_preserved = units.iter().zip(&psi_phi).all(|(u, a)| {
        let adj = super::MatrixUnit {
            summand: u.summand,
            row: u.col,
            col: u.row,
        };
        psi_phi[source.unit_index(adj)] == a.adjoint()
    });
    let phi_rank = span_rank(&phi);
    let source_dim = units.len();
    let checks = CorollaryChecks {
        phi_rank,
        source_dim,
        trivial_kernel: phi_rank == source_dim,
        image_fixed,
        image_fixed_via_cosets,
        star_preserved,
    };

    let images = psi_phi.iter().map(BlockAlgebraElement::to_ambient).collect();
    let certificate = exact_certificate(source, TargetAlgebra::SymmetricBlockAlgebra { p, q, n }, images);
    Ok(CorollaryEmbedding {
        psi,
        phi,
        psi_phi,
        certificate,
        checks,
    })
}
