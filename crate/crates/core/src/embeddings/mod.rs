//! Unital embeddings of matrix algebras, each delivered as an
//! [`EmbeddingCertificate`]: the images of the source matrix units plus
//! residuals for unitality, multiplicativity, `*`-preservation and
//! equivariance.
//!
//! - [`lemma`]: `M_p → (M_m^{⊗n})^{S_n}`.
//! - [`frobenius`]: `M_p ⊕ M_q → M_k` for `k = a p + b q`.
//! - [`block`]: the block algebra `(M_p ⊕ M_q)^{⊗n} = ⊕_{v ∈ {0,1}^n}` and
//!   the map `ψ` out of `B = ⊕_k (M_p^{⊗n-k})^{S_{n-k}} ⊗ (M_q^{⊗k})^{S_k}`.
//! - [`corollary`]: `φ = ⊕_k φ_k : M_p ⊕ M_q → B` and the composite `ψ ∘ φ`.
//! - [`verify`]: independent recomputation of certificate residuals.

pub mod block;
pub mod corollary;
pub mod frobenius;
pub mod lemma;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_residual, MatrixTriplets, SparseMatrix};
use crate::ExactMatrix;

pub use block::{
    beta_action, canonical_sorted_vector, choose_gv, construct_psi, BlockAlgebraDescriptor, BlockAlgebraElement,
    BlockLabel, FixedSummandElement, Psi,
};
pub use corollary::{construct_corollary_embedding, construct_phi, construct_phi_k, CorollaryEmbedding, PhiK};
pub use frobenius::embed_sum_into_matrix;
pub use lemma::{construct_mp_embedding, LemmaOptions};
pub use verify::{verify_certificate, ValidationReport};

/// Default residual tolerance for numeric certificates.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Default eigenvalue clustering gap.
pub const DEFAULT_GAP_TOLERANCE: f64 = 1e-8;
/// Retries (with incremented seed) before the numeric splitting gives up.
pub const MAX_RETRIES: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "numeric" => Ok(Self::Numeric),
            _ => Err(Error::Parse(format!("unknown mode {s:?}; expected exact or numeric"))),
        }
    }
}

/// `M_{s_0} ⊕ M_{s_1} ⊕ ⋯`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceAlgebra {
    pub summands: Vec<usize>,
}

impl SourceAlgebra {
    pub fn matrix(p: usize) -> Self {
        Self { summands: vec![p] }
    }

    pub fn sum(p: usize, q: usize) -> Self {
        Self { summands: vec![p, q] }
    }

    /// Matrix units in image order: summand, then row, then column.
    pub fn units(&self) -> Vec<MatrixUnit> {
        self.summands
            .iter()
            .enumerate()
            .flat_map(|(s, &d)| (0..d).flat_map(move |row| (0..d).map(move |col| MatrixUnit { summand: s, row, col })))
            .collect()
    }

    pub fn unit_index(&self, u: MatrixUnit) -> usize {
        let offset: usize = self.summands[..u.summand].iter().map(|d| d * d).sum();
        offset + u.row * self.summands[u.summand] + u.col
    }
}

/// `e_{row,col}` of summand `summand`, all 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixUnit {
    pub summand: usize,
    pub row: usize,
    pub col: usize,
}

/// Where the images live. Every target is realised inside a full matrix
/// algebra `M_N`, `N = ambient_dim()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetAlgebra {
    /// `(M_m^{⊗n})^{S_n}` inside `M_{m^n}`.
    FixedPoint { m: usize, n: usize },
    /// `M_k`, no group action.
    FullMatrix { k: usize },
    /// `((M_p ⊕ M_q)^{⊗n})^{S_n}` inside `M_{p+q}^{⊗n}`; the block of
    /// `v ∈ {0,1}^n` uses colours `0..p` where `v(i) = 0` and `p..p+q`
    /// where `v(i) = 1`.
    SymmetricBlockAlgebra { p: usize, q: usize, n: usize },
}

impl TargetAlgebra {
    pub fn ambient_dim(&self) -> usize {
        match *self {
            Self::FixedPoint { m, n } => m.pow(n as u32),
            Self::FullMatrix { k } => k,
            Self::SymmetricBlockAlgebra { p, q, n } => (p + q).pow(n as u32),
        }
    }

    /// `(m, n)` for the permutation action on `(C^m)^{⊗n}`, if any.
    pub fn tensor_action(&self) -> Option<(usize, usize)> {
        match *self {
            Self::FixedPoint { m, n } => Some((m, n)),
            Self::FullMatrix { .. } => None,
            Self::SymmetricBlockAlgebra { p, q, n } => Some((p + q, n)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Residuals {
    pub unital: f64,
    pub multiplicative: f64,
    pub star: f64,
    pub equivariance: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.unital
            .max(self.multiplicative)
            .max(self.star)
            .max(self.equivariance)
    }
}

/// Which residuals were established to be exactly zero in exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExactZeroFlags {
    pub unital: bool,
    pub multiplicative: bool,
    pub star: bool,
    pub equivariance: bool,
}

impl ExactZeroFlags {
    pub fn all(&self) -> bool {
        self.unital && self.multiplicative && self.star && self.equivariance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingCertificate {
    pub source: SourceAlgebra,
    pub target: TargetAlgebra,
    pub mode: Mode,
    pub seed: u64,
    pub tolerance: f64,
    /// One image per source matrix unit, in [`SourceAlgebra::units`] order.
    pub images: Vec<ExactMatrix>,
    pub residuals: Residuals,
    pub exact_zero: ExactZeroFlags,
}

impl EmbeddingCertificate {
    pub fn image(&self, u: MatrixUnit) -> &ExactMatrix {
        &self.images[self.source.unit_index(u)]
    }

    /// Exact mode: every residual exactly zero. Numeric mode: every residual
    /// within tolerance and unitality exact.
    pub fn is_valid(&self) -> bool {
        match self.mode {
            Mode::Exact => self.exact_zero.all(),
            Mode::Numeric => self.exact_zero.unital && self.residuals.max() <= self.tolerance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CertificateWire::from(self)).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: CertificateWire = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::try_from(wire)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageWire {
    pub unit: MatrixUnit,
    pub matrix: MatrixTriplets,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualsWire {
    pub unital: String,
    pub multiplicative: String,
    pub star: String,
    pub equivariance: String,
}

impl From<&Residuals> for ResidualsWire {
    fn from(r: &Residuals) -> Self {
        Self {
            unital: format_residual(r.unital),
            multiplicative: format_residual(r.multiplicative),
            star: format_residual(r.star),
            equivariance: format_residual(r.equivariance),
        }
    }
}

impl TryFrom<&ResidualsWire> for Residuals {
    type Error = Error;

    fn try_from(w: &ResidualsWire) -> Result<Self> {
        let f = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad residual {s:?}")))
        };
        Ok(Self {
            unital: f(&w.unital)?,
            multiplicative: f(&w.multiplicative)?,
            star: f(&w.star)?,
            equivariance: f(&w.equivariance)?,
        })
    }
}

/// JSON form of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateWire {
    pub source: SourceAlgebra,
    pub target: TargetAlgebra,
    pub mode: Mode,
    pub seed: u64,
    pub tolerance: String,
    pub valid: bool,
    pub residuals: ResidualsWire,
    pub exact_zero: ExactZeroFlags,
    pub images: Vec<ImageWire>,
}

impl From<&EmbeddingCertificate> for CertificateWire {
    fn from(c: &EmbeddingCertificate) -> Self {
        Self {
            source: c.source.clone(),
            target: c.target.clone(),
            mode: c.mode,
            seed: c.seed,
            tolerance: format_residual(c.tolerance),
            valid: c.is_valid(),
            residuals: ResidualsWire::from(&c.residuals),
            exact_zero: c.exact_zero,
            images: c
                .source
                .units()
                .into_iter()
                .zip(&c.images)
                .map(|(unit, m)| ImageWire {
                    unit,
                    matrix: MatrixTriplets::from(m),
                })
                .collect(),
        }
    }
}

impl TryFrom<CertificateWire> for EmbeddingCertificate {
    type Error = Error;

    fn try_from(w: CertificateWire) -> Result<Self> {
        let units = w.source.units();
        if units.len() != w.images.len() {
            return Err(Error::DimensionMismatch {
                expected: units.len(),
                actual: w.images.len(),
            });
        }
        let mut images = vec![None; units.len()];
        for img in &w.images {
            if img.unit.summand >= w.source.summands.len()
                || img.unit.row >= w.source.summands[img.unit.summand]
                || img.unit.col >= w.source.summands[img.unit.summand]
            {
                return Err(Error::Parse(format!("unit {:?} not in the source algebra", img.unit)));
            }
            images[w.source.unit_index(img.unit)] = Some(SparseMatrix::try_from(&img.matrix)?);
        }
        let images = images
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::Parse("missing matrix-unit image".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            residuals: Residuals::try_from(&w.residuals)?,
            tolerance: w
                .tolerance
                .parse()
                .map_err(|_| Error::Parse(format!("bad tolerance {:?}", w.tolerance)))?,
            source: w.source,
            target: w.target,
            mode: w.mode,
            seed: w.seed,
            images,
            exact_zero: w.exact_zero,
        })
    }
}

/// Construction-side residuals in exact arithmetic. `generators` are basis
/// permutations (as images) that the target's group acts by.
pub(crate) fn exact_residuals(
    source: &SourceAlgebra,
    images: &[ExactMatrix],
    generators: &[Vec<usize>],
) -> (Residuals, ExactZeroFlags) {
    let units = source.units();
    let dim = images.first().map_or(0, SparseMatrix::dim);
    let mut unit_sum = ExactMatrix::zeros(dim);
    for (u, img) in units.iter().zip(images) {
        if u.row == u.col {
            unit_sum = &unit_sum + img;
        }
    }
    let unital = &unit_sum - &ExactMatrix::identity(dim);

    let mut mult = 0f64;
    let mut mult_exact = true;
    for (a, x) in units.iter().zip(images) {
        for (b, y) in units.iter().zip(images) {
            let prod = x * y;
            let expected = if a.summand == b.summand && a.col == b.row {
                let idx = source.unit_index(MatrixUnit {
                    summand: a.summand,
                    row: a.row,
                    col: b.col,
                });
                images[idx].clone()
            } else {
                ExactMatrix::zeros(dim)
            };
            let diff = &prod - &expected;
            mult_exact &= diff.is_zero();
            mult = mult.max(diff.frobenius_norm());
        }
    }

    let mut star = 0f64;
    let mut star_exact = true;
    for (u, x) in units.iter().zip(images) {
        let adj = &images[source.unit_index(MatrixUnit {
            summand: u.summand,
            row: u.col,
            col: u.row,
        })];
        let diff = adj - &x.transpose();
        star_exact &= diff.is_zero();
        star = star.max(diff.frobenius_norm());
    }

    let mut equi = 0f64;
    let mut equi_exact = true;
    for x in images {
        for g in generators {
            let diff = &x.conjugate_by_permutation(g) - x;
            equi_exact &= diff.is_zero();
            equi = equi.max(diff.frobenius_norm());
        }
    }

    (
        Residuals {
            unital: unital.frobenius_norm(),
            multiplicative: mult,
            star,
            equivariance: equi,
        },
        ExactZeroFlags {
            unital: unital.is_zero(),
            multiplicative: mult_exact,
            star: star_exact,
            equivariance: equi_exact,
        },
    )
}

/// Generators of the target's group as basis permutations.
pub(crate) fn target_generators(target: &TargetAlgebra) -> Vec<Vec<usize>> {
    match target.tensor_action() {
        Some((m, n)) => crate::perm::Permutation::adjacent_transpositions(n)
            .iter()
            .map(|g| crate::tensor_rep::permutation_images(g, m))
            .collect(),
        None => Vec::new(),
    }
}

pub(crate) fn exact_certificate(
    source: SourceAlgebra,
    target: TargetAlgebra,
    images: Vec<ExactMatrix>,
) -> EmbeddingCertificate {
    let (residuals, exact_zero) = exact_residuals(&source, &images, &target_generators(&target));
    EmbeddingCertificate {
        source,
        target,
        mode: Mode::Exact,
        seed: 0,
        tolerance: 0.0,
        images,
        residuals,
        exact_zero,
    }
}

/// All images nonzero, which for a unital `*`-homomorphism out of a sum of
/// simple algebras is injectivity.
pub fn images_nonzero(cert: &EmbeddingCertificate) -> bool {
    cert.images.iter().all(|m| !m.is_zero())
}
