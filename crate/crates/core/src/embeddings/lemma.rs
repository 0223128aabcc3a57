//! Unital embeddings `M_p → (M_m^{⊗n})^{S_n}` when `v_p(m) > v_p(n!)`.
//!
//! Two constructions:
//!
//! - **numeric**: exact isotypic projections and commutant basis, then a
//!   seeded random self-adjoint commutant element is diagonalised block by
//!   block; its spectral projections are split into `p` equal groups and
//!   linked by partial isometries from polar decompositions. Images are
//!   rounded to dyadic rationals and the last diagonal unit is completed
//!   exactly, so unitality holds exactly and the other residuals are small.
//! - **exact**: with `j = v_p(n) + 1` and `r = m / p^j`, the colour shift
//!   `τ : c ↦ c + r mod m` has order `p^j` and no weight (content vector) of
//!   length `n` is fixed by `τ^{p^{j-1}}`, so every `τ`-orbit of weights
//!   has size divisible by `p`. Sorting weights into `p` classes along their
//!   orbits gives diagonal projections `F_0, …, F_{p-1}`, and with
//!   `T = τ^{⊗n}` the images `e_{ab} ↦ T^{a-b} F_b` are 0/1 matrices.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    exact_certificate, target_generators, EmbeddingCertificate, ExactZeroFlags, Mode, Residuals, SourceAlgebra,
    TargetAlgebra, DEFAULT_GAP_TOLERANCE, DEFAULT_TOLERANCE, MAX_RETRIES,
};
use crate::error::{Error, Result};
use crate::partitions::{ensure_prime, irrep_dimension, p_adic_valuation, p_adic_valuation_factorial};
use crate::schur_weyl::multiplicities;
use crate::tensor_rep::{
    commutant_basis, flat_to_digits, isotypic_projection, tensor_dim, MAX_PROJECTION_N, MAX_TENSOR_DIM,
};
use crate::{ExactMatrix, Rational};

/// Entries below this magnitude are dropped when rounding numeric images.
const CHOP: f64 = 1e-14;
/// Relative singular-value floor for the partial isometries.
const RANK_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaOptions {
    pub mode: Mode,
    pub seed: u64,
    pub tolerance: f64,
    pub gap_tolerance: f64,
    pub max_retries: u32,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Numeric,
            seed: 0,
            tolerance: DEFAULT_TOLERANCE,
            gap_tolerance: DEFAULT_GAP_TOLERANCE,
            max_retries: MAX_RETRIES,
        }
    }
}

fn check_hypotheses(m: usize, n: usize, p: u64) -> Result<()> {
    ensure_prime(p)?;
    if n == 0 {
        return Err(Error::HypothesisFailure("n must be at least 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let vm = p_adic_valuation(m as u64, p).expect("m > 0");
    let vf = p_adic_valuation_factorial(n as u64, p)?;
    if vm <= vf {
        return Err(Error::HypothesisFailure(format!(
            "no k >= 1 with {p}^k | {m} and {p}^k ∤ {n}!: v_p(m) = {vm}, v_p(n!) = {vf}"
        )));
    }
    Ok(())
}

pub fn construct_mp_embedding(m: usize, n: usize, p: u64, options: &LemmaOptions) -> Result<EmbeddingCertificate> {
    check_hypotheses(m, n, p)?;
    tensor_dim(m, n, MAX_TENSOR_DIM)?;
    match options.mode {
        Mode::Exact => {
            let images = color_shift_units(m, n, p as usize)?;
            Ok(exact_certificate(
                SourceAlgebra::matrix(p as usize),
                TargetAlgebra::FixedPoint { m, n },
                images,
            ))
        }
        Mode::Numeric => numeric_embedding(m, n, p as usize, options),
    }
}

/// Matrix-unit images of the colour-shift construction, in row-major unit
/// order. Requires `p^{v_p(n)+1} | m`.
pub(crate) fn color_shift_units(m: usize, n: usize, p: usize) -> Result<Vec<ExactMatrix>> {
    let j =
        p_adic_valuation(n as u64, p as u64).ok_or_else(|| Error::HypothesisFailure("n must be positive".into()))?;
    let order = p.pow(j + 1);
    if !m.is_multiple_of(order) {
        return Err(Error::HypothesisFailure(format!("{order} does not divide {m}")));
    }
    let r = m / order;
    let dim = tensor_dim(m, n, MAX_TENSOR_DIM)?;
    let dims = vec![m; n];

    let rotate = |w: &[usize], s: usize| -> Vec<usize> { (0..m).map(|c| w[(c + m - s % m) % m]).collect() };
    let mut slot_cache: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut slot = vec![0usize; dim];
    for (f, s) in slot.iter_mut().enumerate() {
        let mut weight = vec![0usize; m];
        for d in flat_to_digits(&dims, f) {
            weight[d] += 1;
        }
        *s = *slot_cache.entry(weight.clone()).or_insert_with(|| {
            let rep = (0..order)
                .map(|t| rotate(&weight, t * r))
                .max()
                .expect("nonempty orbit");
            let t = (0..order)
                .find(|&t| rotate(&rep, t * r) == weight)
                .expect("weight lies in its orbit");
            t % p
        });
    }

    let shift = |f: usize, e: usize| -> usize {
        flat_to_digits(&dims, f)
            .iter()
            .fold(0, |acc, &d| acc * m + (d + e * r) % m)
    };
    let mut images = Vec::with_capacity(p * p);
    for a in 0..p {
        for b in 0..p {
            let e = (a + order - b) % order;
            images.push(ExactMatrix::from_entries(
                dim,
                (0..dim)
                    .filter(|&f| slot[f] == b)
                    .map(|f| (shift(f, e), f, Rational::one())),
            ));
        }
    }
    Ok(images)
}

fn to_dense(x: &ExactMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(x.dim(), x.dim());
    for (r, c, v) in x.iter() {
        d[(r, c)] = v.to_f64().unwrap_or(f64::NAN);
    }
    d
}

fn to_exact(x: &DMatrix<f64>) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(x.nrows());
    for c in 0..x.ncols() {
        for r in 0..x.nrows() {
            let v = x[(r, c)];
            if v.abs() >= CHOP {
                out.set(r, c, Rational::from_float(v).expect("finite entry"));
            }
        }
    }
    out
}

fn random_commutant_element(basis: &[ExactMatrix], dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut acc = ExactMatrix::zeros(dim);
    for b in basis {
        let num: i64 = rng.random_range(-100..=100);
        let den: i64 = rng.random_range(1..=64);
        if num != 0 {
            acc = &acc + &b.scale(&Rational::new(num.into(), den.into()));
        }
    }
    let dense = to_dense(&acc);
    let scale = dense.amax();
    if scale > 0.0 {
        dense / scale
    } else {
        dense
    }
}

/// Orthonormal basis of the range of a projection.
fn range_basis(proj: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(proj.clone());
    let cols: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .collect();
    eig.eigenvectors.select_columns(cols.iter())
}

/// Spectral projections of `s` restricted to the range of `q`, one per
/// eigenvalue cluster, ordered by eigenvalue. `None` if the clusters do not
/// come out as `count` clusters of size `size`.
fn spectral_clusters(
    s: &DMatrix<f64>,
    q: &DMatrix<f64>,
    count: usize,
    size: usize,
    gap: f64,
) -> Option<Vec<DMatrix<f64>>> {
    let compressed = q.transpose() * s * q;
    let sym = (&compressed + compressed.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cl) if eig.eigenvalues[i] - eig.eigenvalues[*cl.last().unwrap()] <= gap => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    if clusters.len() != count || clusters.iter().any(|c| c.len() != size) {
        return None;
    }
    Some(
        clusters
            .into_iter()
            .map(|cl| {
                let v = q * eig.eigenvectors.select_columns(cl.iter());
                &v * v.transpose()
            })
            .collect(),
    )
}

/// Polar part of `y`, assumed to have rank `rank`.
fn partial_isometry(y: &DMatrix<f64>, rank: usize) -> Option<DMatrix<f64>> {
    let svd = SVD::new(y.clone(), true, true);
    let sv = &svd.singular_values;
    let top = sv[0];
    if top == 0.0 || rank == 0 || sv[rank - 1] < RANK_FLOOR * top {
        return None;
    }
    let u = svd.u.as_ref()?.columns(0, rank).into_owned();
    let vt = svd.v_t.as_ref()?.rows(0, rank).into_owned();
    Some(u * vt)
}

fn numeric_embedding(m: usize, n: usize, p: usize, options: &LemmaOptions) -> Result<EmbeddingCertificate> {
    if n > MAX_PROJECTION_N {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n as u128,
            max: MAX_PROJECTION_N as u128,
        });
    }
    let dim = tensor_dim(m, n, MAX_TENSOR_DIM)?;
    let report = multiplicities(m, n)?;
    let mut blocks = Vec::new();
    for e in &report.entries {
        let mu = e.multiplicity.to_usize().expect("small multiplicity");
        if mu == 0 {
            continue;
        }
        let d = irrep_dimension(&e.lambda).to_usize().expect("small dimension");
        let q = range_basis(&to_dense(&isotypic_projection(&e.lambda, m)?));
        if q.ncols() != d * mu {
            return Err(Error::HypothesisFailure(format!(
                "isotypic projection for {} has rank {} instead of {}",
                e.lambda,
                q.ncols(),
                d * mu
            )));
        }
        blocks.push((mu, d, q));
    }
    let basis = commutant_basis(m, n)?;
    let generators = target_generators(&TargetAlgebra::FixedPoint { m, n });
    let dense_generators: Vec<DMatrix<f64>> = generators
        .iter()
        .map(|g| to_dense(&ExactMatrix::permutation(g)))
        .collect();

    let mut seed = options.seed;
    for attempt in 0..=options.max_retries {
        seed = options.seed.wrapping_add(attempt as u64);
        if let Some(cert) = numeric_attempt(m, n, p, dim, &blocks, &basis, &dense_generators, seed, options) {
            return Ok(cert);
        }
    }
    Err(Error::SplittingDegenerate {
        retries: options.max_retries,
        last_seed: seed,
    })
}

#[allow(clippy::too_many_arguments)]
fn numeric_attempt(
    m: usize,
    n: usize,
    p: usize,
    dim: usize,
    blocks: &[(usize, usize, DMatrix<f64>)],
    basis: &[ExactMatrix],
    generators: &[DMatrix<f64>],
    seed: u64,
    options: &LemmaOptions,
) -> Option<EmbeddingCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_commutant_element(basis, dim, &mut rng);
    let s = &a + a.transpose();
    let x = random_commutant_element(basis, dim, &mut rng);

    let mut groups = vec![DMatrix::<f64>::zeros(dim, dim); p];
    for (mu, d, q) in blocks {
        let clusters = spectral_clusters(&s, q, *mu, *d, options.gap_tolerance)?;
        let per_group = mu / p;
        for (i, e) in clusters.iter().enumerate() {
            groups[i / per_group] += e;
        }
    }
    let rank = groups[0].trace().round() as usize;
    let mut isometries = vec![groups[0].clone()];
    for g in &groups[1..] {
        isometries.push(partial_isometry(&(g * &x * &groups[0]), rank)?);
    }

    let mut images = Vec::with_capacity(p * p);
    for wa in &isometries {
        for wb in &isometries {
            images.push(to_exact(&(wa * wb.transpose())));
        }
    }
    let last = p * p - 1;
    let mut completion = ExactMatrix::identity(dim);
    for i in 0..p - 1 {
        completion = &completion - &images[i * p + i];
    }
    images[last] = completion;

    let source = SourceAlgebra::matrix(p);
    let (residuals, exact_zero) = numeric_residuals(&source, &images, generators);
    let cert = EmbeddingCertificate {
        source,
        target: TargetAlgebra::FixedPoint { m, n },
        mode: Mode::Numeric,
        seed,
        tolerance: options.tolerance,
        images,
        residuals,
        exact_zero,
    };
    cert.is_valid().then_some(cert)
}

fn numeric_residuals(
    source: &SourceAlgebra,
    images: &[ExactMatrix],
    generators: &[DMatrix<f64>],
) -> (Residuals, ExactZeroFlags) {
    let p = source.summands[0];
    let dim = images[0].dim();
    let mut sum = ExactMatrix::zeros(dim);
    for i in 0..p {
        sum = &sum + &images[i * p + i];
    }
    let unital = &sum - &ExactMatrix::identity(dim);
    let dense: Vec<DMatrix<f64>> = images.iter().map(to_dense).collect();
    let zero = DMatrix::<f64>::zeros(dim, dim);
    let mut res = Residuals {
        unital: unital.frobenius_norm(),
        ..Residuals::default()
    };
    for a in 0..p {
        for b in 0..p {
            let x = &dense[a * p + b];
            res.star = res.star.max((&dense[b * p + a] - x.transpose()).norm());
            for u in generators {
                res.equivariance = res.equivariance.max((x * u - u * x).norm());
            }
            for c in 0..p {
                for d in 0..p {
                    let expected = if b == c { &dense[a * p + d] } else { &zero };
                    res.multiplicative = res.multiplicative.max((x * &dense[c * p + d] - expected).norm());
                }
            }
        }
    }
    (
        res,
        ExactZeroFlags {
            unital: unital.is_zero(),
            ..ExactZeroFlags::default()
        },
    )
}

#[cfg(test)]
fn all_entries_zero_or_one(images: &[ExactMatrix]) -> bool {
    images
        .iter()
        .all(|m| m.iter().all(|(_, _, v)| v.is_one() || num_traits::Zero::is_zero(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::MatrixUnit;
    use crate::schur_weyl::check_lemma;
    use crate::tensor_rep::average_over_group;

    fn exact() -> LemmaOptions {
        LemmaOptions {
            mode: Mode::Exact,
            ..LemmaOptions::default()
        }
    }

    #[test]
    fn two_one_two_exact_is_identity() {
        let cert = construct_mp_embedding(2, 1, 2, &exact()).unwrap();
        assert!(cert.exact_zero.all());
        for u in cert.source.units() {
            let img = cert.image(u);
            assert_eq!(
                img.iter().map(|(r, c, _)| (r, c)).collect::<Vec<_>>(),
                vec![(u.row, u.col)]
            );
        }
    }

    #[test]
    fn two_one_two_numeric_is_valid() {
        let cert = construct_mp_embedding(2, 1, 2, &LemmaOptions::default()).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.residuals);
    }

    #[test]
    fn exact_mode_covers_every_hypothesis_case_small() {
        for m in 1..=8usize {
            for n in 1..=3usize {
                if m.pow(n as u32) > 512 {
                    continue;
                }
                for p in [2u64, 3, 5, 7] {
                    let holds = (1..=3).any(|k| check_lemma(m, n, p, k).map(|v| v.hypotheses_hold).unwrap_or(false));
                    let res = construct_mp_embedding(m, n, p, &exact());
                    assert_eq!(res.is_ok(), holds, "(m,n,p)=({m},{n},{p})");
                    if let Ok(cert) = res {
                        assert!(cert.exact_zero.all(), "(m,n,p)=({m},{n},{p})");
                        assert!(all_entries_zero_or_one(&cert.images));
                    }
                }
            }
        }
    }

    #[test]
    fn exact_images_are_group_averages_fixed() {
        let cert = construct_mp_embedding(4, 2, 2, &exact()).unwrap();
        for img in &cert.images {
            assert_eq!(&average_over_group(img, 4, 2).unwrap(), img);
        }
    }

    #[test]
    fn numeric_three_two_three() {
        let cert = construct_mp_embedding(3, 2, 3, &LemmaOptions::default()).unwrap();
        assert!(cert.exact_zero.unital);
        assert!(cert.residuals.max() <= 1e-9, "{:?}", cert.residuals);
        assert_eq!(cert.images.len(), 9);
        assert_eq!(
            cert.image(MatrixUnit {
                summand: 0,
                row: 0,
                col: 0
            })
            .dim(),
            9
        );
    }

    #[test]
    fn numeric_four_three_two() {
        let cert = construct_mp_embedding(4, 3, 2, &LemmaOptions::default()).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.residuals);
        assert_eq!(cert.images[0].dim(), 64);
        for i in [0, 3] {
            assert!((cert.images[i].trace().to_f64().unwrap() - 32.0).abs() < 1e-9);
        }
    }

    #[test]
    fn numeric_is_deterministic() {
        let a = construct_mp_embedding(3, 2, 3, &LemmaOptions::default()).unwrap();
        let b = construct_mp_embedding(3, 2, 3, &LemmaOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hypothesis_failures() {
        assert!(matches!(
            construct_mp_embedding(2, 2, 2, &LemmaOptions::default()),
            Err(Error::HypothesisFailure(_))
        ));
        assert!(matches!(
            construct_mp_embedding(3, 1, 2, &exact()),
            Err(Error::HypothesisFailure(_))
        ));
        assert!(matches!(
            construct_mp_embedding(4, 1, 4, &exact()),
            Err(Error::NotPrime(4))
        ));
        assert!(construct_mp_embedding(2, 0, 2, &exact()).is_err());
    }

    #[test]
    fn degenerate_splitting_reports_last_seed() {
        let opts = LemmaOptions {
            gap_tolerance: 10.0,
            max_retries: 2,
            seed: 5,
            ..LemmaOptions::default()
        };
        match construct_mp_embedding(3, 2, 3, &opts) {
            Err(Error::SplittingDegenerate { retries, last_seed }) => assert_eq!((retries, last_seed), (2, 7)),
            other => panic!("{other:?}"),
        }
    }
}
