//! Acceptance criteria, one line each. Run with
//! `cargo test -p symfix --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use symfix::characters::character_table;
use symfix::embeddings::{
    beta_action, canonical_sorted_vector, construct_corollary_embedding, construct_mp_embedding, embed_sum_into_matrix,
    verify_certificate, BlockAlgebraDescriptor, LemmaOptions, Mode,
};
use symfix::partitions::{enumerate_partitions, factorial, hook_lengths, represent_as_ap_bq};
use symfix::schur_weyl::{multiplicities, sweep_lemma};
use symfix::tensor_rep::{build_permutation_operator, commutant_basis, isotypic_projection};
use symfix::{ExactMatrix, Partition, Permutation};

const RESIDUAL_TOL: f64 = 1e-9;
const CHARACTER_BUDGET: Duration = Duration::from_secs(60);
const SWEEP_BUDGET: Duration = Duration::from_secs(120);
const EMBEDDING_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, elapsed: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= budget, || {
        format!(
            "{what} took {:.1}s, budget {}s",
            elapsed.as_secs_f64(),
            budget.as_secs()
        )
    })
}

fn character_integrality_and_orthogonality() -> Outcome {
    let start = Instant::now();
    for n in 0..=8usize {
        let table = character_table(n).map_err(|e| e.to_string())?;
        let order = BigInt::from(factorial(n));
        for (i, a) in table.values.iter().enumerate() {
            for (j, b) in table.values.iter().enumerate() {
                let sum: BigInt = a
                    .iter()
                    .zip(b)
                    .zip(&table.class_sizes)
                    .map(|((x, y), s)| x * y * BigInt::from(s.clone()))
                    .sum();
                let expected = if i == j { order.clone() } else { BigInt::zero() };
                ensure(sum == expected, || format!("n={n}: rows {i},{j} give {sum}"))?;
            }
        }
    }
    within(CHARACTER_BUDGET, start.elapsed(), "tables")?;
    Ok("n ≤ 8, integer entries, Σ|C|χχ' = n!δ".into())
}

/// Tuples in `[m]^n` constant on the cycles of `g`.
fn fixed_tuple_count(g: &Permutation, m: usize) -> usize {
    let n = g.len();
    (0..m.pow(n as u32))
        .filter(|&f| {
            let digits: Vec<usize> = (0..n).map(|i| (f / m.pow(i as u32)) % m).collect();
            (0..n).all(|i| digits[g.apply(i)] == digits[i])
        })
        .count()
}

fn permutation_character() -> Outcome {
    let mut checked = 0;
    for m in 1..=3usize {
        for n in 1..=5usize {
            for g in Permutation::all(n) {
                let trace = build_permutation_operator(&g, m).map_err(|e| e.to_string())?.trace();
                let cycles = g.cycles().len();
                let expected = m.pow(cycles as u32);
                ensure(trace == BigRational::from_integer(expected.into()), || {
                    format!("m={m}, g={g}: trace {trace}, expected {expected}")
                })?;
                ensure(fixed_tuple_count(&g, m) == expected, || {
                    format!("m={m}, g={g}: tuple count")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (m, g) pairs, trace = m^ℓ(g) = fixed tuples"))
}

fn partitions(n: usize) -> Result<Vec<Partition>, String> {
    enumerate_partitions(n).map_err(|e| e.to_string())
}

/// `∏_{cells} (m + c - r) / hook`.
fn hook_content(lambda: &Partition, m: usize) -> BigUint {
    let hooks = hook_lengths(lambda);
    let mut acc = BigRational::one();
    for (r, row) in hooks.iter().enumerate() {
        for (c, &h) in row.iter().enumerate() {
            let content = m as i64 + c as i64 - r as i64;
            acc *= BigRational::new(content.into(), (h as i64).into());
        }
    }
    acc.to_integer().to_biguint().unwrap_or_default()
}

fn multiplicity_oracle() -> Outcome {
    for m in 1..=5usize {
        for n in 1..=6usize {
            let report = multiplicities(m, n).map_err(|e| e.to_string())?;
            let mut total = BigUint::zero();
            for lambda in partitions(n)? {
                let mu = report.multiplicity(&lambda).cloned().unwrap_or_default();
                ensure(mu == hook_content(&lambda, m), || format!("m={m}, λ={lambda}: μ={mu}"))?;
                let entry = report.entries.iter().find(|e| e.lambda == lambda);
                total += mu * entry.map(|e| e.dim.clone()).unwrap_or_default();
            }
            ensure(total == BigUint::from(m).pow(n as u32), || {
                format!("m={m}, n={n}: Σμ·dim = {total}")
            })?;
        }
    }
    Ok("m ≤ 5, n ≤ 6, inner product = hook content, Σμ·dim = m^n".into())
}

fn lemma_sweep() -> Outcome {
    let start = Instant::now();
    let primes = [2u64, 3, 5, 7, 11];
    let parallelism = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let report = sweep_lemma(12, 6, &primes, 3, parallelism).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.violations.is_empty(), || {
        format!("{} violations", report.violations.len())
    })?;
    let sharp = report.sharpness_examples.iter().any(|v| {
        (v.m, v.n, v.p) == (2, 2, 2) && v.counterexamples.iter().any(|c| c.multiplicity == BigUint::from(3u8))
    });
    ensure(sharp, || "(2,2,2) with μ = 3 not reported".into())?;
    let held: Vec<_> = report.verdicts.iter().filter(|v| v.hypotheses_hold).collect();
    for v in &held {
        let mu = multiplicities(v.m, v.n).map_err(|e| e.to_string())?;
        ensure(mu.entries.iter().all(|e| (&e.multiplicity % v.p).is_zero()), || {
            format!("({},{},{}) not divisible", v.m, v.n, v.p)
        })?;
    }
    within(SWEEP_BUDGET, elapsed, "sweep")?;
    Ok(format!(
        "{} triples, {} with hypotheses, 0 counterexamples, {:.1}s",
        report.checked,
        held.len(),
        elapsed.as_secs_f64()
    ))
}

fn lemma_embeddings() -> Outcome {
    let mut parts = Vec::new();
    for (m, n, p) in [(3usize, 2usize, 3u64), (4, 3, 2)] {
        let start = Instant::now();
        let cert = construct_mp_embedding(m, n, p, &LemmaOptions::default()).map_err(|e| e.to_string())?;
        let report = verify_certificate(&cert);
        let elapsed = start.elapsed();
        ensure(cert.mode == Mode::Numeric, || "expected numeric mode".into())?;
        ensure(report.exact_zero.unital, || {
            format!("({m},{n},{p}): unitality not exact")
        })?;
        let r = report.residuals;
        ensure(
            r.multiplicative <= RESIDUAL_TOL && r.star <= RESIDUAL_TOL && r.equivariance <= RESIDUAL_TOL,
            || format!("({m},{n},{p}): residuals {r:?}"),
        )?;
        ensure(report.valid, || format!("({m},{n},{p}): {:?}", report.failures))?;
        within(EMBEDDING_BUDGET, elapsed, "embedding")?;
        parts.push(format!(
            "({m},{n},{p}) max residual {:.1e} in {:.1}s",
            r.max(),
            elapsed.as_secs_f64()
        ));
    }
    Ok(parts.join("; "))
}

fn fixed_summand_basis(p: usize, q: usize, n: usize, k: usize) -> Result<Vec<ExactMatrix>, String> {
    let side = |d: usize, len: usize| {
        if len == 0 {
            Ok(vec![ExactMatrix::identity(1)])
        } else {
            commutant_basis(d, len).map_err(|e| e.to_string())
        }
    };
    let left = side(p, n - k)?;
    let right = side(q, k)?;
    Ok(left.iter().flat_map(|a| right.iter().map(move |b| a.kron(b))).collect())
}

fn corollary_construction() -> Outcome {
    let (p, q, n) = (3usize, 5usize, 2usize);
    let cor = construct_corollary_embedding(p, q, n).map_err(|e| e.to_string())?;
    let report = verify_certificate(&cor.certificate);
    ensure(report.exact_zero.all() && report.valid, || {
        format!("certificate: {:?}", report.failures)
    })?;
    ensure(cor.checks.trivial_kernel, || {
        format!("rank {} < {}", cor.checks.phi_rank, cor.checks.source_dim)
    })?;
    for a in &cor.psi_phi {
        for g in Permutation::all(n) {
            ensure(&a.alpha(&g) == a, || format!("image not fixed by {g}"))?;
        }
    }

    let descriptor = BlockAlgebraDescriptor::new(p, q, n).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for k in 0..=n {
        let basis = fixed_summand_basis(p, q, n, k)?;
        for block in descriptor
            .blocks
            .iter()
            .filter(|b| canonical_sorted_vector(&b.v).0 == k)
        {
            let w = canonical_sorted_vector(&block.v).1;
            let dims = descriptor.factor_dims(&w);
            let reps: Vec<Permutation> = Permutation::all(n)
                .into_iter()
                .filter(|g| g.act_on_slots(&w) == block.v)
                .collect();
            for x in &basis {
                let first = beta_action(&reps[0], x, &dims).map_err(|e| e.to_string())?;
                for g in &reps[1..] {
                    ensure(beta_action(g, x, &dims).map_err(|e| e.to_string())? == first, || {
                        format!("β not well defined on block {:?}", block.v)
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!(
        "(3,5,2): exact certificate, rank {} = {}, fixed by S_2, β checked on {pairs} pairs",
        cor.checks.phi_rank, cor.checks.source_dim
    ))
}

fn frobenius_step() -> Outcome {
    let (p, q) = (3u64, 5u64);
    for k in 1..=40u64 {
        let brute = (1..=k / p).find_map(|a| {
            let rest = k.checked_sub(a * p)?;
            (rest > 0 && rest % q == 0).then_some((a, rest / q))
        });
        let w = represent_as_ap_bq(p, q, k).map_err(|e| e.to_string())?;
        ensure(w.a.zip(w.b) == brute, || {
            format!("k={k}: {:?} vs brute {brute:?}", (w.a, w.b))
        })?;
    }
    for k in 16..=400u64 {
        ensure(represent_as_ap_bq(p, q, k).map_err(|e| e.to_string())?.exists(), || {
            format!("k={k} not representable")
        })?;
    }
    ensure(
        !represent_as_ap_bq(p, q, 15).map_err(|e| e.to_string())?.exists(),
        || "15 representable".into(),
    )?;
    for (p, q, k) in [(3u64, 5u64, 8u64), (2, 3, 7)] {
        let w = represent_as_ap_bq(p, q, k).map_err(|e| e.to_string())?;
        let cert = embed_sum_into_matrix(p, q, k, &w).map_err(|e| e.to_string())?;
        let report = verify_certificate(&cert);
        ensure(
            cert.mode == Mode::Exact && report.exact_zero.all() && report.residuals.max() == 0.0,
            || format!("({p},{q},{k}) not exact: {:?}", report.failures),
        )?;
    }
    Ok("(3,5): brute force k ≤ 40, threshold 16, exact certificates (3,5,8), (2,3,7)".into())
}

fn structural_identities() -> Outcome {
    for m in 1..=3usize {
        for n in 1..=4usize {
            let basis = commutant_basis(m, n).map_err(|e| e.to_string())?;
            let expected: BigUint = partitions(n)?.iter().map(|l| hook_content(l, m).pow(2)).sum();
            ensure(BigUint::from(basis.len()) == expected, || {
                format!("m={m}, n={n}: {} basis elements, Σμ² = {expected}", basis.len())
            })?;

            let dim = m.pow(n as u32);
            let projections: Vec<ExactMatrix> = partitions(n)?
                .iter()
                .map(|l| isotypic_projection(l, m))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let mut sum = ExactMatrix::zeros(dim);
            for (i, a) in projections.iter().enumerate() {
                sum = &sum + a;
                for (j, b) in projections.iter().enumerate() {
                    let prod = a * b;
                    let ok = if i == j { &prod == a } else { prod.is_zero() };
                    ensure(ok, || format!("m={m}, n={n}: P_{i} P_{j} wrong"))?;
                }
            }
            ensure(sum == ExactMatrix::identity(dim), || format!("m={m}, n={n}: Σ P_λ ≠ 1"))?;
            for (a, l) in projections.iter().zip(partitions(n)?) {
                let rank = a.trace().to_integer().to_biguint().unwrap_or_default();
                let d = symfix::partitions::irrep_dimension(&l);
                ensure(rank == d * hook_content(&l, m), || format!("m={m}: trace of P_{l}"))?;
            }
        }
    }
    Ok("m ≤ 3, n ≤ 4: |basis| = Σμ², P_λ orthogonal idempotents summing to 1".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "character integrality and orthogonality",
            character_integrality_and_orthogonality,
        ),
        ("permutation character", permutation_character),
        ("multiplicity oracle equivalence", multiplicity_oracle),
        ("lemma sweep", lemma_sweep),
        ("explicit lemma embeddings", lemma_embeddings),
        ("corollary construction", corollary_construction),
        ("frobenius step", frobenius_step),
        ("structural identities", structural_identities),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
