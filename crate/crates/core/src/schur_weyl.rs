//! Multiplicities of the irreducible `S_n`-modules inside `(C^m)^{⊗n}`, the
//! resulting block shape of the fixed-point algebra `(M_m^{⊗n})^{S_n}`, the
//! prime-divisibility check on those blocks, and isotropy types of points of
//! the ordered simplex.
//!
//! Multiplicities are computed twice, independently: as character inner
//! products `⟨χ_λ, χ⟩` with `χ(ρ) = m^{ℓ(ρ)}`, and as counts of semistandard
//! tableaux by the hook-content formula.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{character_table, inner_product, permutation_character, ClassFunction};
use crate::error::{Error, Result};
use crate::partitions::{
    ensure_prime, factorial, hook_lengths, irrep_dimension, p_adic_valuation_factorial, Partition,
};

pub const MAX_M: usize = 64;
pub const MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub lambda: Partition,
    #[serde(with = "crate::serde_util::int")]
    pub dim: BigUint,
    #[serde(with = "crate::serde_util::int")]
    pub multiplicity: BigUint,
}

/// Decomposition of `(C^m)^{⊗n}` under `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<MultiplicityEntry>,
    /// `Σ μ(λ) dim(λ)`; equals `m^n`.
    #[serde(with = "crate::serde_util::int")]
    pub total_dim_check: BigUint,
    /// `Σ μ(λ)²`, the dimension of the commutant.
    #[serde(with = "crate::serde_util::int")]
    pub commutant_dim: BigUint,
}

impl DecompositionReport {
    pub fn multiplicity(&self, lambda: &Partition) -> Option<&BigUint> {
        self.entries
            .iter()
            .find(|e| &e.lambda == lambda)
            .map(|e| &e.multiplicity)
    }
}

fn check_caps(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if m > MAX_M {
        return Err(Error::LimitExceeded {
            what: "m",
            value: m as u128,
            max: MAX_M as u128,
        });
    }
    if n > MAX_N {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n as u128,
            max: MAX_N as u128,
        });
    }
    Ok(())
}

fn to_natural(q: &BigRational) -> BigUint {
    assert!(q.is_integer(), "multiplicity {q} is not an integer");
    assert!(!q.is_negative(), "multiplicity {q} is negative");
    q.to_integer().to_biguint().expect("nonnegative")
}

/// `μ(λ) = ⟨χ_λ, χ⟩` for every `λ ⊢ n`.
pub fn multiplicities(m: usize, n: usize) -> Result<DecompositionReport> {
    check_caps(m, n)?;
    let table = character_table(n)?;
    let chi = permutation_character(m, n)?;
    let mut entries = Vec::with_capacity(table.irrep_labels.len());
    for (lambda, row) in table.irrep_labels.iter().zip(&table.values) {
        let chi_lambda = ClassFunction { n, values: row.clone() };
        let multiplicity = to_natural(&inner_product(&chi_lambda, &chi)?);
        entries.push(MultiplicityEntry {
            lambda: lambda.clone(),
            dim: irrep_dimension(lambda),
            multiplicity,
        });
    }
    let total_dim_check = entries.iter().map(|e| &e.multiplicity * &e.dim).sum();
    let commutant_dim = entries.iter().map(|e| &e.multiplicity * &e.multiplicity).sum();
    Ok(DecompositionReport {
        m,
        n,
        entries,
        total_dim_check,
        commutant_dim,
    })
}

/// Number of semistandard tableaux of shape `λ` with entries in `1..=m`:
/// `∏_{(i,j) ∈ λ} (m + j - i) / hook(i, j)`.
pub fn multiplicity_hook_content(lambda: &Partition, m: usize) -> BigUint {
    if lambda.len() > m {
        return BigUint::zero();
    }
    let hooks = hook_lengths(lambda);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, j) in lambda.cells() {
        num *= BigUint::from(m + j - i);
        den *= BigUint::from(hooks[i][j]);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Block sizes of `(M_m^{⊗n})^{S_n} ≅ ⊕_λ M_{μ(λ)}`, zero blocks dropped.
pub fn fixed_point_shape(m: usize, n: usize) -> Result<Vec<BigUint>> {
    Ok(multiplicities(m, n)?
        .entries
        .into_iter()
        .map(|e| e.multiplicity)
        .filter(|mu| !mu.is_zero())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub lambda: Partition,
    #[serde(with = "crate::serde_util::int")]
    pub multiplicity: BigUint,
}

/// A prime with infinite exponent in a supernatural number; stands for the
/// UHF algebra `M_{p^∞}` that the finite `M_p` embedding bootstraps to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupernaturalFactor {
    pub prime: u64,
    pub exponent: String,
}

impl SupernaturalFactor {
    pub fn infinite(prime: u64) -> Self {
        Self {
            prime,
            exponent: "infinity".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub m: usize,
    pub n: usize,
    pub p: u64,
    pub k: u32,
    /// `p^k | m`
    pub prime_power_divides_m: bool,
    /// `v_p(n!)`
    pub factorial_valuation: u32,
    pub hypotheses_hold: bool,
    pub all_divisible: bool,
    pub counterexamples: Vec<Counterexample>,
    /// Present when the hypotheses hold: `M_{p^∞}` embeds in the fixed-point
    /// algebra of the `n`-fold power of any UHF algebra of type `p^∞`.
    pub uhf_shadow: Option<SupernaturalFactor>,
}

impl LemmaVerdict {
    /// Hypotheses hold but some block is not divisible by `p`.
    pub fn is_violation(&self) -> bool {
        self.hypotheses_hold && !self.counterexamples.is_empty()
    }
}

/// Tests `p | μ(λ)` for all `λ ⊢ n` and records whether `p^k | m` and
/// `p^k ∤ n!`. Counterexamples are reported whether or not the hypotheses hold.
pub fn check_lemma(m: usize, n: usize, p: u64, k: u32) -> Result<LemmaVerdict> {
    let report = multiplicities(m, n)?;
    check_lemma_with(&report, p, k)
}

/// As [`check_lemma`], reusing an existing decomposition.
pub fn check_lemma_with(report: &DecompositionReport, p: u64, k: u32) -> Result<LemmaVerdict> {
    ensure_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if report.n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let (m, n) = (report.m, report.n);
    let prime_power_divides_m = (BigUint::from(m) % BigUint::from(p).pow(k)).is_zero();
    let factorial_valuation = p_adic_valuation_factorial(n as u64, p)?;
    let hypotheses_hold = prime_power_divides_m && factorial_valuation < k;
    let bp = BigUint::from(p);
    let counterexamples: Vec<Counterexample> = report
        .entries
        .iter()
        .filter(|e| !(&e.multiplicity % &bp).is_zero())
        .map(|e| Counterexample {
            lambda: e.lambda.clone(),
            multiplicity: e.multiplicity.clone(),
        })
        .collect();
    Ok(LemmaVerdict {
        m,
        n,
        p,
        k,
        prime_power_divides_m,
        factorial_valuation,
        hypotheses_hold,
        all_divisible: counterexamples.is_empty(),
        counterexamples,
        uhf_shadow: hypotheses_hold.then(|| SupernaturalFactor::infinite(p)),
    })
}

/// Summary of a sweep of [`check_lemma`] over a box of parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub max_m: usize,
    pub max_n: usize,
    pub primes: Vec<u64>,
    pub max_k: u32,
    pub checked: usize,
    pub hypotheses_held: usize,
    /// Verdicts where the hypotheses hold and some block is not divisible.
    pub violations: Vec<LemmaVerdict>,
    /// Verdicts where the hypotheses fail and divisibility fails too.
    pub sharpness_examples: Vec<LemmaVerdict>,
    pub verdicts: Vec<LemmaVerdict>,
}

impl SweepReport {
    pub fn has_violation(&self) -> bool {
        !self.violations.is_empty()
    }

    /// One row per verdict.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,p,k,hypotheses_hold,all_divisible,counterexamples\n");
        for v in &self.verdicts {
            let ce: Vec<String> = v
                .counterexamples
                .iter()
                .map(|c| format!("{}:{}", c.lambda, c.multiplicity))
                .collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                v.m,
                v.n,
                v.p,
                v.k,
                v.hypotheses_hold,
                v.all_divisible,
                crate::characters::csv_field(&ce.join(" "))
            ));
        }
        out
    }
}

/// Runs [`check_lemma`] over `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n`, the given
/// primes and `1 ≤ k ≤ max_k`. Decompositions are computed once per `(m, n)`,
/// split across `parallelism` threads; verdict order is fixed regardless.
pub fn sweep_lemma(max_m: usize, max_n: usize, primes: &[u64], max_k: u32, parallelism: usize) -> Result<SweepReport> {
    for &p in primes {
        ensure_prime(p)?;
    }
    check_caps(max_m.max(1), max_n)?;
    let pairs: Vec<(usize, usize)> = (1..=max_m).flat_map(|m| (1..=max_n).map(move |n| (m, n))).collect();
    let workers = parallelism.max(1).min(pairs.len().max(1));
    let chunk = pairs.len().div_ceil(workers).max(1);
    let reports: Vec<Result<DecompositionReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(|&(m, n)| multiplicities(m, n)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut verdicts = Vec::new();
    for report in reports {
        let report = report?;
        for &p in primes {
            for k in 1..=max_k {
                verdicts.push(check_lemma_with(&report, p, k)?);
            }
        }
    }
    Ok(SweepReport {
        max_m,
        max_n,
        primes: primes.to_vec(),
        max_k,
        checked: verdicts.len(),
        hypotheses_held: verdicts.iter().filter(|v| v.hypotheses_hold).count(),
        violations: verdicts.iter().filter(|v| v.is_violation()).cloned().collect(),
        sharpness_examples: verdicts
            .iter()
            .filter(|v| !v.hypotheses_hold && !v.all_divisible)
            .cloned()
            .collect(),
        verdicts,
    })
}

/// Where a fiber coordinate sits in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    /// `t = 0`
    ZeroEndpoint,
    /// `t = 1`
    OneEndpoint,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberFactor {
    #[serde(with = "crate::serde_util::rational")]
    pub value: BigRational,
    pub multiplicity: usize,
    pub kind: FiberKind,
}

/// Isotropy data of a point of `Δ = {t_1 ≤ ⋯ ≤ t_n} ⊂ [0,1]^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyReport {
    #[serde(with = "crate::serde_util::rational_seq")]
    pub t: Vec<BigRational>,
    #[serde(with = "crate::serde_util::rational_seq")]
    pub distinct_values: Vec<BigRational>,
    /// `k_1, …, k_ℓ`, one per distinct value.
    pub multiplicities: Vec<usize>,
    /// `H = S_{k_1} × ⋯ × S_{k_ℓ}`
    pub isotropy_group: String,
    #[serde(with = "crate::serde_util::int")]
    pub isotropy_order: BigUint,
    pub fibers: Vec<FiberFactor>,
    /// `⊗_j (E_{s_j}^{⊗k_j})^{S_{k_j}}`
    pub fiber_descriptor: String,
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

fn fiber_symbol(f: &FiberFactor) -> String {
    let base = match f.kind {
        FiberKind::ZeroEndpoint => "E₀".to_string(),
        FiberKind::OneEndpoint => "E₁".to_string(),
        FiberKind::Interior => format!("E_{{{}}}", crate::linalg::format_rational(&f.value)),
    };
    if f.multiplicity == 1 {
        base
    } else {
        format!("({base}^⊗{})^{{S{}}}", f.multiplicity, subscript(f.multiplicity))
    }
}

/// Groups equal coordinates of `t` (after sorting) and describes the
/// isotropy subgroup and the shape of the fixed fiber. Coordinates must be
/// exact rationals in `[0, 1]`.
pub fn isotropy_type(t: &[BigRational]) -> Result<IsotropyReport> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if let Some(bad) = t.iter().find(|x| **x < zero || **x > one) {
        return Err(Error::OutOfRange(crate::linalg::format_rational(bad)));
    }
    let mut sorted = t.to_vec();
    sorted.sort();
    let mut fibers: Vec<FiberFactor> = Vec::new();
    for x in &sorted {
        match fibers.last_mut() {
            Some(f) if f.value == *x => f.multiplicity += 1,
            _ => fibers.push(FiberFactor {
                value: x.clone(),
                multiplicity: 1,
                kind: if x.is_zero() {
                    FiberKind::ZeroEndpoint
                } else if x.is_one() {
                    FiberKind::OneEndpoint
                } else {
                    FiberKind::Interior
                },
            }),
        }
    }
    let multiplicities: Vec<usize> = fibers.iter().map(|f| f.multiplicity).collect();
    let isotropy_group = if multiplicities.is_empty() {
        "S₀".to_string()
    } else {
        multiplicities
            .iter()
            .map(|&k| format!("S{}", subscript(k)))
            .collect::<Vec<_>>()
            .join(" × ")
    };
    let isotropy_order = multiplicities.iter().map(|&k| factorial(k)).product();
    let fiber_descriptor = if fibers.is_empty() {
        "C".to_string()
    } else {
        fibers.iter().map(fiber_symbol).collect::<Vec<_>>().join(" ⊗ ")
    };
    Ok(IsotropyReport {
        distinct_values: fibers.iter().map(|f| f.value.clone()).collect(),
        t: sorted,
        multiplicities,
        isotropy_group,
        isotropy_order,
        fibers,
        fiber_descriptor,
    })
}

/// `m^n`, the dimension of `(C^m)^{⊗n}`.
pub fn tensor_dimension(m: usize, n: usize) -> BigUint {
    BigUint::from(m).pow(n as u32)
}

/// `μ(λ)` as a `usize`, for the matrix-building modules whose dimensions are
/// capped far below `usize::MAX`.
pub fn small_multiplicity(report: &DecompositionReport, lambda: &Partition) -> usize {
    report
        .multiplicity(lambda)
        .and_then(ToPrimitive::to_usize)
        .expect("multiplicity fits in usize under the dimension cap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Scalar;
    use crate::partitions::enumerate_partitions;
    use proptest::prelude::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn nat(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn mults(m: usize, n: usize) -> Vec<u64> {
        multiplicities(m, n)
            .unwrap()
            .entries
            .iter()
            .map(|e| e.multiplicity.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(mults(2, 3), vec![4, 2, 0]);
        assert_eq!(mults(4, 3), vec![20, 20, 4]);
        for n in 0..=6 {
            let ms = mults(1, n);
            assert_eq!(ms[0], 1);
            assert!(ms[1..].iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn hook_content_examples() {
        assert_eq!(multiplicity_hook_content(&part(&[2, 1]), 4), nat(20));
        assert_eq!(multiplicity_hook_content(&part(&[1, 1, 1]), 2), nat(0));
        assert_eq!(multiplicity_hook_content(&part(&[5]), 1), nat(1));
    }

    /// Brute-force count of semistandard tableaux, independent of both
    /// multiplicity routes.
    fn count_ssyt(lambda: &Partition, m: usize) -> u64 {
        let cells: Vec<(usize, usize)> = lambda.cells().collect();
        let mut filling = vec![0usize; cells.len()];
        fn go(idx: usize, cells: &[(usize, usize)], lambda: &Partition, m: usize, f: &mut Vec<usize>) -> u64 {
            if idx == cells.len() {
                return 1;
            }
            let (i, j) = cells[idx];
            let mut lo = 1;
            if j > 0 {
                lo = lo.max(f[idx - 1]);
            }
            if i > 0 {
                let above = lambda.parts()[..i - 1].iter().sum::<usize>() + j;
                lo = lo.max(f[above] + 1);
            }
            let mut total = 0;
            for v in lo..=m {
                f[idx] = v;
                total += go(idx + 1, cells, lambda, m, f);
            }
            total
        }
        go(0, &cells, lambda, m, &mut filling)
    }

    #[test]
    fn hook_content_matches_tableau_enumeration() {
        for m in 1..=4 {
            for n in 0..=5 {
                for lambda in enumerate_partitions(n).unwrap() {
                    assert_eq!(
                        multiplicity_hook_content(&lambda, m),
                        nat(count_ssyt(&lambda, m)),
                        "{lambda} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn two_routes_agree_and_dimensions_add_up() {
        for m in 1..=5 {
            for n in 0..=6 {
                let report = multiplicities(m, n).unwrap();
                for e in &report.entries {
                    assert_eq!(e.multiplicity, multiplicity_hook_content(&e.lambda, m));
                }
                assert_eq!(report.total_dim_check, tensor_dimension(m, n));
                assert_eq!(report.entries.len(), enumerate_partitions(n).unwrap().len());
            }
        }
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(multiplicities(65, 2), Err(Error::LimitExceeded { .. })));
        assert!(matches!(multiplicities(2, 13), Err(Error::LimitExceeded { .. })));
        assert!(multiplicities(0, 2).is_err());
    }

    #[test]
    fn lemma_examples() {
        let v = check_lemma(4, 3, 2, 2).unwrap();
        assert!(v.hypotheses_hold && v.all_divisible);
        assert_eq!(v.factorial_valuation, 1);
        assert_eq!(v.uhf_shadow, Some(SupernaturalFactor::infinite(2)));

        let v = check_lemma(3, 2, 3, 1).unwrap();
        assert!(v.hypotheses_hold && v.all_divisible);
        assert_eq!(mults(3, 2), vec![6, 3]);

        let v = check_lemma(2, 2, 2, 1).unwrap();
        assert!(!v.hypotheses_hold);
        assert!(!v.all_divisible);
        // symmetric square has dimension 3, exterior square 1
        assert_eq!(
            v.counterexamples,
            vec![
                Counterexample {
                    lambda: part(&[2]),
                    multiplicity: nat(3)
                },
                Counterexample {
                    lambda: part(&[1, 1]),
                    multiplicity: nat(1)
                }
            ]
        );
        assert!(!v.is_violation());
        assert_eq!(v.uhf_shadow, None);

        assert_eq!(check_lemma(4, 3, 4, 1), Err(Error::NotPrime(4)));
        assert!(check_lemma(4, 0, 2, 1).is_err());
    }

    #[test]
    fn fixed_point_shapes() {
        assert_eq!(fixed_point_shape(2, 2).unwrap(), vec![nat(3), nat(1)]);
        assert_eq!(fixed_point_shape(2, 3).unwrap(), vec![nat(4), nat(2)]);
        for m in 1..=6 {
            assert_eq!(fixed_point_shape(m, 1).unwrap(), vec![nat(m as u64)]);
        }
    }

    #[test]
    fn small_sweep_has_no_violation() {
        let report = sweep_lemma(12, 6, &[2, 3, 5, 7, 11], 3, 4).unwrap();
        assert!(!report.has_violation());
        assert_eq!(report.checked, 12 * 6 * 5 * 3);
        assert!(report.hypotheses_held > 0);
        assert!(report.sharpness_examples.iter().any(|v| (v.m, v.n, v.p) == (2, 2, 2)));
        let serial = sweep_lemma(12, 6, &[2, 3, 5, 7, 11], 3, 1).unwrap();
        assert_eq!(serial, report);
    }

    #[test]
    fn isotropy_examples() {
        let q = |n, d| BigRational::from_ratio(n, d);
        let r = isotropy_type(&[q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(r.multiplicities, vec![2, 1]);
        assert_eq!(r.fiber_descriptor, "(E₀^⊗2)^{S₂} ⊗ E₁");
        assert_eq!(r.isotropy_group, "S₂ × S₁");

        let r = isotropy_type(&[q(1, 2), q(1, 3), q(1, 5)]).unwrap();
        assert_eq!(r.multiplicities, vec![1, 1, 1]);
        assert_eq!(r.isotropy_order, nat(1));
        assert_eq!(r.t, vec![q(1, 5), q(1, 3), q(1, 2)]);
        assert_eq!(r.fiber_descriptor, "E_{1/5} ⊗ E_{1/3} ⊗ E_{1/2}");

        let r = isotropy_type(&vec![q(1, 4); 4]).unwrap();
        assert_eq!(r.multiplicities, vec![4]);
        assert_eq!(r.isotropy_order, nat(24));

        assert!(matches!(isotropy_type(&[q(3, 2)]), Err(Error::OutOfRange(_))));
        assert!(matches!(isotropy_type(&[q(-1, 2)]), Err(Error::OutOfRange(_))));
    }

    proptest! {
        #[test]
        fn isotropy_is_permutation_invariant(
            nums in proptest::collection::vec(0i64..=4, 1..8),
            seed in any::<u64>(),
        ) {
            let t: Vec<BigRational> = nums.iter().map(|&x| BigRational::from_ratio(x, 4)).collect();
            let mut shuffled = t.clone();
            // deterministic Fisher-Yates from the seed
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (s >> 33) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            let a = isotropy_type(&t).unwrap();
            let b = isotropy_type(&shuffled).unwrap();
            prop_assert_eq!(a.multiplicities.iter().sum::<usize>(), t.len());
            prop_assert_eq!(&a, &b);
            let mut ks = a.multiplicities.clone();
            ks.sort_unstable_by(|x, y| y.cmp(x));
            prop_assert!(Partition::new(ks).is_ok());
        }
    }
}
