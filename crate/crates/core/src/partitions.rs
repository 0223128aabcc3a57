//! Integer partitions as irreducible-representation and cycle-type labels of
//! `S_n`, and the small number theory around them: factorial valuations and
//! two-coin representability `k = a p + b q` with `a, b >= 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_N: usize = 30;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Sorts the given positive parts into decreasing order; zeros are dropped.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `(n)`, the trivial representation / the `n`-cycle class.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n] }
        }
    }

    /// `(1^n)`, the sign representation / the identity class.
    pub fn column(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts (rows of the diagram, or cycles of the class).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.parts.first().copied().unwrap_or(0);
        Self {
            parts: (0..cols)
                .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
                .collect(),
        }
    }

    /// `(part size, multiplicity)` pairs, part sizes decreasing.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Cells `(i, j)` of the Young diagram, 0-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"(2,1)"`, `"2,1"`, or `"()"`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() {
            return Ok(Self::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// All partitions of `n` in reverse-lexicographic order, starting at `(n)`
/// and ending at `(1^n)`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(n, MAX_PARTITION_N)
}

pub fn enumerate_partitions_capped(n: usize, max_n: usize) -> Result<Vec<Partition>> {
    if n > max_n {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n as u128,
            max: max_n as u128,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fill(n, n, &mut prefix, &mut out);
    Ok(out)
}

fn fill(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: prefix.clone() });
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        prefix.push(part);
        fill(remaining - part, part, prefix, out);
        prefix.pop();
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `z_λ = ∏ i^{m_i} m_i!`, the order of the centralizer of an element of
/// cycle type `λ`.
pub fn centralizer_order(lambda: &Partition) -> BigUint {
    lambda.multiplicities().into_iter().fold(BigUint::one(), |acc, (i, m)| {
        acc * BigUint::from(i).pow(m as u32) * factorial(m)
    })
}

/// Number of permutations in `S_n` with cycle type `λ`, i.e. `n! / z_λ`.
pub fn class_size(lambda: &Partition) -> BigUint {
    factorial(lambda.n()) / centralizer_order(lambda)
}

/// `hooks[i][j] = λ_i - j + λ'_j - i - 1` with 0-based `(i, j)`, which is the
/// usual `λ_i - j + λ'_j - i + 1` in 1-based coordinates.
pub fn hook_lengths(lambda: &Partition) -> Vec<Vec<usize>> {
    let conj = lambda.conjugate();
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &row)| (0..row).map(|j| row - j + conj.parts()[j] - i - 1).collect())
        .collect()
}

/// Dimension of the irreducible `S_n`-module `λ`, by the hook-length formula.
pub fn irrep_dimension(lambda: &Partition) -> BigUint {
    let hooks = hook_lengths(lambda)
        .iter()
        .flatten()
        .fold(BigUint::one(), |acc, &h| acc * BigUint::from(h));
    factorial(lambda.n()) / hooks
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `v_p(n!)` by Legendre's formula.
pub fn p_adic_valuation_factorial(n: u64, p: u64) -> Result<u32> {
    ensure_prime(p)?;
    let mut total = 0u64;
    let mut power = p;
    while power <= n {
        total += n / power;
        match power.checked_mul(p) {
            Some(next) => power = next,
            None => break,
        }
    }
    Ok(total as u32)
}

/// `v_p(x)` for a positive integer `x`; `None` for zero.
pub fn p_adic_valuation(x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// A representation `k = a p + b q` with positive `a, b`, or its absence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusWitness {
    pub p: u64,
    pub q: u64,
    pub k: u64,
    pub a: Option<u64>,
    pub b: Option<u64>,
}

impl FrobeniusWitness {
    pub fn exists(&self) -> bool {
        self.a.is_some() && self.b.is_some()
    }

    /// Checks the representation identity and positivity, when present.
    pub fn validate(&self) -> Result<()> {
        match (self.a, self.b) {
            (Some(a), Some(b)) if a >= 1 && b >= 1 && a * self.p + b * self.q == self.k => Ok(()),
            (None, None) => Err(Error::InvalidWitness(format!(
                "{} is not representable as a*{} + b*{}",
                self.k, self.p, self.q
            ))),
            _ => Err(Error::InvalidWitness(format!(
                "a={:?}, b={:?} do not satisfy a*{} + b*{} = {} with a, b >= 1",
                self.a, self.b, self.p, self.q, self.k
            ))),
        }
    }
}

fn check_distinct_primes(p: u64, q: u64) -> Result<()> {
    ensure_prime(p)?;
    ensure_prime(q)?;
    if p == q {
        return Err(Error::InvalidArgument(format!("p and q must differ (both {p})")));
    }
    Ok(())
}

/// Finds `k = a p + b q` with `a, b >= 1` and `a` minimal.
pub fn represent_as_ap_bq(p: u64, q: u64, k: u64) -> Result<FrobeniusWitness> {
    check_distinct_primes(p, q)?;
    let mut witness = FrobeniusWitness {
        p,
        q,
        k,
        a: None,
        b: None,
    };
    let mut a = 1;
    while a * p < k {
        let rest = k - a * p;
        if rest.is_multiple_of(q) {
            witness.a = Some(a);
            witness.b = Some(rest / q);
            break;
        }
        a += 1;
    }
    Ok(witness)
}

/// Smallest `N` such that every `k >= N` is representable with positive
/// coefficients. Found by scanning `k <= pq`; always equals `pq + 1`.
pub fn frobenius_threshold(p: u64, q: u64) -> Result<u64> {
    check_distinct_primes(p, q)?;
    let mut last_gap = 0;
    for k in 1..=p * q {
        if !represent_as_ap_bq(p, q, k)?.exists() {
            last_gap = k;
        }
    }
    let threshold = last_gap + 1;
    debug_assert_eq!(threshold, p * q + 1);
    Ok(threshold)
}
