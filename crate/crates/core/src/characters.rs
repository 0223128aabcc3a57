//! Irreducible characters of `S_n` by the Murnaghan–Nakayama rule, the
//! permutation character of `(C^m)^{⊗n}`, and exact class-function inner
//! products.
//!
//! Border strips are removed on the beta-set (abacus) encoding of a
//! partition: removing an `r`-strip moves one bead from position `x` to the
//! free position `x - r`, and the strip's height is the number of beads
//! strictly between the two positions.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{class_size, enumerate_partitions, factorial, Partition};

/// Largest `n` accepted by [`character_table`].
pub const MAX_TABLE_N: usize = 12;

/// Memo for `χ_λ(ρ)` keyed by `(λ, ρ)`; the largest part of `ρ` is consumed
/// first, so every key is a suffix of the original cycle type.
#[derive(Default, Debug)]
pub struct CharacterMemo {
    values: HashMap<(Partition, Partition), BigInt>,
}

impl CharacterMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `χ_λ` at the class `ρ`.
    pub fn character(&mut self, lambda: &Partition, rho: &Partition) -> Result<BigInt> {
        if lambda.n() != rho.n() {
            return Err(Error::MismatchedSize(lambda.n(), rho.n()));
        }
        Ok(self.eval(lambda, rho.parts()))
    }

    fn eval(&mut self, lambda: &Partition, rho: &[usize]) -> BigInt {
        let Some((&r, rest)) = rho.split_first() else {
            return BigInt::one();
        };
        let key = (
            lambda.clone(),
            Partition::new(rho.to_vec()).expect("suffix of a partition"),
        );
        if let Some(v) = self.values.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::from(0);
        for (smaller, height) in remove_border_strips(lambda, r) {
            let v = self.eval(&smaller, rest);
            if height % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.values.insert(key, total.clone());
        total
    }
}

/// Every way of removing a border strip of length `r` from `λ`, with the
/// strip's height (rows spanned minus one).
pub fn remove_border_strips(lambda: &Partition, r: usize) -> Vec<(Partition, usize)> {
    let len = lambda.len();
    let beta: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (len - 1 - i))
        .collect();
    let mut out = Vec::new();
    for (i, &x) in beta.iter().enumerate() {
        if x < r {
            continue;
        }
        let target = x - r;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&b| b > target && b < x).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(j, &b)| b - (len - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        out.push((Partition::new(parts).expect("strip removal keeps a partition"), height));
    }
    out
}

/// `χ_λ(ρ)` for a single pair, with a fresh memo.
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<BigInt> {
    CharacterMemo::new().character(lambda, rho)
}

/// Class function on `S_n`, one value per class in canonical partition order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFunction {
    pub n: usize,
    #[serde(with = "crate::serde_util::int_seq")]
    pub values: Vec<BigInt>,
}

impl ClassFunction {
    pub fn new(n: usize, values: Vec<BigInt>) -> Result<Self> {
        let classes = enumerate_partitions(n)?.len();
        if values.len() != classes {
            return Err(Error::DimensionMismatch {
                expected: classes,
                actual: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn class_labels(&self) -> Vec<Partition> {
        enumerate_partitions(self.n).expect("n was validated on construction")
    }

    pub fn value_at(&self, class: &Partition) -> Option<&BigInt> {
        let idx = self.class_labels().iter().position(|c| c == class)?;
        self.values.get(idx)
    }
}

/// `χ_λ` as a class function.
pub fn irreducible_character(lambda: &Partition) -> Result<ClassFunction> {
    let mut memo = CharacterMemo::new();
    irreducible_character_with(lambda, &mut memo)
}

fn irreducible_character_with(lambda: &Partition, memo: &mut CharacterMemo) -> Result<ClassFunction> {
    let n = lambda.n();
    let values = enumerate_partitions(n)?
        .iter()
        .map(|rho| memo.character(lambda, rho))
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(n, values)
}

/// Character of `g ↦ U_g` on `(C^m)^{⊗n}`: `m^{ℓ(ρ)}` at the class `ρ`.
pub fn permutation_character(m: usize, n: usize) -> Result<ClassFunction> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let values = enumerate_partitions(n)?
        .iter()
        .map(|rho| BigInt::from(m).pow(rho.len() as u32))
        .collect();
    ClassFunction::new(n, values)
}

/// `(1/n!) Σ_μ |class μ| f(μ) h(μ)`, exactly.
pub fn inner_product(f: &ClassFunction, h: &ClassFunction) -> Result<BigRational> {
    if f.n != h.n {
        return Err(Error::MismatchedSize(f.n, h.n));
    }
    let classes = enumerate_partitions(f.n)?;
    if f.values.len() != classes.len() || h.values.len() != classes.len() {
        return Err(Error::DimensionMismatch {
            expected: classes.len(),
            actual: f.values.len().min(h.values.len()),
        });
    }
    let sum: BigInt = classes
        .iter()
        .zip(f.values.iter().zip(&h.values))
        .map(|(c, (a, b))| BigInt::from(class_size(c)) * a * b)
        .sum();
    Ok(BigRational::new(sum, BigInt::from(factorial(f.n))))
}

/// Full character table of `S_n`; rows are irreducibles, columns classes,
/// both in canonical (reverse-lexicographic) partition order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub n: usize,
    #[serde(rename = "irreps")]
    pub irrep_labels: Vec<Partition>,
    #[serde(rename = "classes")]
    pub class_labels: Vec<Partition>,
    #[serde(with = "crate::serde_util::int_seq")]
    pub class_sizes: Vec<BigUint>,
    #[serde(with = "crate::serde_util::int_table")]
    pub values: Vec<Vec<BigInt>>,
}

pub fn character_table(n: usize) -> Result<CharacterTable> {
    if n > MAX_TABLE_N {
        return Err(Error::LimitExceeded {
            what: "n",
            value: n as u128,
            max: MAX_TABLE_N as u128,
        });
    }
    let labels = enumerate_partitions(n)?;
    let mut memo = CharacterMemo::new();
    let values = labels
        .iter()
        .map(|lambda| Ok(irreducible_character_with(lambda, &mut memo)?.values))
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterTable {
        n,
        irrep_labels: labels.clone(),
        class_sizes: labels.iter().map(class_size).collect(),
        class_labels: labels,
        values,
    })
}

impl CharacterTable {
    pub fn row(&self, lambda: &Partition) -> Option<ClassFunction> {
        let i = self.irrep_labels.iter().position(|l| l == lambda)?;
        Some(ClassFunction {
            n: self.n,
            values: self.values[i].clone(),
        })
    }

    /// `Σ_μ |μ| χ_λ(μ) χ_ν(μ)` for every pair `(λ, ν)`.
    pub fn row_gram(&self) -> Vec<Vec<BigInt>> {
        let sizes: Vec<BigInt> = self.class_sizes.iter().cloned().map(BigInt::from).collect();
        self.values
            .iter()
            .map(|a| {
                self.values
                    .iter()
                    .map(|b| sizes.iter().zip(a.iter().zip(b)).map(|(s, (x, y))| s * x * y).sum())
                    .collect()
            })
            .collect()
    }

    /// Row orthogonality `Σ_μ |μ| χ_λ(μ) χ_ν(μ) = n! δ_{λν}`.
    pub fn rows_orthogonal(&self) -> bool {
        let nf = BigInt::from(factorial(self.n));
        self.row_gram().iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { *v == nf } else { *v == BigInt::from(0) })
        })
    }

    /// Column orthogonality `Σ_λ χ_λ(μ) χ_λ(ν) = z_μ δ_{μν}`.
    pub fn columns_orthogonal(&self) -> bool {
        let k = self.class_labels.len();
        let nf = BigInt::from(factorial(self.n));
        (0..k).all(|a| {
            (0..k).all(|b| {
                let s: BigInt = self.values.iter().map(|row| &row[a] * &row[b]).sum();
                if a == b {
                    s * BigInt::from(self.class_sizes[a].clone()) == nf
                } else {
                    s == BigInt::from(0)
                }
            })
        })
    }

    /// Aligned text: a header of class labels, a class-size row, then one row
    /// per irreducible.
    pub fn to_text(&self) -> String {
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec![format!("S_{}", self.n)];
        header.extend(self.class_labels.iter().map(Partition::to_string));
        grid.push(header);
        let mut sizes = vec!["|class|".to_string()];
        sizes.extend(self.class_sizes.iter().map(BigUint::to_string));
        grid.push(sizes);
        for (label, row) in self.irrep_labels.iter().zip(&self.values) {
            let mut line = vec![label.to_string()];
            line.extend(row.iter().map(BigInt::to_string));
            grid.push(line);
        }
        render_aligned(&grid)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header = vec!["irrep".to_string()];
        header.extend(self.class_labels.iter().map(|c| csv_field(&c.to_string())));
        out.push_str(&header.join(","));
        out.push('\n');
        let mut sizes = vec!["class_size".to_string()];
        sizes.extend(self.class_sizes.iter().map(BigUint::to_string));
        out.push_str(&sizes.join(","));
        out.push('\n');
        for (label, row) in self.irrep_labels.iter().zip(&self.values) {
            let mut line = vec![csv_field(&label.to_string())];
            line.extend(row.iter().map(BigInt::to_string));
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub(crate) fn render_aligned(grid: &[Vec<String>]) -> String {
    let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            grid.iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in grid {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let pad = widths[j] - s.chars().count();
                if j == 0 {
                    format!("{s}{}", " ".repeat(pad))
                } else {
                    format!("{}{s}", " ".repeat(pad))
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
