use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Square sparse matrix keyed by `(row, col)`. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    dim: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_entries(dim, (0..dim).map(|i| (i, i, T::one())))
    }

    /// Builds a matrix from triplets; duplicate positions are summed.
    ///
    /// Panics if an index is out of range.
    pub fn from_entries(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut m = Self::zeros(dim);
        for (r, c, v) in triplets {
            m.add_at(r, c, v);
        }
        m
    }

    /// Permutation matrix sending basis vector `e_j` to `e_{images[j]}`.
    pub fn permutation(images: &[usize]) -> Self {
        Self::from_entries(images.len(), images.iter().enumerate().map(|(j, &i)| (i, j, T::one())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(T::zero)
    }

    /// Entries sorted by `(row, col)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(
            r < self.dim && c < self.dim,
            "index ({r}, {c}) out of range {}",
            self.dim
        );
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: T) {
        assert!(
            r < self.dim && c < self.dim,
            "index ({r}, {c}) out of range {}",
            self.dim
        );
        if v.is_zero() {
            return;
        }
        match self.entries.remove(&(r, c)) {
            Some(old) => {
                let s = old + v;
                if !s.is_zero() {
                    self.entries.insert((r, c), s);
                }
            }
            None => {
                self.entries.insert((r, c), v);
            }
        }
    }

    pub fn trace(&self) -> T {
        self.entries
            .iter()
            .filter(|(&(r, c), _)| r == c)
            .fold(T::zero(), |acc, (_, v)| acc + v.clone())
    }

    pub fn transpose(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_entries(self.dim, self.iter().map(|(r, c, v)| (r, c, v.clone() * s.clone())))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix::from_entries(self.dim, self.iter().map(|(r, c, v)| (r, c, f(v))))
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.commutator(other).is_zero()
    }

    /// `Π X Πᵀ` where `Π e_j = e_{images[j]}`; exact for every scalar type.
    pub fn conjugate_by_permutation(&self, images: &[usize]) -> Self {
        assert_eq!(images.len(), self.dim, "permutation size mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((images[r], images[c]), v.clone()))
                .collect(),
        }
    }

    /// Kronecker product, `self` on the more significant index.
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dim;
        let mut out = Self::zeros(self.dim * d);
        for (r1, c1, a) in self.iter() {
            for (r2, c2, b) in other.iter() {
                out.entries.insert((r1 * d + r2, c1 * d + c2), a.clone() * b.clone());
            }
        }
        out
    }

    /// Places `self` into a larger matrix, mapping local index `i` to
    /// `index_map[i]`.
    pub fn embed(&self, index_map: &[usize], ambient_dim: usize) -> Self {
        assert_eq!(index_map.len(), self.dim);
        Self {
            dim: ambient_dim,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((index_map[r], index_map[c]), v.clone()))
                .collect(),
        }
    }

    /// Compresses to the principal submatrix on `indices`.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.dim];
        for (i, &g) in indices.iter().enumerate() {
            local[g] = i;
        }
        Self {
            dim: indices.len(),
            entries: self
                .entries
                .iter()
                .filter(|(&(r, c), _)| local[r] != usize::MAX && local[c] != usize::MAX)
                .map(|(&(r, c), v)| ((local[r], local[c]), v.clone()))
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .values()
            .fold(0.0, |acc, v| {
                let x = v.to_f64_lossy();
                acc + x * x
            })
            .sqrt()
    }

    /// Row-major flat positions `r * dim + c`, for rank computations.
    pub fn flat_entries(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.entries
            .iter()
            .map(move |(&(r, c), v)| (r * self.dim + c, v.clone()))
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<T>> {
        let mut rows = vec![vec![T::zero(); self.dim]; self.dim];
        for (r, c, v) in self.iter() {
            rows[r][c] = v.clone();
        }
        rows
    }
}

impl<T: Scalar> Add for &SparseMatrix<T> {
    type Output = SparseMatrix<T>;

    fn add(self, rhs: Self) -> SparseMatrix<T> {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_at(r, c, v.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &SparseMatrix<T> {
    type Output = SparseMatrix<T>;

    fn sub(self, rhs: Self) -> SparseMatrix<T> {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_at(r, c, -v.clone());
        }
        out
    }
}

impl<T: Scalar> Mul for &SparseMatrix<T> {
    type Output = SparseMatrix<T>;

    fn mul(self, rhs: Self) -> SparseMatrix<T> {
        self.check_dim(rhs);
        T::matmul(self, rhs)
    }
}

fn rows_of<T>(m: &SparseMatrix<T>) -> Vec<Vec<(usize, &T)>> {
    let mut rows: Vec<Vec<(usize, &T)>> = vec![Vec::new(); m.dim];
    for (&(r, c), v) in &m.entries {
        rows[r].push((c, v));
    }
    rows
}

pub(crate) fn generic_mul<T: Scalar>(a: &SparseMatrix<T>, b: &SparseMatrix<T>) -> SparseMatrix<T> {
    let b_rows = rows_of(b);
    let mut out = SparseMatrix::zeros(a.dim);
    let mut acc: BTreeMap<usize, T> = BTreeMap::new();
    for (r, row) in rows_of(a).into_iter().enumerate() {
        for (k, x) in row {
            for &(c, y) in &b_rows[k] {
                let term = x.clone() * y.clone();
                match acc.get_mut(&c) {
                    Some(slot) => *slot = slot.clone() + term,
                    None => {
                        acc.insert(c, term);
                    }
                }
            }
        }
        for (c, v) in std::mem::take(&mut acc) {
            if !v.is_zero() {
                out.entries.insert((r, c), v);
            }
        }
    }
    out
}

/// Scales to a common denominator, multiplies integer matrices, and reduces
/// each entry once. Uses `i128` accumulation when the numerators are small.
pub(crate) fn rational_mul(a: &SparseMatrix<BigRational>, b: &SparseMatrix<BigRational>) -> SparseMatrix<BigRational> {
    let (a_int, a_den) = integer_form(a);
    let (b_int, b_den) = integer_form(b);
    let den = a_den * b_den;
    let small = |m: &SparseMatrix<BigInt>| m.entries.values().all(|v| v.bits() <= 40);
    let mut out = SparseMatrix::zeros(a.dim);
    if small(&a_int) && small(&b_int) && a.dim <= 1 << 20 {
        let to_i128 = |m: &SparseMatrix<BigInt>| -> Vec<Vec<(usize, i128)>> {
            rows_of(m)
                .into_iter()
                .map(|row| row.into_iter().map(|(c, v)| (c, v.to_i128().expect("small"))).collect())
                .collect()
        };
        let ar = to_i128(&a_int);
        let br = to_i128(&b_int);
        let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
        for (r, row) in ar.iter().enumerate() {
            for &(k, x) in row {
                for &(c, y) in &br[k] {
                    *acc.entry(c).or_insert(0) += x * y;
                }
            }
            for (c, v) in std::mem::take(&mut acc) {
                if v != 0 {
                    out.entries
                        .insert((r, c), BigRational::new(BigInt::from(v), den.clone()));
                }
            }
        }
    } else {
        let br = rows_of(&b_int);
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (r, row) in rows_of(&a_int).into_iter().enumerate() {
            for (k, x) in row {
                for &(c, y) in &br[k] {
                    *acc.entry(c).or_insert_with(BigInt::zero) += x * y;
                }
            }
            for (c, v) in std::mem::take(&mut acc) {
                if !v.is_zero() {
                    out.entries.insert((r, c), BigRational::new(v, den.clone()));
                }
            }
        }
    }
    out
}

/// `m = ints / den` with `den` the lcm of the entry denominators.
fn integer_form(m: &SparseMatrix<BigRational>) -> (SparseMatrix<BigInt>, BigInt) {
    let den = m.entries.values().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let entries = m
        .entries
        .iter()
        .map(|(&k, v)| (k, v.numer() * (&den / v.denom())))
        .collect();
    (SparseMatrix { dim: m.dim, entries }, den)
}

/// Wire form of an exact matrix: `{dim, entries: [[r, c, "p/q"], ...]}`
/// sorted by `(r, c)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixTriplets {
    pub dim: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl From<&SparseMatrix<BigRational>> for MatrixTriplets {
    fn from(m: &SparseMatrix<BigRational>) -> Self {
        Self {
            dim: m.dim(),
            entries: m.iter().map(|(r, c, v)| (r, c, format_rational(v))).collect(),
        }
    }
}

impl TryFrom<&MatrixTriplets> for SparseMatrix<BigRational> {
    type Error = Error;

    fn try_from(t: &MatrixTriplets) -> Result<Self> {
        let mut m = SparseMatrix::zeros(t.dim);
        for (r, c, s) in &t.entries {
            if *r >= t.dim || *c >= t.dim {
                return Err(Error::Parse(format!("entry ({r}, {c}) outside dimension {}", t.dim)));
            }
            m.add_at(*r, *c, parse_rational(s)?);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn arb_matrix(dim: usize, big: bool) -> impl Strategy<Value = SparseMatrix<Rational>> {
        let num = if big { -(1i64 << 62)..(1i64 << 62) } else { -9i64..10 };
        prop::collection::vec((0..dim, 0..dim, num, 1i64..50), 0..dim * 2).prop_map(move |es| {
            SparseMatrix::from_entries(
                dim,
                es.into_iter().map(|(r, c, n, d)| (r, c, Rational::from_ratio(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn rational_product_matches_generic(big in any::<bool>(), (a, b) in (1usize..7).prop_flat_map(|d| (arb_matrix(d, false), arb_matrix(d, true)))) {
            let a = if big { b.clone() } else { a };
            prop_assert_eq!(rational_mul(&a, &b), generic_mul(&a, &b));
        }
    }

    #[test]
    fn zero_sums_are_not_stored() {
        let mut m = SparseMatrix::<Rational>::zeros(2);
        m.add_at(0, 1, q(1, 2));
        m.add_at(0, 1, q(-1, 2));
        assert!(m.is_zero());
        m.set(1, 1, q(0, 1));
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = SparseMatrix::from_entries(2, [(0, 0, 1.0), (0, 1, 2.0), (1, 0, 3.0)]);
        let b = SparseMatrix::from_entries(2, [(0, 0, 4.0), (1, 1, 5.0)]);
        let ab = &a * &b;
        assert_eq!(ab.to_dense_rows(), vec![vec![4.0, 10.0], vec![12.0, 0.0]]);
    }

    #[test]
    fn conjugation_by_permutation_matches_product() {
        let x = SparseMatrix::from_entries(3, [(0, 1, q(2, 3)), (2, 2, q(-1, 1)), (1, 0, q(5, 7))]);
        let images = [2, 0, 1];
        let p = SparseMatrix::<Rational>::permutation(&images);
        assert_eq!(x.conjugate_by_permutation(&images), &(&p * &x) * &p.transpose());
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = SparseMatrix::<f64>::identity(2);
        let i3 = SparseMatrix::<f64>::identity(3);
        assert_eq!(i2.kron(&i3), SparseMatrix::identity(6));
    }

    #[test]
    fn triplets_round_trip() {
        let x = SparseMatrix::from_entries(3, [(0, 1, q(2, 3)), (2, 2, q(-1, 1))]);
        let t = MatrixTriplets::from(&x);
        assert_eq!(t.entries[0], (0, 1, "2/3".to_string()));
        assert_eq!(SparseMatrix::try_from(&t).unwrap(), x);
    }

    #[test]
    fn norm_of_zero_is_positive_zero() {
        let n = SparseMatrix::<Rational>::zeros(3).frobenius_norm();
        assert!(n == 0.0 && n.is_sign_positive());
    }
}
