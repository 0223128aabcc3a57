//! Fraction-free exact row reduction over sparse integer vectors.
//!
//! Rational input vectors are scaled to primitive integer vectors; elimination
//! uses `v <- a * v - b * row` followed by division by the content, so no
//! fractions are formed and coefficient growth stays bounded.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type SparseIntVec = BTreeMap<usize, BigInt>;

/// Incremental echelon form keyed by pivot (leading) column.
#[derive(Debug, Default, Clone)]
pub struct RowReducer {
    rows: BTreeMap<usize, SparseIntVec>,
}

impl RowReducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; returns `true` and keeps the
    /// remainder if `v` was independent of them.
    pub fn insert(&mut self, v: impl IntoIterator<Item = (usize, BigRational)>) -> bool {
        let mut v = primitive_integer_vector(v);
        while let Some((&lead, _)) = v.iter().next() {
            let Some(row) = self.rows.get(&lead) else {
                self.rows.insert(lead, v);
                return true;
            };
            let a = row[&lead].clone();
            let b = v[&lead].clone();
            let g = a.gcd(&b);
            let (a, b) = (&a / &g, &b / &g);
            let mut next = SparseIntVec::new();
            for (&c, x) in &v {
                next.insert(c, x * &a);
            }
            for (&c, y) in row {
                let e = next.entry(c).or_insert_with(BigInt::zero);
                *e -= y * &b;
            }
            next.retain(|_, x| !x.is_zero());
            v = normalize(next);
        }
        false
    }
}

fn normalize(mut v: SparseIntVec) -> SparseIntVec {
    let content = v.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if content.is_zero() || content.is_one() {
        return v;
    }
    for x in v.values_mut() {
        *x = &*x / &content;
    }
    v
}

fn primitive_integer_vector(v: impl IntoIterator<Item = (usize, BigRational)>) -> SparseIntVec {
    let v: Vec<(usize, BigRational)> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    let lcm = v.iter().fold(BigInt::one(), |l, (_, x)| l.lcm(x.denom()));
    let mut out = SparseIntVec::new();
    for (c, x) in v {
        let scaled = x.numer() * (&lcm / x.denom());
        let e = out.entry(c).or_insert_with(BigInt::zero);
        *e += scaled;
    }
    out.retain(|_, x| !x.is_zero());
    let mut out = normalize(out);
    if out.values().next().is_some_and(|x| x.is_negative()) {
        for x in out.values_mut() {
            *x = -&*x;
        }
    }
    out
}

/// Exact rank of a family of sparse rational vectors.
pub fn rank<I, V>(vectors: I) -> usize
where
    I: IntoIterator<Item = V>,
    V: IntoIterator<Item = (usize, BigRational)>,
{
    let mut r = RowReducer::new();
    for v in vectors {
        r.insert(v);
    }
    r.rank()
}
