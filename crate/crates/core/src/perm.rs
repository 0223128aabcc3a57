//! Permutations of `{0, .., n-1}` in one-line notation.
//!
//! Composition is right-to-left: `(g * h)(i) = g(h(i))`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Validates one-line notation with 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Self(images))
    }

    /// Parses 1-based one-line notation such as `"2,1,3"`.
    pub fn parse_one_based(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .and_then(|x| x.checked_sub(1))
                    .ok_or_else(|| Error::Parse(format!("bad permutation entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }

    /// Transposition of `i` and `j` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Self(v)
    }

    /// Adjacent transpositions `(i, i+1)`, which generate `S_n`.
    pub fn adjacent_transpositions(n: usize) -> Vec<Self> {
        (0..n.saturating_sub(1))
            .map(|i| Self::transposition(n, i, i + 1))
            .collect()
    }

    /// All of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutations of different degree");
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(Vec::len).collect())
    }

    /// Acts on a sequence by moving the entry in slot `i` to slot `g(i)`:
    /// `(g . x)[g(i)] = x[i]`. This is a left action.
    pub fn act_on_slots<T: Clone>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.len());
        let inv = self.inverse();
        (0..x.len()).map(|j| x[inv.0[j]].clone()).collect()
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Self) -> Permutation {
        self.compose(rhs)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    /// 1-based one-line notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_of_s4_once() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
        assert_eq!(Permutation::all(0).len(), 1);
    }

    #[test]
    fn composition_is_right_to_left() {
        let g = Permutation::new(vec![1, 2, 0]).unwrap();
        let h = Permutation::transposition(3, 0, 1);
        let gh = &g * &h;
        for i in 0..3 {
            assert_eq!(gh.apply(i), g.apply(h.apply(i)));
        }
        assert!((&g * &g.inverse()).is_identity());
    }

    #[test]
    fn slot_action_is_a_left_action() {
        let x = ['a', 'b', 'c', 'd'];
        for g in Permutation::all(4) {
            for h in Permutation::all(4) {
                let lhs = (&g * &h).act_on_slots(&x);
                let rhs = g.act_on_slots(&h.act_on_slots(&x));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn cycle_type_of_three_cycle() {
        let g = Permutation::new(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(g.cycle_type().parts(), &[3, 1]);
        assert_eq!(g.cycle_count(), 2);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::parse_one_based("1,3").is_err());
        assert_eq!(
            Permutation::parse_one_based("2,1").unwrap(),
            Permutation::transposition(2, 0, 1)
        );
    }
}
