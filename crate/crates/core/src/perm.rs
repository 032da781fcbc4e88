//! Permutations in one-line notation.
//!
//! A permutation of degree `m` is stored as its window `[p(1), ..., p(m)]`.
//! Every public accessor is 1-indexed in both positions and values.
//! Composition follows `(f * g)(i) = f(g(i))`: the right factor acts first.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted set of 1-indexed positions.
pub type PositionSet = BTreeSet<usize>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    window: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its window, checking that it is a
    /// rearrangement of `1..=m` with `m >= 1`.
    pub fn new(window: Vec<usize>) -> Result<Self> {
        let m = window.len();
        if m == 0 {
            return Err(Error::NotAPermutation("empty window".into()));
        }
        let mut seen = vec![false; m + 1];
        for &v in &window {
            if v == 0 || v > m || seen[v] {
                return Err(Error::NotAPermutation(format_window(&window)));
            }
            seen[v] = true;
        }
        Ok(Permutation { window })
    }

    /// Wraps a window already known to be a permutation.
    pub(crate) fn from_window_unchecked(window: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(window.clone()).is_ok());
        Permutation { window }
    }

    pub fn identity(m: usize) -> Self {
        assert!(m >= 1, "degree must be positive");
        Permutation {
            window: (1..=m).collect(),
        }
    }

    /// The Coxeter generator `s_i = (i, i+1)` in degree `m`.
    pub fn simple_transposition(i: usize, m: usize) -> Result<Self> {
        if i == 0 || i >= m {
            return Err(Error::OutOfRange(format!("s_{i} in degree {m}")));
        }
        let mut window: Vec<usize> = (1..=m).collect();
        window.swap(i - 1, i);
        Ok(Permutation { window })
    }

    pub fn degree(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[usize] {
        &self.window
    }

    pub fn into_window(self) -> Vec<usize> {
        self.window
    }

    /// Value at the 1-indexed position `i`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.window[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self * other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        let window = other.window.iter().map(|&g| self.window[g - 1]).collect();
        Ok(Permutation { window })
    }

    pub fn inverse(&self) -> Self {
        let mut window = vec![0; self.degree()];
        for (i, &v) in self.window.iter().enumerate() {
            window[v - 1] = i + 1;
        }
        Permutation { window }
    }

    /// Positions `i` in `1..m` with `p(i) > p(i+1)`.
    pub fn descent_set(&self) -> PositionSet {
        self.window
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn inversion_count(&self) -> u64 {
        let w = &self.window;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_even(&self) -> bool {
        self.inversion_count().is_multiple_of(2)
    }

    /// Appends fixed points so that the result has degree `m`.
    pub fn embed(&self, m: usize) -> Result<Self> {
        if m < self.degree() {
            return Err(Error::OutOfRange(format!(
                "cannot embed degree {} into degree {m}",
                self.degree()
            )));
        }
        let mut window = self.window.clone();
        window.extend(self.degree() + 1..=m);
        Ok(Permutation { window })
    }
}

fn format_window(w: &[usize]) -> String {
    w.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_window(&self.window))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.window.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts space- and/or comma-separated values, optionally in brackets.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let window = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::NotAPermutation(s.trim().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(window).map_err(|_| Error::NotAPermutation(s.trim().to_string()))
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(window: Vec<usize>) -> Result<Self> {
        Permutation::new(window)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.window
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::all_permutations;

    fn p(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p(&[2, 1, 3]).compose(&p(&[1, 3, 2])).unwrap(), p(&[2, 3, 1]));
        assert_eq!(Permutation::identity(3).compose(&p(&[3, 1, 2])).unwrap(), p(&[3, 1, 2]));
        assert_eq!(p(&[3, 1, 2]).compose(&p(&[2, 3, 1])).unwrap(), Permutation::identity(3));
        assert_eq!(
            p(&[1, 2]).compose(&p(&[1, 2, 3])),
            Err(Error::DegreeMismatch(2, 3))
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
        assert_eq!(p(&[1, 2, 3]).inverse(), p(&[1, 2, 3]));
        assert_eq!(p(&[2, 1]).inverse(), p(&[2, 1]));
    }

    #[test]
    fn descent_examples() {
        let set = |v: &[usize]| v.iter().copied().collect::<PositionSet>();
        assert_eq!(p(&[7, 8, 6, 5, 2, 9, 4, 1, 3]).descent_set(), set(&[2, 3, 4, 6, 7]));
        assert!(p(&[1, 2, 3, 4]).descent_set().is_empty());
        assert_eq!(p(&[3, 2, 1]).descent_set(), set(&[1, 2]));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(p(&[3, 1, 2]).inversion_count(), 2);
        assert_eq!(p(&[1, 2, 3]).inversion_count(), 0);
        assert_eq!(p(&[3, 2, 1]).inversion_count(), 3);
    }

    #[test]
    fn parse_rejects_non_permutations() {
        assert!("1 2 2".parse::<Permutation>().is_err());
        assert!("0 1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1 x".parse::<Permutation>().is_err());
        assert_eq!("7,8,6 5 2 9 4 1 3".parse::<Permutation>().unwrap().degree(), 9);
        assert_eq!("[2,1]".parse::<Permutation>().unwrap(), p(&[2, 1]));
    }

    #[test]
    fn serde_is_plain_window() {
        let json = serde_json::to_string(&p(&[2, 3, 1])).unwrap();
        assert_eq!(json, "[2,3,1]");
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }

    #[test]
    fn inversion_count_is_inverse_invariant() {
        for m in 1..=8 {
            for g in all_permutations(m) {
                assert_eq!(g.inversion_count(), g.inverse().inversion_count());
            }
        }
    }

    #[test]
    fn group_axioms_small_degrees() {
        for m in 1..=5 {
            let perms: Vec<_> = all_permutations(m).collect();
            let e = Permutation::identity(m);
            for f in &perms {
                assert_eq!(e.compose(f).unwrap(), *f);
                assert_eq!(f.compose(&e).unwrap(), *f);
                assert!(f.compose(&f.inverse()).unwrap().is_identity());
                assert!(f.descent_set().iter().all(|&i| (1..m).contains(&i)));
            }
            if m <= 4 {
                for f in &perms {
                    for g in &perms {
                        for h in &perms {
                            let left = f.compose(g).unwrap().compose(h).unwrap();
                            let right = f.compose(&g.compose(h).unwrap()).unwrap();
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
        assert!(Permutation::identity(6).descent_set().is_empty());
    }
}
