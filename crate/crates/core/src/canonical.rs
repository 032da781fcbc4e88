//! Canonical presentation of permutations along the principal flag
//! `S_1 < S_2 < ... < S_m`.
//!
//! Every `w` in `S_m` factors uniquely as `w = w_1 w_2 ... w_{m-1}` with
//! `w_j` drawn from `R_j = {1, s_j, s_j s_{j-1}, ..., s_j ... s_1}`. Each
//! `w_j` is a descending run, so it is stored as the pair `(j, k)` meaning
//! `s_j s_{j-1} ... s_k`, with `k = j + 1` for the empty factor.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalFactor {
    level: usize,
    start: usize,
}

impl CanonicalFactor {
    pub fn new(level: usize, start: usize) -> Result<Self> {
        if level == 0 || start == 0 || start > level + 1 {
            return Err(Error::OutOfRange(format!(
                "factor (j={level}, k={start}) needs 1 <= k <= j + 1"
            )));
        }
        Ok(CanonicalFactor { level, start })
    }

    pub fn empty(level: usize) -> Self {
        CanonicalFactor {
            level,
            start: level + 1,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Lowest generator index of the run; `level + 1` when empty.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.level + 1
    }

    pub fn len(&self) -> usize {
        self.level + 1 - self.start
    }

    /// Generator indices `j, j-1, ..., k` in word order.
    pub fn letters(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.level).rev()
    }

    pub fn contains_generator(&self, i: usize) -> bool {
        (self.start..=self.level).contains(&i)
    }

    /// The factor as a permutation of degree `m` (`m > level`).
    pub fn to_permutation(&self, m: usize) -> Permutation {
        assert!(m > self.level);
        let mut window: Vec<usize> = (1..=m).collect();
        if !self.is_empty() {
            window[self.start - 1..=self.level].rotate_right(1);
        }
        Permutation::from_window_unchecked(window)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalWord {
    degree: usize,
    factors: Vec<CanonicalFactor>,
}

impl CanonicalWord {
    /// Builds a word from `degree - 1` factors listed by level.
    pub fn new(degree: usize, factors: Vec<CanonicalFactor>) -> Result<Self> {
        if degree == 0 || factors.len() != degree - 1 {
            return Err(Error::OutOfRange(format!(
                "degree {degree} needs {} factors, got {}",
                degree.saturating_sub(1),
                factors.len()
            )));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.level != i + 1 {
                return Err(Error::OutOfRange(format!(
                    "factor at slot {} has level {}",
                    i + 1,
                    f.level
                )));
            }
        }
        Ok(CanonicalWord { degree, factors })
    }

    pub fn identity(degree: usize) -> Self {
        CanonicalWord {
            degree,
            factors: (1..degree).map(CanonicalFactor::empty).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn factors(&self) -> &[CanonicalFactor] {
        &self.factors
    }

    /// The factor at level `j` (1-indexed).
    pub fn factor(&self, j: usize) -> CanonicalFactor {
        self.factors[j - 1]
    }

    /// Flat list of generator indices in word order.
    pub fn letters(&self) -> Vec<usize> {
        self.factors.iter().flat_map(|f| f.letters()).collect()
    }

    pub fn letter_count(&self) -> usize {
        self.factors.iter().map(CanonicalFactor::len).sum()
    }

    /// Occurrences of the generator `s_i`.
    pub fn generator_count(&self, i: usize) -> usize {
        self.factors
            .iter()
            .filter(|f| f.contains_generator(i))
            .count()
    }

    /// Letters `s_i` with `i >= q`.
    pub fn letters_from(&self, q: usize) -> usize {
        self.factors
            .iter()
            .map(|f| (f.level + 1).saturating_sub(f.start.max(q)))
            .sum()
    }

    /// Generator index to number of occurrences; absent generators are omitted.
    pub fn generator_multiset(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for i in self.letters() {
            *counts.entry(i).or_insert(0) += 1;
        }
        counts
    }

    /// Views the word inside `S_m`, `m >= degree`, by appending empty levels.
    pub fn embed(&self, m: usize) -> Result<Self> {
        if m < self.degree {
            return Err(Error::OutOfRange(format!(
                "cannot embed degree {} into degree {m}",
                self.degree
            )));
        }
        let mut factors = self.factors.clone();
        factors.extend((self.degree..m).map(CanonicalFactor::empty));
        Ok(CanonicalWord { degree: m, factors })
    }

    pub fn recompose(&self) -> Permutation {
        recompose(self)
    }
}

/// Canonical presentation of `p`.
///
/// Peels the largest value off the window: if `j + 1` sits at position `k`
/// then `w_j = s_j ... s_k` (empty when `k = j + 1`), and the remaining
/// window, with `j + 1` deleted, is the prefix `w_1 ... w_{j-1}`.
pub fn decompose(p: &Permutation) -> CanonicalWord {
    let m = p.degree();
    let mut window = p.window().to_vec();
    let mut factors = vec![CanonicalFactor::empty(1); m.saturating_sub(1)];
    for j in (1..m).rev() {
        let pos = window
            .iter()
            .position(|&v| v == j + 1)
            .expect("window holds 1..=j+1");
        factors[j - 1] = CanonicalFactor {
            level: j,
            start: pos + 1,
        };
        window.remove(pos);
    }
    CanonicalWord { degree: m, factors }
}

/// Multiplies the factors out. Right-multiplying a permutation of `S_j`
/// (value `j + 1` fixed in last place) by `s_j ... s_k` moves `j + 1` to
/// position `k`, so the window is built by successive insertions.
pub fn recompose(w: &CanonicalWord) -> Permutation {
    let mut window = Vec::with_capacity(w.degree);
    window.push(1);
    for f in &w.factors {
        window.insert(f.start - 1, f.level + 1);
    }
    Permutation::from_window_unchecked(window)
}

/// Letter-by-letter product of the word, used as an oracle for `recompose`.
pub fn multiply_out(w: &CanonicalWord) -> Permutation {
    let m = w.degree;
    w.factors.iter().fold(Permutation::identity(m), |acc, f| {
        acc.compose(&f.to_permutation(m)).expect("same degree")
    })
}

pub fn word_to_string(w: &CanonicalWord) -> String {
    w.to_string()
}

pub fn string_to_word(s: &str) -> Result<CanonicalWord> {
    s.parse()
}

impl fmt::Display for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                fac.letters()
                    .map(|i| format!("s{i}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        f.write_str(&levels.join(" | "))
    }
}

impl FromStr for CanonicalWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for (idx, chunk) in s.split('|').enumerate() {
            let level = idx + 1;
            let mut letters = Vec::new();
            for tok in chunk.split_whitespace() {
                let i = tok
                    .strip_prefix('s')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::WordParse(format!("malformed letter `{tok}`")))?;
                letters.push(i);
            }
            factors.push(run_factor(level, &letters, 's')?);
        }
        Ok(CanonicalWord {
            degree: factors.len() + 1,
            factors,
        })
    }
}

/// Checks that `letters` is the run `level, level-1, ..., k` and returns the
/// start `k` (or `level + 1` when empty).
pub(crate) fn run_start(level: usize, letters: &[usize], name: char) -> Result<usize> {
    for (offset, &i) in letters.iter().enumerate() {
        if i > level {
            return Err(Error::WordParse(format!(
                "letter {name}{i} out of range at level {level}"
            )));
        }
        if i + offset != level {
            return Err(Error::WordParse(format!(
                "level {level} is not a descending run starting at {name}{level}"
            )));
        }
    }
    Ok(level + 1 - letters.len())
}

fn run_factor(level: usize, letters: &[usize], name: char) -> Result<CanonicalFactor> {
    let start = run_start(level, letters, name)?;
    Ok(CanonicalFactor { level, start })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::all_permutations;
    use std::collections::HashSet;

    fn p(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let w = decompose(&p(&[2, 3, 1]));
        assert_eq!(w.letters(), vec![1, 2]);
        assert_eq!(w.factor(1), CanonicalFactor::new(1, 1).unwrap());
        assert_eq!(w.factor(2), CanonicalFactor::new(2, 2).unwrap());

        assert!(decompose(&Permutation::identity(5)).factors().iter().all(|f| f.is_empty()));

        let w = decompose(&p(&[2, 1, 3]));
        assert_eq!(w.factor(1).letters().collect::<Vec<_>>(), vec![1]);
        assert!(w.factor(2).is_empty());
    }

    #[test]
    fn recompose_examples() {
        let w = CanonicalWord::new(
            3,
            vec![CanonicalFactor::new(1, 1).unwrap(), CanonicalFactor::new(2, 2).unwrap()],
        )
        .unwrap();
        assert_eq!(recompose(&w), p(&[2, 3, 1]));
        assert_eq!(recompose(&CanonicalWord::identity(5)), Permutation::identity(5));

        let mut factors: Vec<_> = (1..=3).map(CanonicalFactor::empty).collect();
        factors.push(CanonicalFactor::new(4, 1).unwrap());
        let w = CanonicalWord::new(5, factors).unwrap();
        assert_eq!(recompose(&w), p(&[5, 1, 2, 3, 4]));
        assert_eq!(multiply_out(&w), p(&[5, 1, 2, 3, 4]));
    }

    #[test]
    fn generator_multiset_examples() {
        let ms = decompose(&p(&[2, 3, 1])).generator_multiset();
        assert_eq!(ms, BTreeMap::from([(1, 1), (2, 1)]));
        assert!(decompose(&Permutation::identity(4)).generator_multiset().is_empty());
        let ms = decompose(&p(&[3, 2, 1])).generator_multiset();
        assert_eq!(ms, BTreeMap::from([(1, 2), (2, 1)]));
    }

    #[test]
    fn string_examples() {
        assert_eq!(decompose(&p(&[2, 3, 1])).to_string(), "s1 | s2");
        assert_eq!(CanonicalWord::identity(3).to_string(), " | ");
        let w: CanonicalWord = "| s2 s1 | s3".parse().unwrap();
        assert_eq!(w.degree(), 4);
        assert!(w.factor(1).is_empty());
        assert_eq!(w.factor(2), CanonicalFactor::new(2, 1).unwrap());
        assert_eq!(w.factor(3), CanonicalFactor::new(3, 3).unwrap());
        assert_eq!(string_to_word(" | ").unwrap(), CanonicalWord::identity(3));
    }

    #[test]
    fn string_parse_errors() {
        assert!("s1 | s3".parse::<CanonicalWord>().is_err()); // s3 at level 2
        assert!("s1 | s1".parse::<CanonicalWord>().is_err()); // run must start at s2
        assert!("s1 | s2 s2".parse::<CanonicalWord>().is_err());
        assert!("t1".parse::<CanonicalWord>().is_err());
        assert!("s0".parse::<CanonicalWord>().is_err());
        assert!("| s2 s1 s0".parse::<CanonicalWord>().is_err());
    }

    #[test]
    fn round_trip_uniqueness_and_reducedness() {
        for m in 1..=8 {
            let mut seen = HashSet::new();
            for g in all_permutations(m) {
                let w = decompose(&g);
                assert_eq!(recompose(&w), g);
                assert_eq!(w.letter_count() as u64, g.inversion_count());
                if m <= 6 {
                    assert_eq!(multiply_out(&w), g);
                }
                if m >= 2 {
                    assert_eq!(string_to_word(&word_to_string(&w)).unwrap(), w);
                }
                assert!(seen.insert(w));
            }
        }
    }

    #[test]
    fn inverse_has_same_generator_multiset() {
        for m in 1..=8 {
            for g in all_permutations(m) {
                assert_eq!(
                    decompose(&g).generator_multiset(),
                    decompose(&g.inverse()).generator_multiset()
                );
            }
        }
    }

    #[test]
    fn embedding_appends_empty_levels() {
        let g = p(&[2, 3, 1]);
        let big = g.embed(5).unwrap();
        assert_eq!(decompose(&big), decompose(&g).embed(5).unwrap());
        assert!(decompose(&big).factor(3).is_empty() && decompose(&big).factor(4).is_empty());
    }
}
