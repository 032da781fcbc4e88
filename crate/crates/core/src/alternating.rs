//! The alternating group `A_{n+1}` with generators `a_i = s_1 s_{i+1}`.
//!
//! Every even `v` of degree `n + 1` factors uniquely as `v_1 ... v_{n-1}`
//! with `v_j` one of the `j + 2` elements
//! `1, a_j, a_j a_{j-1}, ..., a_j ... a_2, a_j ... a_2 a_1, a_j ... a_2 a_1^-1`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::canonical::{recompose, CanonicalFactor, CanonicalWord};
use crate::covering::{f_q, fiber, FiberMethod};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PositionSet};
use crate::qstats::Q;

/// Which element of `R^A_j` a factor is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ATag {
    Empty,
    /// `a_j a_{j-1} ... a_k` with `2 <= k <= j`.
    Run(usize),
    /// `a_j ... a_2 a_1`.
    Full,
    /// `a_j ... a_2 a_1^-1`.
    FullInverse,
}

/// One letter `a_i` or `a_1^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ALetter {
    pub index: usize,
    pub inverse: bool,
}

impl fmt::Display for ALetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "a{}^-1", self.index)
        } else {
            write!(f, "a{}", self.index)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ACanonicalFactor {
    level: usize,
    tag: ATag,
}

impl ACanonicalFactor {
    pub fn new(level: usize, tag: ATag) -> Result<Self> {
        let ok = level >= 1
            && match tag {
                ATag::Run(k) => (2..=level).contains(&k),
                _ => true,
            };
        if !ok {
            return Err(Error::OutOfRange(format!("no factor {tag:?} at level {level}")));
        }
        Ok(ACanonicalFactor { level, tag })
    }

    /// All `level + 2` elements of `R^A_level`.
    pub fn options(level: usize) -> Vec<ACanonicalFactor> {
        let mut out = vec![ACanonicalFactor { level, tag: ATag::Empty }];
        out.extend((2..=level).rev().map(|k| ACanonicalFactor { level, tag: ATag::Run(k) }));
        out.push(ACanonicalFactor { level, tag: ATag::Full });
        out.push(ACanonicalFactor { level, tag: ATag::FullInverse });
        out
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn tag(&self) -> ATag {
        self.tag
    }

    /// Whether the factor ends in `a_1` or `a_1^-1`.
    pub fn is_delent(&self) -> bool {
        matches!(self.tag, ATag::Full | ATag::FullInverse)
    }

    pub fn letters(&self) -> Vec<ALetter> {
        let j = self.level;
        let plain = |index| ALetter { index, inverse: false };
        match self.tag {
            ATag::Empty => vec![],
            ATag::Run(k) => (k..=j).rev().map(plain).collect(),
            ATag::Full => (1..=j).rev().map(plain).collect(),
            ATag::FullInverse => {
                let mut v: Vec<_> = (2..=j).rev().map(plain).collect();
                v.push(ALetter { index: 1, inverse: true });
                v
            }
        }
    }

    pub fn len(&self) -> usize {
        match self.tag {
            ATag::Empty => 0,
            ATag::Run(k) => self.level - k + 1,
            ATag::Full | ATag::FullInverse => self.level,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tag == ATag::Empty
    }

    pub fn to_permutation(&self, degree: usize) -> Permutation {
        self.letters()
            .iter()
            .fold(Permutation::identity(degree), |acc, &l| {
                acc.compose(&a_letter(l, degree).expect("letter fits degree"))
                    .expect("same degree")
            })
    }

    /// The symmetric-group factor this one maps to under `f`: `a_i -> s_i`
    /// and `a_1^-1 -> s_1`.
    pub fn to_s_factor(&self) -> CanonicalFactor {
        let start = match self.tag {
            ATag::Empty => self.level + 1,
            ATag::Run(k) => k,
            ATag::Full | ATag::FullInverse => 1,
        };
        CanonicalFactor::new(self.level, start).expect("valid run")
    }
}

/// A-canonical word of an even permutation of `degree = n + 1`, one factor
/// per level `1..=n-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ACanonicalWord {
    degree: usize,
    factors: Vec<ACanonicalFactor>,
}

impl ACanonicalWord {
    pub fn new(degree: usize, factors: Vec<ACanonicalFactor>) -> Result<Self> {
        if factors.len() != degree.saturating_sub(2) {
            return Err(Error::DegreeMismatch(degree.saturating_sub(2), factors.len()));
        }
        if let Some((i, _)) = factors.iter().enumerate().find(|(i, f)| f.level != i + 1) {
            return Err(Error::OutOfRange(format!("factor {} is not at level {}", i + 1, i + 1)));
        }
        Ok(ACanonicalWord { degree, factors })
    }

    pub fn identity(degree: usize) -> Self {
        let factors = (1..degree.saturating_sub(1))
            .map(|level| ACanonicalFactor { level, tag: ATag::Empty })
            .collect();
        ACanonicalWord { degree, factors }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn factors(&self) -> &[ACanonicalFactor] {
        &self.factors
    }

    pub fn letters(&self) -> Vec<ALetter> {
        self.factors.iter().flat_map(|f| f.letters()).collect()
    }

    pub fn letter_count(&self) -> usize {
        self.factors.iter().map(|f| f.len()).sum()
    }

    pub fn delent_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_delent()).count()
    }

    pub fn recompose(&self) -> Permutation {
        a_recompose(self)
    }
}

impl fmt::Display for ACanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                fac.letters()
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        f.write_str(&levels.join(" | "))
    }
}

impl FromStr for ACanonicalWord {
    type Err = Error;

    /// Levels separated by `|`, letters `a<j>` and `a1^-1`. The empty string
    /// is the identity of `A_3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for (idx, chunk) in s.split('|').enumerate() {
            let level = idx + 1;
            let tokens: Vec<&str> = chunk.split_whitespace().collect();
            let mut letters = Vec::with_capacity(tokens.len());
            let mut inverse = false;
            for (pos, tok) in tokens.iter().enumerate() {
                let (body, inv) = match tok.strip_suffix("^-1") {
                    Some(b) => (b, true),
                    None => (*tok, false),
                };
                let i = body
                    .strip_prefix('a')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::WordParse(format!("malformed letter `{tok}`")))?;
                if inv && (i != 1 || pos + 1 != tokens.len()) {
                    return Err(Error::WordParse(format!(
                        "only a trailing a1 may be inverted, got `{tok}`"
                    )));
                }
                inverse |= inv;
                letters.push(i);
            }
            let start = crate::canonical::run_start(level, &letters, 'a')?;
            let tag = match (start, inverse) {
                (s, _) if s == level + 1 => ATag::Empty,
                (1, false) => ATag::Full,
                (1, true) => ATag::FullInverse,
                (k, _) => ATag::Run(k),
            };
            factors.push(ACanonicalFactor { level, tag });
        }
        Ok(ACanonicalWord {
            degree: factors.len() + 2,
            factors,
        })
    }
}

fn require_even(v: &Permutation) -> Result<()> {
    if v.is_even() {
        Ok(())
    } else {
        Err(Error::OddPermutation(v.to_string()))
    }
}

/// `a_i = s_1 s_{i+1}` in the given degree.
pub fn a_gen(i: usize, degree: usize) -> Result<Permutation> {
    if i == 0 || i + 2 > degree {
        return Err(Error::OutOfRange(format!(
            "a_{i} needs 1 <= i <= degree - 2 (degree {degree})"
        )));
    }
    let s1 = Permutation::simple_transposition(1, degree)?;
    s1.compose(&Permutation::simple_transposition(i + 1, degree)?)
}

pub fn a_letter(letter: ALetter, degree: usize) -> Result<Permutation> {
    let a = a_gen(letter.index, degree)?;
    Ok(if letter.inverse { a.inverse() } else { a })
}

/// A-canonical word of an even permutation. Level `j` is found by testing
/// which of the `j + 2` candidates `r` leaves `v r^-1` fixing `j + 2`.
pub fn a_decompose(v: &Permutation) -> Result<ACanonicalWord> {
    require_even(v)?;
    let degree = v.degree();
    let levels = degree.saturating_sub(2);
    let mut factors = vec![ACanonicalFactor { level: 1, tag: ATag::Empty }; levels];
    let mut rest = v.clone();
    for j in (1..=levels).rev() {
        let mut found = None;
        for cand in ACanonicalFactor::options(j) {
            let reduced = rest
                .compose(&cand.to_permutation(degree).inverse())
                .expect("same degree");
            if reduced.at(j + 2) == j + 2 {
                debug_assert!(found.is_none(), "two candidates at level {j}");
                found = Some((cand, reduced));
                if !cfg!(debug_assertions) {
                    break;
                }
            }
        }
        let (cand, reduced) = found.expect("some candidate fixes the top letter");
        factors[j - 1] = cand;
        rest = reduced;
    }
    debug_assert!(rest.is_identity());
    Ok(ACanonicalWord { degree, factors })
}

pub fn a_recompose(w: &ACanonicalWord) -> Permutation {
    w.factors
        .iter()
        .fold(Permutation::identity(w.degree), |acc, f| {
            acc.compose(&f.to_permutation(w.degree)).expect("same degree")
        })
}

/// Length of the A-canonical word; `a_1^-1` counts as one letter.
pub fn ell_a(v: &Permutation) -> Result<u64> {
    Ok(a_decompose(v)?.letter_count() as u64)
}

/// Number of factors ending in `a_1^{+-1}`.
pub fn del_a(v: &Permutation) -> Result<u64> {
    Ok(a_decompose(v)?.delent_count() as u64)
}

/// `i` in `1..=n-1` with `b_{i+1} > b_{i+2}`, or `b_{i+1} < b_{i+2}` and
/// all of `b_1..b_i` above `b_{i+2}`.
pub fn des_set_a(v: &Permutation) -> Result<PositionSet> {
    require_even(v)?;
    let b = v.window();
    let n = b.len().saturating_sub(1);
    Ok((1..n)
        .filter(|&i| {
            let (x, y) = (b[i], b[i + 1]);
            x > y || b[..i].iter().all(|&e| e > y)
        })
        .collect())
}

/// Length-comparison form: `i` with `ell_A(v a_i) <= ell_A(v)`.
pub fn des_set_a_by_length(v: &Permutation) -> Result<PositionSet> {
    let here = ell_a(v)?;
    let degree = v.degree();
    let mut out = PositionSet::new();
    for i in 1..degree.saturating_sub(1) {
        let moved = v.compose(&a_gen(i, degree)?)?;
        if ell_a(&moved)? <= here {
            out.insert(i);
        }
    }
    Ok(out)
}

pub fn des_a(v: &Permutation) -> Result<u64> {
    Ok(des_set_a(v)?.len() as u64)
}

/// `i` in `2..=n` such that at most one entry left of position `i + 1` is
/// smaller than `b_{i+1}`.
pub fn del_set_a(v: &Permutation) -> Result<PositionSet> {
    require_even(v)?;
    let b = v.window();
    let n = b.len().saturating_sub(1);
    Ok((2..=n)
        .filter(|&i| b[..i].iter().filter(|&&e| e < b[i]).count() <= 1)
        .collect())
}

pub fn maj_a(v: &Permutation) -> Result<u64> {
    Ok(des_set_a(v)?.iter().map(|&i| i as u64).sum())
}

/// `sum_{i in Des_A} (n - i)` with `n = degree - 1`.
pub fn rmaj_a(v: &Permutation) -> Result<u64> {
    let n = v.degree().saturating_sub(1);
    Ok(des_set_a(v)?.iter().map(|&i| (n - i) as u64).sum())
}

/// The map `f : A_{n+1} -> S_n`, read off the A-word letter by letter.
pub fn restrict_f(v: &Permutation) -> Result<Permutation> {
    let w = a_decompose(v)?;
    if w.degree() < 2 {
        return Err(Error::DegreeTooSmall { degree: w.degree(), q: 2 });
    }
    let n = w.degree() - 1;
    let image = CanonicalWord::new(n, w.factors().iter().map(|f| f.to_s_factor()).collect())?;
    let out = recompose(&image);
    debug_assert_eq!(Ok(&out), f_q(v, Q::new(2).expect("2 >= 1")).as_ref());
    Ok(out)
}

/// `g_q^{-1}(base)`: the even members of `f_q^{-1}(base)`, sorted.
pub fn g_q_fiber(base: &Permutation, q: Q) -> Vec<Permutation> {
    fiber(base, q, FiberMethod::Splice)
        .members
        .into_iter()
        .filter(Permutation::is_even)
        .collect()
}

/// Whether the defining relations of the `a_i` hold in the given degree.
pub fn relations_hold(degree: usize) -> Result<bool> {
    let k = degree.saturating_sub(2);
    let gens = (1..=k).map(|i| a_gen(i, degree)).collect::<Result<Vec<_>>>()?;
    let power = |g: &Permutation, e: usize| {
        (0..e).fold(Permutation::identity(degree), |acc, _| acc.compose(g).expect("same degree"))
    };
    for (i0, gi) in gens.iter().enumerate() {
        let i = i0 + 1;
        let order = if i == 1 { 3 } else { 2 };
        if !power(gi, order).is_identity() || power(gi, order - 1).is_identity() {
            return Ok(false);
        }
        for (j0, gj) in gens.iter().enumerate().skip(i0 + 1) {
            let j = j0 + 1;
            let e = if j == i + 1 { 3 } else { 2 };
            if !power(&gi.compose(gj)?, e).is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All A-statistics of one even permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AStatRecord {
    pub permutation: Permutation,
    pub word: String,
    pub ell_a: u64,
    pub del_a: u64,
    pub des_a: u64,
    pub maj_a: u64,
    pub rmaj_a: u64,
    #[serde(rename = "Des_A")]
    pub des_set_a: PositionSet,
    #[serde(rename = "Del_A")]
    pub del_set_a: PositionSet,
    pub f: Permutation,
}

pub fn a_stat_record(v: &Permutation) -> Result<AStatRecord> {
    let word = a_decompose(v)?;
    let des = des_set_a(v)?;
    let n = v.degree().saturating_sub(1);
    Ok(AStatRecord {
        permutation: v.clone(),
        word: word.to_string(),
        ell_a: word.letter_count() as u64,
        del_a: word.delent_count() as u64,
        des_a: des.len() as u64,
        maj_a: des.iter().map(|&i| i as u64).sum(),
        rmaj_a: des.iter().map(|&i| (n - i) as u64).sum(),
        des_set_a: des,
        del_set_a: del_set_a(v)?,
        f: restrict_f(v)?,
    })
}
