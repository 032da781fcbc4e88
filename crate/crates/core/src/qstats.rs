//! q-analogues of the classical permutation statistics.
//!
//! For a positive integer `q` and `p` of degree `m`:
//!
//! * `inv_q(p) = sum_{i=q+1}^{m} min(i - q, #{j < i : p(j) > p(i)})`
//! * `ell_q(p)` counts letters `s_i` with `i >= q` in the canonical word
//! * `Del_q(p) = {i : q+1 <= i <= m, #{j < i : p(j) < p(i)} <= q - 1}`
//! * `Des_q(p) = (Des(p) ∩ [q, m-1]) ∪ (Del_q(p) - 1)`
//! * `maj_q = sum_{Des_q} i`, `rmaj_q = sum_{Des_q} (m - i)`
//!
//! At `q = 1` these are the usual inversions, left-to-right minima (other
//! than position 1), descents and major indices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canonical::decompose;
use crate::error::{Error, Result};
use crate::perm::{Permutation, PositionSet};

/// The positive integer parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Q(usize);

impl Q {
    pub const ONE: Q = Q(1);

    pub fn new(q: usize) -> Result<Self> {
        if q == 0 {
            Err(Error::InvalidQ(q))
        } else {
            Ok(Q(q))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Q {
    type Error = Error;
    fn try_from(q: usize) -> Result<Self> {
        Q::new(q)
    }
}

impl From<Q> for usize {
    fn from(q: Q) -> usize {
        q.0
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `#{j < i : p(j) > p(i)}` for the 1-indexed position `i`.
fn larger_before(w: &[usize], i: usize) -> usize {
    let v = w[i - 1];
    w[..i - 1].iter().filter(|&&x| x > v).count()
}

pub fn inv_q(p: &Permutation, q: Q) -> u64 {
    let w = p.window();
    let q = q.get();
    let m = w.len();
    if m <= q {
        return 0;
    }
    (q + 1..=m)
        .map(|i| (i - q).min(larger_before(w, i)) as u64)
        .sum()
}

/// Letters of index at least `q` in the canonical presentation.
pub fn ell_q(p: &Permutation, q: Q) -> u64 {
    decompose(p).letters_from(q.get()) as u64
}

/// Positions that are almost left-to-right minima of order `q - 1`.
pub fn del_set_q(p: &Permutation, q: Q) -> PositionSet {
    let w = p.window();
    let q = q.get();
    (q + 1..=w.len())
        .filter(|&i| {
            let v = w[i - 1];
            w[..i - 1].iter().filter(|&&x| x < v).count() < q
        })
        .collect()
}

/// `|Del_q(p)|`; equals the number of `s_q` letters in the canonical word.
pub fn del_q(p: &Permutation, q: Q) -> u64 {
    let n = del_set_q(p, q).len() as u64;
    debug_assert_eq!(n, del_q_from_word(p, q));
    n
}

/// Occurrences of `s_q` in the canonical presentation.
pub fn del_q_from_word(p: &Permutation, q: Q) -> u64 {
    decompose(p).generator_count(q.get()) as u64
}

pub fn des_set_q(p: &Permutation, q: Q) -> PositionSet {
    let del = del_set_q(p, q);
    des_set_with_del(p, q, &del)
}

fn des_set_with_del(p: &Permutation, q: Q, del: &PositionSet) -> PositionSet {
    let q = q.get();
    let mut des: PositionSet = p.descent_set().into_iter().filter(|&i| i >= q).collect();
    des.extend(del.iter().map(|&i| i - 1));
    des
}

pub fn des_q(p: &Permutation, q: Q) -> u64 {
    des_set_q(p, q).len() as u64
}

pub fn maj_q(p: &Permutation, q: Q) -> u64 {
    des_set_q(p, q).iter().map(|&i| i as u64).sum()
}

/// `rmaj_{q,m}` with `m` the degree of `p`.
pub fn rmaj_q(p: &Permutation, q: Q) -> u64 {
    let m = p.degree();
    des_set_q(p, q).iter().map(|&i| (m - i) as u64).sum()
}

/// Every q-statistic of one permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatRecord {
    pub permutation: Permutation,
    pub q: Q,
    pub degree: usize,
    pub ell_q: u64,
    pub inv_q: u64,
    pub del_q: u64,
    pub des_q: u64,
    pub maj_q: u64,
    pub rmaj_q: u64,
    #[serde(rename = "Del_q")]
    pub del_set_q: Vec<usize>,
    #[serde(rename = "Des_q")]
    pub des_set_q: Vec<usize>,
}

pub fn stat_record(p: &Permutation, q: Q) -> StatRecord {
    let m = p.degree();
    let del = del_set_q(p, q);
    let des = des_set_with_del(p, q, &del);
    let record = StatRecord {
        permutation: p.clone(),
        q,
        degree: m,
        ell_q: ell_q(p, q),
        inv_q: inv_q(p, q),
        del_q: del.len() as u64,
        des_q: des.len() as u64,
        maj_q: des.iter().map(|&i| i as u64).sum(),
        rmaj_q: des.iter().map(|&i| (m - i) as u64).sum(),
        del_set_q: del.iter().copied().collect(),
        des_set_q: des.iter().copied().collect(),
    };
    record.check_invariants();
    record
}

impl StatRecord {
    fn check_invariants(&self) {
        let q = self.q.get();
        let m = self.degree;
        assert_eq!(self.ell_q, self.inv_q, "ell_q != inv_q for {:?}", self.permutation);
        assert_eq!(self.del_q, del_q_from_word(&self.permutation, self.q));
        assert_eq!(self.des_q as usize, self.des_set_q.len());
        assert!(self.del_set_q.iter().all(|&i| i > q && i <= m));
        assert!(self.des_set_q.iter().all(|&i| i >= q && i < m));
        assert!(self
            .del_set_q
            .iter()
            .all(|&i| self.des_set_q.binary_search(&(i - 1)).is_ok()));
    }
}
