//! The covering maps `f_q : S_{n+q-1} -> S_n`.
//!
//! `f_q` acts letter by letter on the canonical presentation: generators
//! `s_1, ..., s_{q-1}` are erased and `s_j` becomes `s_{j-q+1}` for `j >= q`.
//! Erasing the low letters of a descending run leaves a descending run, so
//! the image word is canonical as it stands.

use std::collections::BTreeMap;

use crate::canonical::{decompose, recompose, CanonicalFactor, CanonicalWord};
use crate::error::{Error, Result};
use crate::numbers::factorial_u64;
use crate::perm::Permutation;
use crate::qstats::{del_q, Q};
use crate::sweep::{all_permutations, sweep, SweepConfig};

/// Image of a canonical word under `f_q`.
pub fn f_q_word(w: &CanonicalWord, q: Q) -> Result<CanonicalWord> {
    let q = q.get();
    let m = w.degree();
    if m < q {
        return Err(Error::DegreeTooSmall { degree: m, q });
    }
    let factors = w.factors()[q - 1..]
        .iter()
        .map(|f| {
            let level = f.level() - (q - 1);
            let start = f.start().max(q) - (q - 1);
            CanonicalFactor::new(level, start).expect("shifted run stays canonical")
        })
        .collect();
    CanonicalWord::new(m - q + 1, factors)
}

/// `f_q(p)` for `p` of degree at least `q`.
pub fn f_q(p: &Permutation, q: Q) -> Result<Permutation> {
    let image = f_q_word(&decompose(p), q)?;
    let out = recompose(&image);
    debug_assert_eq!(decompose(&out), image);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FiberMethod {
    /// Scan all of `S_{n+q-1}`.
    Scan,
    /// Build preimage words level by level.
    #[default]
    Splice,
}

/// The preimage `f_q^{-1}(base)`, members in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberIndex {
    pub base: Permutation,
    pub q: Q,
    pub members: Vec<Permutation>,
}

impl FiberIndex {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `q! * q^{del_1(base)}`.
pub fn fiber_size(base: &Permutation, q: Q) -> u64 {
    let k = q.get() as u64;
    factorial_u64(q.get()) * k.pow(del_q(base, Q::ONE) as u32)
}

pub fn fiber(base: &Permutation, q: Q, method: FiberMethod) -> FiberIndex {
    let mut members = match method {
        FiberMethod::Scan => fiber_scan(base, q),
        FiberMethod::Splice => fiber_splice(base, q),
    };
    members.sort();
    assert_eq!(members.len() as u64, fiber_size(base, q));
    FiberIndex {
        base: base.clone(),
        q,
        members,
    }
}

fn fiber_scan(base: &Permutation, q: Q) -> Vec<Permutation> {
    let m = base.degree() + q.get() - 1;
    all_permutations(m)
        .filter(|p| f_q(p, q).as_ref() == Ok(base))
        .collect()
}

/// Levels `1..q-1` range over all of `S_q`; a base level `j'` holding the
/// run `s_{j'} ... s_{k'}` lifts to level `j' + q - 1` with start
/// `k' + q - 1`, except that a run ending in `s_1` may end in any of
/// `s_q, ..., s_1` upstairs.
fn fiber_splice(base: &Permutation, q: Q) -> Vec<Permutation> {
    let q = q.get();
    let n = base.degree();
    let m = n + q - 1;
    let base_word = decompose(base);

    let mut choices: Vec<Vec<CanonicalFactor>> = Vec::with_capacity(m - 1);
    for level in 1..q {
        choices.push(
            (1..=level + 1)
                .map(|k| CanonicalFactor::new(level, k).unwrap())
                .collect(),
        );
    }
    for f in base_word.factors() {
        let level = f.level() + q - 1;
        let options = if f.start() == 1 {
            (1..=q)
                .map(|k| CanonicalFactor::new(level, k).unwrap())
                .collect()
        } else {
            vec![CanonicalFactor::new(level, f.start() + q - 1).unwrap()]
        };
        choices.push(options);
    }

    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m - 1);
    expand(&choices, &mut current, &mut |factors| {
        let w = CanonicalWord::new(m, factors.to_vec()).expect("one factor per level");
        out.push(recompose(&w));
    });
    out
}

fn expand(
    choices: &[Vec<CanonicalFactor>],
    current: &mut Vec<CanonicalFactor>,
    emit: &mut dyn FnMut(&[CanonicalFactor]),
) {
    if current.len() == choices.len() {
        emit(current);
        return;
    }
    for &f in &choices[current.len()] {
        current.push(f);
        expand(choices, current, emit);
        current.pop();
    }
}

/// Image counts of `f_q` over all of `S_m`, keyed by image.
pub fn image_counts(m: usize, q: Q, config: SweepConfig) -> Result<BTreeMap<Permutation, u64>> {
    if m < q.get() {
        return Err(Error::DegreeTooSmall { degree: m, q: q.get() });
    }
    Ok(sweep(
        m,
        config,
        BTreeMap::new,
        |acc: &mut BTreeMap<Permutation, u64>, p| {
            *acc.entry(f_q(p, q).expect("degree checked")).or_insert(0) += 1;
        },
        merge_counts,
    ))
}

pub(crate) fn merge_counts<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Whether `f_{q1}(f_{q2}(p)) == f_{q1+q2-1}(p)` for every `p` in `S_m`.
pub fn compose_maps_check(q1: Q, q2: Q, m: usize) -> Result<bool> {
    let combined = Q::new(q1.get() + q2.get() - 1)?;
    if m < combined.get() {
        return Err(Error::DegreeTooSmall {
            degree: m,
            q: combined.get(),
        });
    }
    for p in all_permutations(m) {
        let twice = f_q(&f_q(&p, q2)?, q1)?;
        if twice != f_q(&p, combined)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Elements of the parabolic subgroup `<s_1, ..., s_{q-1}>` inside `S_m`.
pub fn parabolic_subgroup(q: Q, m: usize) -> Vec<Permutation> {
    let q = q.get().min(m);
    all_permutations(q)
        .map(|t| t.embed(m).expect("q <= m"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    fn q(v: usize) -> Q {
        Q::new(v).unwrap()
    }

    #[test]
    fn f_q_examples() {
        assert_eq!(f_q(&p(&[2, 3, 1]), q(2)).unwrap(), p(&[2, 1]));
        for g in all_permutations(4) {
            assert_eq!(f_q(&g, Q::ONE).unwrap(), g);
        }
        let s1 = Permutation::simple_transposition(1, 3).unwrap();
        assert_eq!(f_q(&s1, q(2)).unwrap(), Permutation::identity(2));
        assert_eq!(f_q(&Permutation::identity(3), q(2)).unwrap(), Permutation::identity(2));
        assert_eq!(
            f_q(&Permutation::identity(2), q(3)),
            Err(Error::DegreeTooSmall { degree: 2, q: 3 })
        );
    }

    #[test]
    fn fiber_examples() {
        let f = fiber(&p(&[2, 1]), q(2), FiberMethod::Scan);
        assert_eq!(f.len(), 4);
        let f = fiber(&Permutation::identity(2), q(2), FiberMethod::Splice);
        assert_eq!(f.members, vec![Permutation::identity(3), p(&[2, 1, 3])]);
        let total: usize = all_permutations(3)
            .map(|b| fiber(&b, q(2), FiberMethod::Splice).len())
            .sum();
        assert_eq!(total, 24);
    }

    #[test]
    fn splice_matches_scan() {
        for m in 1..=6 {
            for k in 1..=m {
                let n = m - k + 1;
                for b in all_permutations(n) {
                    assert_eq!(
                        fiber(&b, q(k), FiberMethod::Scan),
                        fiber(&b, q(k), FiberMethod::Splice)
                    );
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        assert!(compose_maps_check(q(2), q(2), 5).unwrap());
        assert!(compose_maps_check(q(1), q(3), 5).unwrap());
        assert!(compose_maps_check(q(2), q(2), 4).unwrap());
        assert!(compose_maps_check(q(3), q(3), 4).is_err());
    }

    #[test]
    fn not_a_homomorphism() {
        let s1 = Permutation::simple_transposition(1, 3).unwrap();
        let g = Permutation::simple_transposition(2, 3).unwrap();
        let h = s1.compose(&g).unwrap();
        let two = q(2);
        let lhs = f_q(&g.compose(&h).unwrap(), two).unwrap();
        let rhs = f_q(&g, two).unwrap().compose(&f_q(&h, two).unwrap()).unwrap();
        assert_eq!(lhs, Permutation::simple_transposition(1, 2).unwrap());
        assert!(rhs.is_identity());
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn image_counts_match_fiber_sizes() {
        let counts = image_counts(5, q(2), SweepConfig::with_threads(2)).unwrap();
        assert_eq!(counts.len(), 24);
        for (b, c) in counts {
            assert_eq!(c, fiber_size(&b, q(2)));
        }
    }
}
