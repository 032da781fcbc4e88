//! The dashed-pattern family `Pat(q)`.
//!
//! `Pat(q)` holds the `q!` patterns `s_1-s_2-...-s_q-(q+2)(q+1)` for `s` in
//! `S_q`: the last two letters are adjacent and form a descent whose bottom
//! exceeds `q` earlier entries. Containment therefore reduces to finding a
//! descent `p(d) > p(d+1)` with at least `q` entries left of `d` smaller
//! than `p(d+1)`.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, PositionSet};
use crate::qstats::{del_set_q, des_set_q, Q};
use crate::sweep::{all_permutations, sweep, SweepConfig};

/// Positions `i_1 < ... < i_{q+1}` of an occurrence, plus `bottom = i_{q+1} + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternWitness {
    pub positions: Vec<usize>,
    pub bottom: usize,
}

impl PatternWitness {
    /// Checks the defining inequalities against `p`.
    pub fn certifies(&self, p: &Permutation) -> bool {
        let Some((&top, small)) = self.positions.split_last() else {
            return false;
        };
        self.bottom == top + 1
            && self.bottom <= p.degree()
            && self.positions.windows(2).all(|w| w[0] < w[1])
            && p.at(top) > p.at(self.bottom)
            && small.iter().all(|&i| p.at(i) < p.at(self.bottom))
    }
}

/// Leftmost occurrence of a pattern from `Pat(q)`, if any. The witness uses
/// the leftmost qualifying descent and the `q` leftmost small entries.
pub fn contains_pat_q(p: &Permutation, q: Q) -> Option<PatternWitness> {
    let q = q.get();
    let w = p.window();
    for d in q + 1..w.len() {
        let (top, bottom) = (w[d - 1], w[d]);
        if top < bottom {
            continue;
        }
        let small: Vec<usize> = (1..d).filter(|&j| w[j - 1] < bottom).take(q).collect();
        if small.len() == q {
            let mut positions = small;
            positions.push(d);
            return Some(PatternWitness {
                positions,
                bottom: d + 1,
            });
        }
    }
    None
}

pub fn avoids_q(p: &Permutation, q: Q) -> bool {
    let avoids = contains_pat_q(p, q).is_none();
    debug_assert_eq!(avoids, avoids_by_descent_sets(p, q));
    avoids
}

/// `Del_q(p) - 1 == Des_q(p)`.
pub fn avoids_by_descent_sets(p: &Permutation, q: Q) -> bool {
    let shifted: PositionSet = del_set_q(p, q).iter().map(|i| i - 1).collect();
    shifted == des_set_q(p, q)
}

/// The `q!` patterns of `Pat(q)` as words over `1..=q+2`, listed in
/// lexicographic order of their `S_q` prefix.
pub fn pat_q(q: Q) -> Vec<Vec<usize>> {
    let k = q.get();
    all_permutations(k)
        .map(|s| {
            let mut w = s.into_window();
            w.extend([k + 2, k + 1]);
            w
        })
        .collect()
}

/// Literal dashed-pattern matching against every pattern of `Pat(q)`.
/// Exponential in `q`; only meant as a test oracle.
pub fn contains_pat_q_naive(p: &Permutation, q: Q) -> bool {
    let w = p.window();
    let k = q.get();
    let m = w.len();
    if m < k + 2 {
        return false;
    }
    let patterns = pat_q(q);
    for d in k + 1..m {
        // the adjacent pair sits at positions d, d+1; choose k earlier positions
        let mut chosen = Vec::with_capacity(k + 2);
        if choose_and_match(w, d, 1, k, &mut chosen, &patterns) {
            return true;
        }
    }
    false
}

fn choose_and_match(
    w: &[usize],
    d: usize,
    from: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    patterns: &[Vec<usize>],
) -> bool {
    if remaining == 0 {
        let mut values: Vec<usize> = chosen.iter().map(|&i| w[i - 1]).collect();
        values.push(w[d - 1]);
        values.push(w[d]);
        let shape = standardize(&values);
        return patterns.contains(&shape);
    }
    for i in from..d {
        chosen.push(i);
        if choose_and_match(w, d, i + 1, remaining - 1, chosen, patterns) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn standardize(values: &[usize]) -> Vec<usize> {
    values
        .iter()
        .map(|v| values.iter().filter(|&&x| x <= *v).count())
        .collect()
}

/// `h_q(m)` by enumerating `S_m`. `h_q(0) = 1`.
pub fn h_q_brute(m: usize, q: Q, config: SweepConfig) -> BigUint {
    if m == 0 {
        return BigUint::from(1u8);
    }
    BigUint::from(sweep(
        m,
        config,
        || 0u64,
        |acc, p| {
            if avoids_q(p, q) {
                *acc += 1
            }
        },
        |a, b| a + b,
    ))
}

/// `h_q(m)` three ways: brute force (when `m <= budget`), recurrence and
/// closed form. Fails if any two disagree.
pub fn h_q_checked(m: usize, q: Q, budget: usize, config: SweepConfig) -> Result<BigUint> {
    let recurrence = crate::numbers::h_q_recurrence_row(m, q).swap_remove(m);
    if let Some(formula) = crate::numbers::h_q_formula(m, q) {
        if formula != recurrence {
            return Err(Error::OutOfRange(format!(
                "h_{q}({m}): recurrence {recurrence} != closed form {formula}"
            )));
        }
    }
    if m <= budget {
        let brute = h_q_brute(m, q, config);
        if brute != recurrence {
            return Err(Error::OutOfRange(format!(
                "h_{q}({m}): enumeration {brute} != recurrence {recurrence}"
            )));
        }
    }
    Ok(recurrence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::h_q_count;

    fn p(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    fn q(v: usize) -> Q {
        Q::new(v).unwrap()
    }

    #[test]
    fn containment_examples() {
        let w = contains_pat_q(&p(&[1, 3, 2]), q(1)).unwrap();
        assert_eq!(w, PatternWitness { positions: vec![1, 2], bottom: 3 });
        assert!(w.certifies(&p(&[1, 3, 2])));
        assert_eq!(contains_pat_q(&p(&[3, 2, 1]), q(1)), None);
        for g in all_permutations(3) {
            assert_eq!(contains_pat_q(&g, q(2)), None);
        }
    }

    #[test]
    fn witness_is_leftmost() {
        // descents at 2 and 4; only the one at 4 has a smaller entry before it
        let g = p(&[5, 4, 1, 6, 3, 2]);
        let w = contains_pat_q(&g, q(1)).unwrap();
        assert_eq!(w, PatternWitness { positions: vec![3, 4], bottom: 5 });
        let g = p(&[5, 1, 2, 4, 3]);
        let w = contains_pat_q(&g, q(2)).unwrap();
        assert_eq!(w, PatternWitness { positions: vec![2, 3, 4], bottom: 5 });
    }

    #[test]
    fn avoidance_examples() {
        assert!(!avoids_q(&p(&[1, 3, 2]), q(1)));
        for k in 1..=4 {
            assert!(avoids_q(&Permutation::identity(5), q(k)));
        }
        assert_eq!(all_permutations(3).filter(|g| avoids_q(g, q(1))).count(), 5);
    }

    #[test]
    fn pat_q_lists_q_factorial_patterns() {
        assert_eq!(pat_q(q(2)), vec![vec![1, 2, 4, 3], vec![2, 1, 4, 3]]);
        assert_eq!(pat_q(q(3)).len(), 6);
        assert_eq!(pat_q(q(1)), vec![vec![1, 3, 2]]);
    }

    #[test]
    fn criterion_matches_literal_patterns_and_descent_sets() {
        for m in 1..=7 {
            for g in all_permutations(m) {
                for k in 1..=3 {
                    let witness = contains_pat_q(&g, q(k));
                    if let Some(w) = &witness {
                        assert!(w.certifies(&g));
                        assert_eq!(w.positions.len(), k + 1);
                    }
                    assert_eq!(witness.is_some(), contains_pat_q_naive(&g, q(k)), "{g:?} q={k}");
                    assert_eq!(witness.is_none(), avoids_by_descent_sets(&g, q(k)));
                }
            }
        }
    }

    #[test]
    fn h_q_brute_examples() {
        let cfg = SweepConfig::sequential();
        assert_eq!(h_q_brute(3, q(1), cfg), BigUint::from(5u8));
        assert_eq!(h_q_brute(3, q(2), cfg), BigUint::from(6u8));
        assert_eq!(h_q_brute(4, q(2), cfg), BigUint::from(22u8));
        for m in 0..=7 {
            for k in 1..=3 {
                assert_eq!(h_q_brute(m, q(k), cfg), h_q_count(m, q(k)));
            }
        }
        assert_eq!(h_q_checked(6, q(2), 9, SweepConfig::with_threads(2)).unwrap(), h_q_count(6, q(2)));
    }
}
