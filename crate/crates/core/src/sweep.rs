//! Exhaustive enumeration of `S_m`.
//!
//! The group is split into `m` shards by the first window value. Each shard
//! is walked in lexicographic order and folded into a private accumulator;
//! accumulators are merged in shard order, so the result does not depend on
//! how many threads ran the shards.

use rayon::prelude::*;

use crate::perm::Permutation;

/// Rearranges `w` into its lexicographic successor. Returns `false` when `w`
/// is already the last arrangement.
pub fn next_permutation(w: &mut [usize]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// Lexicographic iterator over windows sharing a fixed prefix.
pub struct LexPermutations {
    prefix_len: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let w = self.current.as_mut()?;
        let out = Permutation::from_window_unchecked(w.clone());
        if !next_permutation(&mut w[self.prefix_len..]) {
            self.current = None;
        }
        Some(out)
    }
}

/// All of `S_m` in lexicographic order.
pub fn all_permutations(m: usize) -> LexPermutations {
    LexPermutations {
        prefix_len: 0,
        current: Some((1..=m).collect()),
    }
}

/// The permutations of `S_m` with `p(1) = first`, in lexicographic order.
pub fn shard(m: usize, first: usize) -> LexPermutations {
    assert!(first >= 1 && first <= m);
    let mut w = vec![first];
    w.extend((1..=m).filter(|&v| v != first));
    LexPermutations {
        prefix_len: 1,
        current: Some(w),
    }
}

/// How a sweep is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    /// Worker threads; 1 forces a plain sequential loop.
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            threads: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        }
    }
}

impl SweepConfig {
    pub fn sequential() -> Self {
        SweepConfig { threads: 1 }
    }

    pub fn with_threads(threads: usize) -> Self {
        SweepConfig {
            threads: threads.max(1),
        }
    }
}

/// Folds every permutation of `S_m` into an accumulator.
///
/// `init` builds an empty accumulator, `fold` visits one permutation and
/// `merge` combines two accumulators (left shard first).
pub fn sweep<A, I, F, M>(m: usize, config: SweepConfig, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &Permutation) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    let run_shard = |first: usize| {
        let mut acc = init();
        for p in shard(m, first) {
            fold(&mut acc, &p);
        }
        acc
    };
    if m == 0 {
        return init();
    }
    let parts: Vec<A> = if config.threads <= 1 || m == 1 {
        (1..=m).map(run_shard).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool");
        pool.install(|| (1..=m).into_par_iter().map(run_shard).collect())
    };
    parts.into_iter().reduce(&merge).unwrap_or_else(init)
}

/// Like [`sweep`], visiting only the even permutations of `S_m`.
pub fn sweep_even<A, I, F, M>(m: usize, config: SweepConfig, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &Permutation) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    sweep(
        m,
        config,
        init,
        |acc, p| {
            if p.is_even() {
                fold(acc, p)
            }
        },
        merge,
    )
}
