//! Exact Stirling numbers, q-Bell numbers and friends.
//!
//! `b_q(n) = sum_k q^k S(n, k)` counts set partitions of `[n]` whose blocks
//! are coloured with `q` colours. The Dobinski-type series
//! `b_q(n) = e^{-q} sum_r q^r r^n / r!` is evaluated with exact rationals.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qstats::Q;

pub type BigNat = BigUint;

pub fn factorial(n: usize) -> BigNat {
    (1..=n).fold(BigNat::one(), |acc, i| acc * BigNat::from(i))
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigNat::one();
    for i in 0..k {
        acc = acc * BigNat::from(n - i) / BigNat::from(i + 1);
    }
    acc
}

/// Rows `0..=n` of a triangle built by `T(i, j) = T(i-1, j-1) + w(i, j) T(i-1, j)`.
fn triangle(n: usize, weight: impl Fn(usize, usize) -> usize) -> Vec<Vec<BigNat>> {
    let mut rows: Vec<Vec<BigNat>> = vec![vec![BigNat::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigNat::zero(); i + 1];
        for j in 1..=i {
            let mut v = prev[j - 1].clone();
            if j < i {
                v += &prev[j] * BigNat::from(weight(i, j));
            }
            row[j] = v;
        }
        rows.push(row);
    }
    rows
}

/// Row `n` of `S(n, k)`, `k = 0..=n`.
pub fn stirling2_row(n: usize) -> Vec<BigNat> {
    triangle(n, |_, j| j).pop().unwrap()
}

/// Row `n` of the signless `c(n, k)`, `k = 0..=n`.
pub fn stirling1_row(n: usize) -> Vec<BigNat> {
    triangle(n, |i, _| i - 1).pop().unwrap()
}

pub fn stirling2(n: usize, k: usize) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    stirling2_row(n).swap_remove(k)
}

pub fn stirling1_unsigned(n: usize, k: usize) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    stirling1_row(n).swap_remove(k)
}

fn pow(base: usize, exp: usize) -> BigNat {
    num_traits::pow(BigNat::from(base), exp)
}

/// `b_q(n) = sum_k q^k S(n, k)`.
pub fn bell_q(n: usize, q: Q) -> BigNat {
    stirling2_row(n)
        .iter()
        .enumerate()
        .map(|(k, s)| s * pow(q.get(), k))
        .sum()
}

/// `b_q(0..=n)` from `b_q(n) = q sum_k C(n-1, k) b_q(n-k-1)`, `b_q(0) = 1`.
pub fn bell_q_recurrence_row(n: usize, q: Q) -> Vec<BigNat> {
    let mut b = vec![BigNat::one()];
    for i in 1..=n {
        let s: BigNat = (0..i).map(|k| binomial(i - 1, k) * &b[i - k - 1]).sum();
        b.push(s * BigNat::from(q.get()));
    }
    b
}

/// `h_q(0..=m)` from `h_q(n) = q sum_{k=0}^{n-q} C(n-q, k) h_q(n-k-1)` for
/// `n >= q`, seeded with `h_q(n) = n!` below `q`.
pub fn h_q_recurrence_row(m: usize, q: Q) -> Vec<BigNat> {
    let q = q.get();
    let mut h: Vec<BigNat> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n < q {
            h.push(factorial(n));
        } else {
            let s: BigNat = (0..=n - q).map(|k| binomial(n - q, k) * &h[n - k - 1]).sum();
            h.push(s * BigNat::from(q));
        }
    }
    h
}

/// `h_q(m) = (q-1)! b_q(m-q+1)`, defined for `m >= q - 1`.
pub fn h_q_formula(m: usize, q: Q) -> Option<BigNat> {
    let n = (m + 1).checked_sub(q.get())?;
    Some(factorial(q.get() - 1) * bell_q(n, q))
}

/// Number of permutations of degree `m` avoiding every pattern of `Pat(q)`,
/// from the recurrence; cross-checked against the closed form.
pub fn h_q_count(m: usize, q: Q) -> BigNat {
    let h = h_q_recurrence_row(m, q).swap_remove(m);
    if let Some(f) = h_q_formula(m, q) {
        debug_assert_eq!(h, f);
    }
    h
}

/// `c_q(n, k) = q^k (q-1)! c(n, k)`.
pub fn c_q(n: usize, k: usize, q: Q) -> Result<BigNat> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::OutOfRange(format!("c_q needs 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(pow(q.get(), k) * factorial(q.get() - 1) * stirling1_unsigned(n, k))
}

/// The Dobinski-type partial sum
/// `(sum_{r<=R} q^r r^n / r!) / (sum_{r<=R} q^r / r!)`,
/// the truncated `e^q` in the denominator using the same `R`.
pub fn dobinski_q(n: usize, q: Q, terms: usize) -> Result<BigRational> {
    if terms == 0 {
        return Err(Error::OutOfRange("Dobinski series needs at least one term".into()));
    }
    let q = q.get();
    let mut weight = BigRational::one(); // q^r / r!
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    for r in 0..=terms {
        if r > 0 {
            weight = weight * BigRational::from_integer(q.into())
                / BigRational::from_integer(r.into());
        }
        let rn: num_bigint::BigInt = num_traits::pow(num_bigint::BigInt::from(r), n);
        num += &weight * BigRational::from_integer(rn);
        den += &weight;
    }
    Ok(num / den)
}

/// Truncation length guaranteeing 1e-9 relative accuracy at `n <= 10, q <= 3`.
pub fn dobinski_terms(n: usize, q: Q) -> usize {
    6 * (n + q.get()) + 40
}

/// `|approx - exact| / exact` as a float.
pub fn relative_error(approx: &BigRational, exact: &BigNat) -> f64 {
    let exact = BigRational::from_integer(exact.clone().into());
    let diff = approx - &exact;
    let diff = if diff < BigRational::zero() { -diff } else { diff };
    (diff / exact).to_f64().unwrap_or(f64::INFINITY)
}
