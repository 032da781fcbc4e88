//! q-analogues of Coxeter-length statistics on symmetric groups, the covering
//! maps `f_q : S_{n+q-1} -> S_n`, dashed-pattern avoidance, and the
//! alternating-group layer built on the same canonical presentation.

pub mod alternating;
pub mod canonical;
pub mod covering;
pub mod distributions;
pub mod error;
pub mod numbers;
pub mod patterns;
pub mod perm;
pub mod poly;
pub mod qstats;
pub mod sweep;

pub use canonical::{decompose, recompose, CanonicalFactor, CanonicalWord};
pub use covering::{f_q, fiber, FiberIndex, FiberMethod};
pub use distributions::{distribution, verify, FilterSpec, Statistic, Theorem, VerificationReport};
pub use error::{Error, Result};
pub use perm::{Permutation, PositionSet};
pub use poly::Polynomial;
pub use qstats::{stat_record, StatRecord, Q};
pub use sweep::SweepConfig;
