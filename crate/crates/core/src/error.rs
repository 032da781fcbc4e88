use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("q must be a positive integer, got {0}")]
    InvalidQ(usize),
    #[error("degree {degree} is too small for q = {q}")]
    DegreeTooSmall { degree: usize, q: usize },
    #[error("odd permutation {0} is not in the alternating group")]
    OddPermutation(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("cannot parse word: {0}")]
    WordParse(String),
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("enumeration of S_{m} exceeds the budget (maximum degree {budget})")]
    BudgetExceeded { m: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
