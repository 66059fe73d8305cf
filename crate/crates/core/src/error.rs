use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n = {n} exceeds the {what} bound of {bound}")]
    Capacity {
        what: &'static str,
        n: usize,
        bound: usize,
    },

    #[error("not a permutation of 1..={len}: {reason}")]
    InvalidPermutation { len: usize, reason: String },

    #[error("series shapes differ: order {left_order} (y cap {left_cap:?}) vs order {right_order} (y cap {right_cap:?})")]
    ShapeMismatch {
        left_order: usize,
        left_cap: Option<u64>,
        right_order: usize,
        right_cap: Option<u64>,
    },

    #[error("reciprocal needs constant term 1, found {0}")]
    NotUnit(String),

    #[error("reciprocal operand has an x^0 term with y-degree {0}")]
    YDegreeInConstant(u64),

    #[error("y-degree overflowed u64")]
    DegreeOverflow,

    #[error("pattern length k = {k} not supported here: {reason}")]
    InvalidK { k: usize, reason: &'static str },

    #[error("r = {r} is outside {lo}..={hi} for k = {k}; {hint}")]
    OutOfRange {
        r: u64,
        k: usize,
        lo: u64,
        hi: u64,
        hint: &'static str,
    },

    #[error("denominator constant term must be 1, found {0}")]
    BadDenominator(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
