use thiserror::Error;

use crate::perm::MAX_N;

pub type Result<T> = std::result::Result<T, Error>;

/// Problems found while reading a code file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatProblem {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("duplicate word")]
    DuplicateWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length {0} outside the supported range 1..={MAX_N}")]
    LengthOutOfRange(usize),

    #[error("position {position} out of range for length {n}")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("invalid transposition ({i} {j})")]
    InvalidTransposition { i: usize, j: usize },

    #[error("rank {value} out of range for n = {n}")]
    RankOutOfRange { value: u64, n: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("unbounded oracle search needs n <= {max}, got {n}; pass a distance cap")]
    OracleCap { n: usize, max: usize },

    #[error("sieve constructors need n <= {max}, got {n}")]
    SieveCap { n: usize, max: usize },

    #[error("work budget exceeded: {required} evaluations needed, budget is {budget}; {hint}")]
    BudgetExceeded {
        required: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("code file line {line}: {problem}")]
    CodeFormat { line: usize, problem: FormatProblem },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable short identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::InvalidPermutation(_) => "invalid-permutation",
            Error::LengthOutOfRange(_) => "length-out-of-range",
            Error::PositionOutOfRange { .. } => "position-out-of-range",
            Error::InvalidTransposition { .. } => "invalid-transposition",
            Error::RankOutOfRange { .. } => "rank-out-of-range",
            Error::OutOfRange(_) => "out-of-range",
            Error::OracleCap { .. } => "oracle-cap",
            Error::SieveCap { .. } => "sieve-cap",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::Overflow(_) => "overflow",
            Error::InvalidCode(_) => "invalid-code",
            Error::CodeFormat { problem, .. } => match problem {
                FormatProblem::MalformedHeader(_) => "malformed-header",
                FormatProblem::InvalidWord(_) => "invalid-word",
                FormatProblem::DuplicateWord => "duplicate-word",
            },
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
