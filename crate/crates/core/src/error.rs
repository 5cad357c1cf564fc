use thiserror::Error;

use crate::perm::PartitionP2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree {0}: a permutation needs at least one element")]
    InvalidDegree(usize),

    #[error("not a permutation of 1..{degree}: {reason}")]
    NotAPermutation { degree: usize, reason: String },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("permutations agree at position {position}")]
    Incompatible { position: usize },

    #[error("slots {first} and {second} conflict at position {position}")]
    SlotConflict {
        first: usize,
        second: usize,
        position: usize,
    },

    #[error("rotation offset {j} outside [1, {}] for degree {n}", n.saturating_sub(1))]
    RotationOutOfRange { n: usize, j: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("k=1: enumeration search inapplicable for m={m}, r={r}")]
    Degenerate { m: usize, r: usize },

    #[error("not a candidate: partition against the base is {partition}, expected a single part")]
    NotACandidate { partition: PartitionP2 },

    #[error(
        "stage {stage} (n={n}) has no compatible rotation/candidate pair under the strict policy"
    )]
    StageDeadEnd { stage: usize, n: usize },

    #[error("matrix is not regular: {0}")]
    IrregularMatrix(String),

    #[error("slot {slot} out of range 1..={r}")]
    SlotOutOfRange { slot: usize, r: usize },

    #[error("stage {stage} out of range 1..={max}")]
    StageOutOfRange { stage: usize, max: usize },

    #[error("oracle refused: an estimated {estimate} compatibility checks exceeds the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("postcondition violated: {0}")]
    Postcondition(String),
}
