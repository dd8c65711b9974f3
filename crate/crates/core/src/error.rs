use thiserror::Error;

use crate::semiring_core::MinorIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not in prevariety: minor {0} is tropically nonsingular")]
    NotInPrevariety(MinorIndex),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("permutations {0} and {1} are not adjacent in the Birkhoff graph")]
    NotAnEdge(String, String),

    #[error("split {0} is not bicolored")]
    NotBicolored(String),

    #[error("coloring is not admissible: {0}")]
    InadmissibleColoring(String),

    #[error("invalid plane description: {0}")]
    InvalidPlane(String),

    #[error("undecided at budget: {0}")]
    Budget(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
