use thiserror::Error;

use crate::closure::AxiomReport;
use crate::topology::ValidityReport;

/// Crate-wide error type. Every variant has a stable machine-readable code
/// (see [`Error::code`]) so front ends can map failures without string
/// matching.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("universe size {0} outside supported range 1..=64")]
    SizeOutOfRange(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("element index {index} outside universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands live over universes of size {left} and {right}")]
    UniverseMismatch { left: usize, right: usize },
    #[error("size {size} exceeds the exhaustive bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("dense-set candidate F must be nonempty")]
    EmptyF,
    #[error("dense-set candidate F must be a strict subset of the universe")]
    FullF,
    #[error("table rule must map every subset exactly once")]
    IncompleteTable,
    #[error("map violates the closure-operator axioms")]
    NotAClosureOperator(Box<AxiomReport>),
    #[error("family of subsets is not a topology")]
    InvalidTopology(Box<ValidityReport>),
    #[error("subspace carrier must be nonempty")]
    EmptySubspace,
    #[error("F is not closed in the given topology")]
    FNotClosed,
    #[error("state or control dimensions do not match the system")]
    InconsistentDimensions,
    #[error("state became nonfinite during integration (time step too large?)")]
    NonfiniteState,
    #[error("interval must satisfy 0 <= a < b <= 1")]
    BadInterval,
    #[error("feature grid yields {cells} cells, more than the 64-cell cap")]
    TooManyCells { cells: usize },
    #[error("attainable cloud is empty")]
    EmptyCloud,
    #[error("horizon must split into a whole number of steps per control segment")]
    SegmentMisaligned,
    #[error("parameter out of range: {0}")]
    BadParameter(&'static str),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SizeOutOfRange(_) => "size_out_of_range",
            Error::LabelCount { .. } => "label_count",
            Error::DuplicateLabel(_) => "duplicate_label",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::UniverseMismatch { .. } => "universe_mismatch",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::EmptyF => "empty_f",
            Error::FullF => "full_f",
            Error::IncompleteTable => "incomplete_table",
            Error::NotAClosureOperator(_) => "not_a_closure_operator",
            Error::InvalidTopology(_) => "invalid_topology",
            Error::EmptySubspace => "empty_subspace",
            Error::FNotClosed => "f_not_closed",
            Error::InconsistentDimensions => "inconsistent_dimensions",
            Error::NonfiniteState => "nonfinite_state",
            Error::BadInterval => "bad_interval",
            Error::TooManyCells { .. } => "too_many_cells",
            Error::EmptyCloud => "empty_cloud",
            Error::SegmentMisaligned => "segment_misaligned",
            Error::BadParameter(_) => "bad_parameter",
        }
    }
}
