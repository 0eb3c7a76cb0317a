//! Planar separators, bisection of sphere systems and the recursive
//! decomposition that certifies crossing lower bounds on a given system.

mod bisect;
mod separator;
mod trace;

use thiserror::Error;

use crate::maps::MapError;
use crate::monotone::ArcError;

pub use bisect::{bisect, BisectionResult, MergedPair};
pub use separator::{planar_separator, Separation, SEPARATOR_CONSTANT};
pub use trace::{
    decompose_certify, stop_rule_level, CertifyOptions, DecompositionTrace, LevelRecord,
    PieceRecord, PieceStatus, TraceParameters, Verdict, TRACE_FORMAT_VERSION,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error("separator input has genus {genus}")]
    NotPlanar { genus: u64 },
    #[error("{weights} weights for {vertices} vertices")]
    WeightCount { weights: usize, vertices: usize },
    #[error("bisection needs at least 5 punctures, got {0}")]
    TooFewPunctures(usize),
    #[error("separator could not balance the punctures")]
    Unbalanced,
}
