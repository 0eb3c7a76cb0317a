//! Exact combinatorial model of x-monotone arc systems on `n` collinear
//! punctures (a sphere with `n + 1` punctures, the extra one at infinity).
//!
//! An arc is identified by its endpoints and the word recording whether it
//! passes above or below each puncture in between; distinct triples are
//! treated as distinct homotopy classes.

mod arc;
mod fill;
mod intersect;
mod realize;
mod search;
mod split;

use thiserror::Error;

pub use arc::{ArcSystem, MonotoneArc, Side};
pub use fill::{fill_punctures, FillResult};
pub use intersect::{
    are_homotopic, count_pairs_at_least, enumerate_universe, pairwise_min_intersections,
    pairwise_min_intersections_on, total_min_crossings, validate_k_system, ForcedOrderSequence,
    Upper, Violation,
};
pub use realize::{realize, Realization};
pub use search::{
    greedy_k_system, max_k_system_exact, max_k_system_greedy, przytycki_cap, ExactOptions,
    DEFAULT_EXACT_CAP,
};
pub use split::{split_punctures, SplitResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArcError {
    #[error("invalid endpoints {left} < {right} required, both at least 1")]
    BadEndpoints { left: usize, right: usize },
    #[error("arc ({left},{right}) needs {} signs, got {len}", right - left - 1)]
    BadSignLength {
        left: usize,
        right: usize,
        len: usize,
    },
    #[error("invalid sign letter {0:?}, expected 'a' or 'b'")]
    BadLetter(char),
    #[error("arc {arc} leaves the {n} punctures of its system")]
    OutOfRange { arc: String, n: usize },
    #[error("arcs live on different puncture counts ({0} vs {1})")]
    PunctureMismatch(usize, usize),
    #[error("arc {arc} has an endpoint outside the keep set")]
    EndpointFilled { arc: String },
    #[error(
        "universe has {universe} arcs, above the exact-search cap {cap}; use the greedy search"
    )]
    CapExceeded { universe: usize, cap: usize },
    #[error("system of {size} arcs exceeds the arc-count bound {bound}")]
    PrzytyckiViolated { size: usize, bound: f64 },
    #[error("degree cap must be positive")]
    ZeroDegreeCap,
}
