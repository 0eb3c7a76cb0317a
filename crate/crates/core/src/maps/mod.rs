//! Combinatorial maps, drawings of arc systems on them, and the surgery that
//! turns a drawing on a surface of genus `g` into a planar one.

mod drawn;
mod gen;
mod map;
mod ops;
mod planarize;

use thiserror::Error;

pub use drawn::DrawnSystem;
pub use gen::{random_drawn_system, torus_two_loops};
pub(crate) use map::UnionFind;
pub use map::{CombinatorialMap, Dart, VertexTag};
pub use ops::{crossing_augment, grid_blowup, vertex_split};
pub use planarize::{
    cut_statistics, planarize_pipeline, tree_cotree_planarize, CutStatistics, PlanarizeReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("invalid map: {0}")]
    Invalid(String),
    #[error("map has {components} connected components")]
    Disconnected { components: usize },
    #[error("Euler characteristic {euler} is odd")]
    NonIntegralGenus { euler: i64 },
    #[error("map is not cellular: {components} components, {faces} faces")]
    NonCellular { components: usize, faces: usize },
    #[error("forbidden edges cannot be avoided by a planarizing set")]
    ForbiddenUnavoidable,
    #[error("route of arc {arc}: {reason}")]
    BadRoute { arc: usize, reason: String },
    #[error("crossing vertex {vertex} does not join two distinct arcs")]
    BadCrossing { vertex: usize },
    #[error("planarized map still has genus {genus}")]
    NotPlanar { genus: u64 },
}
