//! Arc systems on punctured orientable surfaces.
//!
//! * [`bounds`] evaluates the closed-form crossing and arc-count bounds.
//! * [`monotone`] is the exact model of x-monotone arc systems: intersection
//!   numbers, validation, extremal search and realizations.
//! * [`maps`] holds rotation-system drawings on orientable surfaces, genus
//!   computation, grid blow-up and tree-cotree planarization.
//! * [`decompose`] runs planar separators, bisections and the recursive
//!   decomposition that certifies crossing lower bounds instance by instance.
//! * [`format`] reads and writes the `arcsys` and `cmap` text formats.

pub mod bounds;
pub mod decompose;
pub mod format;
pub mod maps;
pub mod monotone;
pub mod parallel;
