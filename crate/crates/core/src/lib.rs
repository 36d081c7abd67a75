//! Intersection graphs of polygonal curves, exact multicommodity-flow
//! congestion on small graphs, and the embedding-plus-sweep pipeline that
//! produces balanced vertex separators of string graphs.
//!
//! The modules build on each other roughly bottom-up:
//!
//! * [`graph`]: the shared undirected graph type, test-family generators and
//!   separator checking.
//! * [`geometry`]: exact integer predicates on polylines, intersection graphs,
//!   weak realizations of abstract topological graphs.
//! * [`lp`]: a dense two-phase simplex solver.
//! * [`congestion`]: edge and vertex congestion through flow LPs, and path
//!   decomposition of the optimal flows.
//! * [`metrics`]: shortest-path metrics, ratio functionals and exact sparsity.
//! * [`embedding`]: the randomized distance-to-a-random-subset line embedding.
//! * [`cuts`]: node-split max-flow vertex cuts, the threshold sweep and the
//!   recursive separator pipeline.
//! * [`experiments`]: the random-drawing conflict experiment, crossing bounds,
//!   the even-subword search and duality reports.

#![forbid(unsafe_code)]

pub mod congestion;
pub mod cuts;
pub mod embedding;
mod error;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod lp;
pub mod metrics;
pub mod seeds;

pub use error::{Error, Result};
pub use graph::{EdgeCut, Graph, VertexCut};

/// Exact rational used for sparsity values.
pub type Rational = num_rational::Ratio<i64>;
