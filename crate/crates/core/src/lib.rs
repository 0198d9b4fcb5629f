//! Approximate coloring of graphs promised to be 3-colorable.
//!
//! The pipeline peels large independent sets off the graph as color classes
//! until few vertices remain, then finishes with an exact 3-coloring. Each
//! independent set comes from a degree-reduction branching whose leaves are
//! solved by rounding a vector 3-coloring, boosted by repetition.
//!
//! Every stage is exposed on its own so it can be checked against the exact
//! oracles in [`exact`].

pub mod approx;
pub mod bench;

pub mod branch;
pub mod coloring;

pub mod dimacs;
mod error;
pub mod exact;
pub mod graph;
pub mod rounding;
pub mod seed;
pub mod vector;

pub use approx::{approx_independent_set, approx_independent_set_with, IsConfig, IsReport};
pub use branch::{
    best_effort, degree_reduce_is, derive_params, leaf_count_bound, ApproxParams, BranchError,
    BranchStats,
};
pub use coloring::{approx_color, peel_round, ColorConfig, RunReport};
pub use error::{Error, Result};
pub use exact::{exact_3color, exact_max_independent_set};
pub use graph::{
    gen_planted_3col, verify_coloring, verify_independent_set, Coloring, Graph, PlantedInstance,
    VertexSet,
};
pub use rounding::{
    bounded_degree_is, bounded_degree_is_with, greedy_min_degree, hyperplane_round, RoundingConfig,
    ThresholdGrid,
};
pub use vector::{
    embedding_residual, planted_embedding, solve_vector_3coloring, SolveStatus, SolverConfig,
    VectorEmbedding,
};
