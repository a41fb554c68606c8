//! # contralocal-core
//!
//! Local search on weighted max-cut and on the triplet-constraint problems that
//! max-cut reduces to:
//!
//! - [`graph_cut`]: max-cut instances, the flip neighborhood, and flip local search.
//! - [`reductions`]: compilers from max-cut into contrastive, betweenness,
//!   non-betweenness and tree-triplet instances, canonical configurations and
//!   cut decoders.
//! - [`embedding`]: satisfaction and objective evaluation in ℝᵈ plus an exact
//!   1-D single-point relocation search.
//! - [`tree`]: rooted binary layouts, `ab|c` consistency and leaf relocation search.
//! - [`triplet_loss`]: the hinge triplet loss, its gradient, the quadratic-program
//!   encoder, projected gradient descent and KKT residuals.
//! - [`hard_family`]: ingestion and validation of the exponential flip instances.
//!
//! Every discrete objective is computed with exact rationals; the continuous
//! triplet loss uses `f64` with explicit tolerances.

pub mod embedding;
pub mod geometry;
pub mod graph_cut;
pub mod hard_family;
pub mod rational;
pub mod reductions;
pub mod trace;
pub mod tree;
pub mod triplet_loss;
pub mod triplets;

pub use rational::Rational;
