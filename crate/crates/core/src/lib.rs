//! Expected motif counts for mixture graph models with conditionally
//! independent links.
//!
//! A mixture model draws a latent vector `z`, decodes it into a matrix of
//! per-link probabilities (the expected adjacency matrix), and samples every
//! link independently. Conditional on `z`, the expected ordered motif count is
//! the motif count evaluated directly on the expected adjacency matrix, so the
//! only sampling needed is over `z`. This crate provides:
//!
//! - [`graph`], [`motif`], [`edgelist`]: validated graph and template types and
//!   their file formats.
//! - [`count`]: ordered and set-based motif counts, automorphism enumeration,
//!   and the trace-of-cube triangle kernel.
//! - [`mixture`]: decoders, priors, likelihoods and graph sampling.
//! - [`estimator`]: the conditional (expected-matrix) estimator, the naive
//!   graph-sampling estimator, and significance scores.
//! - [`oracle`]: exhaustive enumeration of all graphs on small node sets, used
//!   to check the fast path exactly.

pub mod count;
pub mod edgelist;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod mixture;
pub mod motif;
pub mod oracle;
mod sum;

pub use count::{
    automorphism_count, automorphisms, motif_indicator, ordered_count, ordered_count_binary,
    set_count, triangle_count_trace, MotifCountResult,
};
pub use edgelist::{load_graph, parse_edge_list, save_graph, write_edge_list, LabeledGraph};
pub use error::{Error, ErrorClass, Result};
pub use estimator::{
    conditional_expected_count, estimate_expected_count, estimate_from_latents, naive_estimate,
    significance, EstimateReport, Method, SignificanceMode, SignificanceReport,
};
pub use graph::{permute_nodes, threshold_to_graph, Adjacency, Graph, NodeTuple, WeightedGraph};
pub use mixture::{
    graph_log_likelihood, parse_latents, sample_graph, sample_latent, Decoder, LatentVector,
    PriorSpec,
};
pub use motif::{Motif, DEFAULT_MAX_ARITY};
