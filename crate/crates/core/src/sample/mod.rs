//! Sampling estimators used as baselines: edge sampling with per-edge local
//! counts, and a Metropolis–Hastings walk over graphlet embeddings. Both
//! report the comparison operations they spent through an [`OpCounter`].

mod edge;
mod guise;
mod tune;

pub use edge::{estimate_edge_full_pass, estimate_edge_sampling};
pub use guise::{counts_from_gfd, estimate_guise_gfd, estimate_mcmc, Gfd, GuiseWalk};
pub use tune::{tune_budget_to_error, Estimator, TuneOutcome, TuneStatus};

pub use crate::ops::OpCounter;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::GraphletPattern;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("graph has no edges to sample")]
    NoEdges,
    #[error("graph has no connected 3-node subgraph to start the walk from")]
    NoSeedGraphlet,
    #[error("anchor pattern {0} was never visited")]
    ZeroAnchorFrequency(GraphletPattern),
    #[error("{0} is an aggregate bucket and has no fixed edge count")]
    AggregatePattern(GraphletPattern),
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("invalid tuning request: {0}")]
    InvalidTuning(String),
}

/// One estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub estimate: f64,
    /// Comparisons spent by this run.
    pub ops: u64,
    /// Edges sampled or walk steps taken.
    pub budget: u64,
    pub seed: u64,
}
