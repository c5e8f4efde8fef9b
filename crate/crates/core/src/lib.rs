//! Graphlet count estimation with a small convolutional network.
//!
//! The crate is split along the pipeline:
//!
//! - [`graph`]: graphs, random generators, zero padding and swap augmentation,
//!   TU-format ingestion and the JSONL dataset format.
//! - [`exact`]: exact induced graphlet counting (ESU enumeration plus canonical
//!   classification). Produces training labels and serves as the oracle.
//! - [`sample`]: edge-sampling and MCMC estimators instrumented with
//!   comparison counters.
//! - [`neural`]: the two-convolution, one-dense-layer network with hand-written
//!   gradients, Adam and FLOPs accounting.
//! - [`harness`]: dataset building, training, evaluation and the matched-error
//!   speed comparison.

pub mod exact;
pub mod graph;
pub mod harness;
pub mod neural;
pub mod ops;
pub mod rng;
pub mod sample;

pub use exact::{count_all, count_exact, CountVector, GraphletPattern};
pub use graph::{Graph, PaddedMatrix};
pub use ops::OpCounter;

/// Version tag of the model file format.
pub const MODEL_FORMAT_VERSION: u32 = 1;
/// Version tag of the JSONL dataset schema.
pub const DATASET_SCHEMA_VERSION: u32 = 1;
/// Version tag of the FLOPs counting convention (1 MAC = 2 FLOPs, bias add = 1, ReLU = 0).
pub const FLOPS_CONVENTION: &str = "mac2-bias1-relu0/v1";
