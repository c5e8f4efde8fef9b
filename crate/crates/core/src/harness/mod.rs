//! Experiment orchestration: labeled datasets, training, evaluation, the
//! matched-error cost comparison and report files.

mod compare;
mod config;
mod data;
pub mod metrics;
mod report;
mod train;

use thiserror::Error;

use crate::graph::{DataError, GraphError, Split};
use crate::neural::NeuralError;
use crate::sample::SampleError;

pub use compare::{compare, ComparisonReport, ComparisonRow, COMPARISON_NOTE};
pub use config::{
    CompareConfig, DataSource, ExperimentConfig, ResolvedConfig, SeedPlan, SplitSizes, TrainConfig,
};
pub use data::{build_labeled_dataset, check_no_leak};
pub use metrics::{relative_error, MetricsError, MetricsReport};
pub use report::{prepare_output_dir, run_experiment, write_json, ExperimentOutcome, MetricsFile, EARLY_STOPPING_NOTE};
pub use train::{evaluate, predict, train, EpochRecord, TrainHistory};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("{0} split is empty")]
    EmptySplit(Split),
    #[error("sample {0} has no label")]
    MissingLabel(String),
    #[error("training diverged (non-finite loss) in epoch {epoch}")]
    DivergedLoss { epoch: usize },
    #[error("graph {0} appears in the training split and in a held-out split")]
    SplitLeak(String),
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("output {0} already exists (use --force to overwrite)")]
    OutputExists(String),
}

impl HarnessError {
    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}
