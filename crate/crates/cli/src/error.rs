use std::fmt;

use graphlet_cnn::graph::{DataError, GraphError};
use graphlet_cnn::harness::HarnessError;
use graphlet_cnn::neural::NeuralError;
use graphlet_cnn::sample::SampleError;

/// Failure with its process exit code: 1 usage, 2 data, 3 runtime.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<NeuralError> for CliError {
    fn from(e: NeuralError) -> Self {
        match e {
            NeuralError::VersionMismatch { .. }
            | NeuralError::CorruptPayload(_)
            | NeuralError::Parse(_)
            | NeuralError::Io { .. }
            | NeuralError::InvalidConfig(_)
            | NeuralError::ShapeMismatch(_) => CliError::Data(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::ZeroBudget | SampleError::InvalidTuning(_) | SampleError::AggregatePattern(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Data(e) => e.into(),
            HarnessError::Graph(e) => e.into(),
            HarnessError::Neural(e) => e.into(),
            HarnessError::Sample(e) => e.into(),
            HarnessError::Metrics(_) | HarnessError::DivergedLoss { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
