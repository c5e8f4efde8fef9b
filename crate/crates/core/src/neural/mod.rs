//! Two-convolution, one-dense-layer CNN with reverse-mode gradients, Adam,
//! FLOPs accounting and weight serialization.

mod adam;
mod flops;
mod io;
mod layers;
mod model;
mod scalar;
mod tensor;

use thiserror::Error;

pub use adam::{Adam, AdamConfig};
pub use flops::{conv_flops, dense_flops, flops, FlopsReport};
pub use io::{load_model, save_model, ModelFile};
pub use layers::{ConvLayer, DenseLayer};
pub use model::{mse_loss, CnnModel, Gradients, ModelConfig};
pub use scalar::{Dtype, Scalar};
pub use tensor::Tensor3;

#[derive(Debug, Error, PartialEq)]
pub enum NeuralError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite value after {0}")]
    NonFinite(&'static str),
    #[error("non-finite gradient")]
    NonFiniteGradient,
    #[error("empty batch")]
    EmptyBatch,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("model format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt weight payload: {0}")]
    CorruptPayload(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed model file: {0}")]
    Parse(String),
}
