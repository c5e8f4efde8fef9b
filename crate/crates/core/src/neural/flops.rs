use serde::{Deserialize, Serialize};

use super::{ModelConfig, NeuralError};
use crate::FLOPS_CONVENTION;

/// Floating-point operation counts for one forward pass.
///
/// One multiply-accumulate counts 2, each bias addition 1, ReLU 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopsReport {
    pub conv1: u64,
    pub conv2: u64,
    pub dense: u64,
    pub total: u64,
    pub convention: String,
}

/// `side_out² · C_out · (2·H²·C_in + 1)` for a valid convolution.
pub fn conv_flops(input_side: usize, filter: usize, in_channels: usize, out_channels: usize) -> u64 {
    let side = (input_side + 1 - filter) as u64;
    let outputs = side * side * out_channels as u64;
    outputs * 2 * (filter * filter * in_channels) as u64 + outputs
}

/// `2L + 1` for a dense layer on a length-L vector.
pub fn dense_flops(len: usize) -> u64 {
    2 * len as u64 + 1
}

/// Forward-pass FLOPs; depends on shapes only.
pub fn flops(config: &ModelConfig) -> Result<FlopsReport, NeuralError> {
    let (n0, n1, _) = config.sides()?;
    let conv1 = conv_flops(n0, config.filter1, 1, config.channels1);
    let conv2 = conv_flops(n1, config.filter2, config.channels1, config.channels2);
    let dense = dense_flops(config.flattened_len()?);
    Ok(FlopsReport {
        conv1,
        conv2,
        dense,
        total: conv1 + conv2 + dense,
        convention: FLOPS_CONVENTION.to_string(),
    })
}
