use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use serde::{Deserialize, Serialize};

use super::{CnnModel, Dtype, ModelConfig, NeuralError, Scalar};
use crate::MODEL_FORMAT_VERSION;

const FORMAT_NAME: &str = "graphlet-cnn-model";
const FLATTEN_ORDER: &str = "height-width-channel";

/// On-disk model: JSON header fields plus base64 little-endian IEEE-754
/// payloads, one per parameter tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub format_version: u32,
    pub dtype: Dtype,
    pub flatten_order: String,
    pub config: ModelConfig,
    pub target_scale: f64,
    pub conv1_weights: String,
    pub conv1_bias: String,
    pub conv2_weights: String,
    pub conv2_bias: String,
    pub dense_weights: String,
    pub dense_bias: String,
}

fn encode<T: Scalar>(values: &[T]) -> String {
    let mut bytes = Vec::with_capacity(values.len() * T::DTYPE.byte_width());
    values.iter().for_each(|v| v.push_le_bytes(&mut bytes));
    STANDARD.encode(bytes)
}

fn decode<T: Scalar>(name: &str, text: &str, dtype: Dtype, expected: usize) -> Result<Vec<T>, NeuralError> {
    let bytes = STANDARD
        .decode(text)
        .map_err(|e| NeuralError::CorruptPayload(format!("{name}: {e}")))?;
    let width = dtype.byte_width();
    if bytes.len() != expected * width {
        return Err(NeuralError::CorruptPayload(format!(
            "{name}: expected {} bytes, found {}",
            expected * width,
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(width)
        .map(|c| match dtype {
            Dtype::F32 => T::from_f64(f32::from_le_bytes(c.try_into().unwrap()) as f64),
            Dtype::F64 => T::from_f64(f64::from_le_bytes(c.try_into().unwrap())),
        })
        .collect())
}

impl ModelFile {
    pub fn from_model<T: Scalar>(model: &CnnModel<T>) -> Self {
        ModelFile {
            format: FORMAT_NAME.into(),
            format_version: MODEL_FORMAT_VERSION,
            dtype: T::DTYPE,
            flatten_order: FLATTEN_ORDER.into(),
            config: model.config.clone(),
            target_scale: model.target_scale,
            conv1_weights: encode(&model.conv1.weights),
            conv1_bias: encode(&model.conv1.bias),
            conv2_weights: encode(&model.conv2.weights),
            conv2_bias: encode(&model.conv2.bias),
            dense_weights: encode(&model.dense.weights),
            dense_bias: encode(std::slice::from_ref(&model.dense.bias)),
        }
    }

    /// Decodes the payloads, converting to `T` if the stored dtype differs.
    pub fn into_model<T: Scalar>(self) -> Result<CnnModel<T>, NeuralError> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(NeuralError::VersionMismatch {
                found: self.format_version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        if self.format != FORMAT_NAME || self.flatten_order != FLATTEN_ORDER {
            return Err(NeuralError::Parse(format!(
                "unsupported format {:?} / flatten order {:?}",
                self.format, self.flatten_order
            )));
        }
        let mut model = CnnModel::<T>::zeros(self.config)?;
        let d = self.dtype;
        model.conv1.weights = decode("conv1_weights", &self.conv1_weights, d, model.conv1.weights.len())?;
        model.conv1.bias = decode("conv1_bias", &self.conv1_bias, d, model.conv1.bias.len())?;
        model.conv2.weights = decode("conv2_weights", &self.conv2_weights, d, model.conv2.weights.len())?;
        model.conv2.bias = decode("conv2_bias", &self.conv2_bias, d, model.conv2.bias.len())?;
        model.dense.weights = decode("dense_weights", &self.dense_weights, d, model.dense.weights.len())?;
        model.dense.bias = decode("dense_bias", &self.dense_bias, d, 1)?[0];
        model.target_scale = self.target_scale;
        model.validate()?;
        if !model.as_gradients_view().iter().all(|s| s.iter().all(|v| v.is_finite())) {
            return Err(NeuralError::CorruptPayload("non-finite parameter".into()));
        }
        Ok(model)
    }
}

pub fn save_model<T: Scalar>(model: &CnnModel<T>, path: &Path) -> Result<(), NeuralError> {
    let text = serde_json::to_string_pretty(&ModelFile::from_model(model))
        .map_err(|e| NeuralError::Parse(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| NeuralError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_model<T: Scalar>(path: &Path) -> Result<CnnModel<T>, NeuralError> {
    let text = std::fs::read_to_string(path).map_err(|e| NeuralError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| NeuralError::Parse(e.to_string()))?;
    file.into_model()
}
