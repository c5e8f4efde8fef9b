use super::{NeuralError, Scalar};
use crate::graph::PaddedMatrix;

/// Rank-3 array of shape (height, width, channels), stored row-major with
/// the channel index fastest: element `(i, j, t)` lives at `(i·W + j)·C + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor3<T> {
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Tensor3 {
            height,
            width,
            channels,
            data: vec![T::zero(); height * width * channels],
        }
    }

    pub fn from_vec(height: usize, width: usize, channels: usize, data: Vec<T>) -> Result<Self, NeuralError> {
        if data.len() != height * width * channels {
            return Err(NeuralError::ShapeMismatch(format!(
                "{} values for shape ({height}, {width}, {channels})",
                data.len()
            )));
        }
        Ok(Tensor3 {
            height,
            width,
            channels,
            data,
        })
    }

    /// Single-channel tensor holding a padded adjacency matrix.
    pub fn from_padded(mx: &PaddedMatrix) -> Self {
        let d = mx.dim();
        Tensor3 {
            height: d,
            width: d,
            channels: 1,
            data: mx.values().iter().map(|&v| if v != 0 { T::one() } else { T::zero() }).collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, t: usize) -> T {
        self.data[(i * self.width + j) * self.channels + t]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, t: usize, v: T) {
        self.data[(i * self.width + j) * self.channels + t] = v;
    }

    pub fn ensure_finite(&self, stage: &'static str) -> Result<(), NeuralError> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(NeuralError::NonFinite(stage))
        }
    }
}
