use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConvLayer, DenseLayer, NeuralError, Scalar, Tensor3};
use crate::graph::PaddedMatrix;
use crate::rng::rng_from_seed;

/// Architecture hyperparameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// Side N of the padded input adjacency matrix.
    pub input_dim: usize,
    pub filter1: usize,
    pub filter2: usize,
    pub channels1: usize,
    pub channels2: usize,
    /// Drops the ReLU on the final output.
    pub linear_output: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            input_dim: 50,
            filter1: 5,
            filter2: 5,
            channels1: 8,
            channels2: 16,
            linear_output: false,
        }
    }
}

impl ModelConfig {
    /// Feature-map sides `(N0, N1, N2)` with `N_l = N_{l-1} − H_l + 1`.
    pub fn sides(&self) -> Result<(usize, usize, usize), NeuralError> {
        if self.filter1 == 0 || self.filter2 == 0 || self.channels1 == 0 || self.channels2 == 0 {
            return Err(NeuralError::InvalidConfig(
                "filter sizes and channel counts must be positive".into(),
            ));
        }
        let n0 = self.input_dim;
        if n0 < self.filter1 {
            return Err(NeuralError::InvalidConfig(format!(
                "input side {n0} smaller than first filter {}",
                self.filter1
            )));
        }
        let n1 = n0 - self.filter1 + 1;
        if n1 < self.filter2 {
            return Err(NeuralError::InvalidConfig(format!(
                "first feature map side {n1} smaller than second filter {}",
                self.filter2
            )));
        }
        Ok((n0, n1, n1 - self.filter2 + 1))
    }

    /// Length of the flattened second feature map.
    pub fn flattened_len(&self) -> Result<usize, NeuralError> {
        let (_, _, n2) = self.sides()?;
        Ok(n2 * n2 * self.channels2)
    }
}

/// Two convolution layers and one dense layer, all ReLU-activated.
#[derive(Debug, Clone, PartialEq)]
pub struct CnnModel<T> {
    pub config: ModelConfig,
    pub conv1: ConvLayer<T>,
    pub conv2: ConvLayer<T>,
    pub dense: DenseLayer<T>,
    /// Network outputs are multiplied by this to give counts.
    pub target_scale: f64,
}

/// Gradients share the parameter layout of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub conv1: ConvLayer<T>,
    pub conv2: ConvLayer<T>,
    pub dense: DenseLayer<T>,
}

/// Intermediate values of one forward pass.
pub(crate) struct Trace<T> {
    z1: Tensor3<T>,
    a1: Tensor3<T>,
    z2: Tensor3<T>,
    a2: Tensor3<T>,
    z3: T,
    out: T,
}

fn relu_in_place<T: Scalar>(t: &mut Tensor3<T>) {
    t.data_mut().iter_mut().for_each(|v| {
        if !(*v > T::zero()) {
            *v = T::zero()
        }
    });
}

impl<T: Scalar> Gradients<T> {
    pub fn zeros(config: &ModelConfig) -> Result<Self, NeuralError> {
        Ok(Gradients {
            conv1: ConvLayer::zeros(config.filter1, 1, config.channels1),
            conv2: ConvLayer::zeros(config.filter2, config.channels1, config.channels2),
            dense: DenseLayer::zeros(config.flattened_len()?),
        })
    }

    /// Parameter groups in fixed order: conv1 W, conv1 b, conv2 W, conv2 b,
    /// dense W, dense b.
    pub fn slices(&self) -> [&[T]; 6] {
        [
            &self.conv1.weights,
            &self.conv1.bias,
            &self.conv2.weights,
            &self.conv2.bias,
            &self.dense.weights,
            std::slice::from_ref(&self.dense.bias),
        ]
    }

    pub fn slices_mut(&mut self) -> [&mut [T]; 6] {
        [
            &mut self.conv1.weights,
            &mut self.conv1.bias,
            &mut self.conv2.weights,
            &mut self.conv2.bias,
            &mut self.dense.weights,
            std::slice::from_mut(&mut self.dense.bias),
        ]
    }

    fn add_assign(&mut self, other: &Gradients<T>) {
        for (dst, src) in self.slices_mut().into_iter().zip(other.slices()) {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.slices().iter().all(|s| s.iter().all(|v| v.is_finite()))
    }
}

impl<T: Scalar> CnnModel<T> {
    /// All weights and biases zero, target scale 1.
    pub fn zeros(config: ModelConfig) -> Result<Self, NeuralError> {
        let g = Gradients::zeros(&config)?;
        Ok(CnnModel {
            config,
            conv1: g.conv1,
            conv2: g.conv2,
            dense: g.dense,
            target_scale: 1.0,
        })
    }

    /// Weights uniform in ±√(6 / fan_in) drawn from `seed` (conv1, conv2,
    /// dense, in storage order); biases zero.
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self, NeuralError> {
        let len = config.flattened_len()?;
        let mut rng = rng_from_seed(seed);
        let conv1 = ConvLayer::init(config.filter1, 1, config.channels1, &mut rng);
        let conv2 = ConvLayer::init(config.filter2, config.channels1, config.channels2, &mut rng);
        let dense = DenseLayer::init(len, &mut rng);
        Ok(CnnModel {
            config,
            conv1,
            conv2,
            dense,
            target_scale: 1.0,
        })
    }

    /// Checks that every layer matches the configured shape chain.
    pub fn validate(&self) -> Result<(), NeuralError> {
        let expected = Gradients::<T>::zeros(&self.config)?;
        let ok = |a: &ConvLayer<T>, b: &ConvLayer<T>| {
            a.filter == b.filter
                && a.in_channels == b.in_channels
                && a.out_channels == b.out_channels
                && a.weights.len() == b.weights.len()
                && a.bias.len() == b.bias.len()
        };
        if !ok(&self.conv1, &expected.conv1)
            || !ok(&self.conv2, &expected.conv2)
            || self.dense.weights.len() != expected.dense.weights.len()
        {
            return Err(NeuralError::ShapeMismatch(
                "layer shapes do not follow the configured shape chain".into(),
            ));
        }
        if !(self.target_scale > 0.0 && self.target_scale.is_finite()) {
            return Err(NeuralError::InvalidConfig(format!(
                "target scale must be positive, got {}",
                self.target_scale
            )));
        }
        Ok(())
    }

    pub fn parameter_count(&self) -> usize {
        self.as_gradients_view().iter().map(|s| s.len()).sum()
    }

    pub(crate) fn as_gradients_view(&self) -> [&[T]; 6] {
        [
            &self.conv1.weights,
            &self.conv1.bias,
            &self.conv2.weights,
            &self.conv2.bias,
            &self.dense.weights,
            std::slice::from_ref(&self.dense.bias),
        ]
    }

    pub(crate) fn params_mut(&mut self) -> [&mut [T]; 6] {
        [
            &mut self.conv1.weights,
            &mut self.conv1.bias,
            &mut self.conv2.weights,
            &mut self.conv2.bias,
            &mut self.dense.weights,
            std::slice::from_mut(&mut self.dense.bias),
        ]
    }

    fn check_input(&self, x: &Tensor3<T>) -> Result<(), NeuralError> {
        let n = self.config.input_dim;
        if x.shape() != (n, n, 1) {
            return Err(NeuralError::ShapeMismatch(format!(
                "model expects a {n}×{n}×1 input, got {:?}",
                x.shape()
            )));
        }
        x.ensure_finite("input")
    }

    pub(crate) fn trace(&self, x: &Tensor3<T>) -> Result<Trace<T>, NeuralError> {
        self.check_input(x)?;
        let z1 = self.conv1.pre_activation(x);
        let mut a1 = z1.clone();
        relu_in_place(&mut a1);
        a1.ensure_finite("conv1")?;
        let z2 = self.conv2.pre_activation(&a1);
        let mut a2 = z2.clone();
        relu_in_place(&mut a2);
        a2.ensure_finite("conv2")?;
        let z3 = self.dense.pre_activation(&a2)?;
        if !z3.is_finite() {
            return Err(NeuralError::NonFinite("dense"));
        }
        let out = if self.config.linear_output || z3 > T::zero() {
            z3
        } else {
            T::zero()
        };
        Ok(Trace {
            z1,
            a1,
            z2,
            a2,
            z3,
            out,
        })
    }

    /// Raw network output, in units of `target_scale`.
    pub fn forward_normalized(&self, x: &Tensor3<T>) -> Result<T, NeuralError> {
        self.trace(x).map(|t| t.out)
    }

    /// Predicted count for an input tensor.
    pub fn forward_tensor(&self, x: &Tensor3<T>) -> Result<f64, NeuralError> {
        Ok(self.forward_normalized(x)?.to_f64() * self.target_scale)
    }

    /// Predicted count for a padded adjacency matrix.
    pub fn forward(&self, input: &PaddedMatrix) -> Result<f64, NeuralError> {
        self.forward_tensor(&Tensor3::from_padded(input))
    }

    /// Gradient of `weight · (output − target)²` for one sample.
    fn sample_gradient(&self, x: &Tensor3<T>, target: T, weight: T) -> Result<(T, Gradients<T>), NeuralError> {
        let tr = self.trace(x)?;
        let diff = tr.out - target;
        let mut g = Gradients::zeros(&self.config)?;
        let mut d_out = (T::one() + T::one()) * diff * weight;
        if !self.config.linear_output && !(tr.z3 > T::zero()) {
            d_out = T::zero();
        }
        if d_out == T::zero() {
            return Ok((diff * diff * weight, g));
        }
        g.dense.bias = d_out;
        let mut dz2 = Tensor3::zeros(tr.a2.height(), tr.a2.width(), tr.a2.channels());
        for (((gw, &a), &w), (dz, &z)) in g
            .dense
            .weights
            .iter_mut()
            .zip(tr.a2.data())
            .zip(&self.dense.weights)
            .zip(dz2.data_mut().iter_mut().zip(tr.z2.data()))
        {
            *gw = d_out * a;
            *dz = if z > T::zero() { d_out * w } else { T::zero() };
        }
        let mut da1 = Tensor3::zeros(tr.a1.height(), tr.a1.width(), tr.a1.channels());
        self.conv2.backward(&tr.a1, &dz2, &mut g.conv2, Some(&mut da1));
        for (d, &z) in da1.data_mut().iter_mut().zip(tr.z1.data()) {
            if !(z > T::zero()) {
                *d = T::zero();
            }
        }
        self.conv1.backward(x, &da1, &mut g.conv1, None);
        Ok((diff * diff * weight, g))
    }

    /// Mean squared error over the batch (in normalized units) and its
    /// gradient with respect to every parameter. ReLU has subgradient 0 at 0.
    ///
    /// Per-sample gradients may be computed in parallel; they are summed in
    /// batch order, so the result does not depend on the thread count.
    pub fn backward(&self, batch: &[(&Tensor3<T>, T)]) -> Result<(T, Gradients<T>), NeuralError> {
        if batch.is_empty() {
            return Err(NeuralError::EmptyBatch);
        }
        let weight = T::one() / T::from_f64(batch.len() as f64);
        let parts: Vec<(T, Gradients<T>)> = batch
            .par_iter()
            .map(|&(x, y)| self.sample_gradient(x, y, weight))
            .collect::<Result<_, _>>()?;
        let mut iter = parts.into_iter();
        let (mut loss, mut total) = iter.next().expect("non-empty batch");
        for (l, g) in iter {
            loss += l;
            total.add_assign(&g);
        }
        if !total.is_finite() || !loss.is_finite() {
            return Err(NeuralError::NonFiniteGradient);
        }
        Ok((loss, total))
    }
}

/// Mean of squared differences.
pub fn mse_loss(preds: &[f64], targets: &[f64]) -> Result<f64, NeuralError> {
    if preds.len() != targets.len() {
        return Err(NeuralError::LengthMismatch {
            left: preds.len(),
            right: targets.len(),
        });
    }
    if preds.is_empty() {
        return Err(NeuralError::EmptyBatch);
    }
    Ok(preds.iter().zip(targets).map(|(p, t)| (p - t).powi(2)).sum::<f64>() / preds.len() as f64)
}
