use rand::Rng as _;

use super::{NeuralError, Scalar, Tensor3};
use crate::rng::Rng;

/// Valid (unpadded, stride 1) convolution followed by ReLU.
///
/// Weights have shape (H, H, C_in, C_out), row-major, so filter `t` is the
/// strided slice `weights[.., .., .., t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvLayer<T> {
    pub filter: usize,
    pub in_channels: usize,
    pub out_channels: usize,
    pub weights: Vec<T>,
    pub bias: Vec<T>,
}

/// Fully connected layer from the flattened feature map to one output.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<T> {
    pub weights: Vec<T>,
    pub bias: T,
}

#[inline(always)]
fn relu<T: Scalar>(x: T) -> T {
    if x > T::zero() {
        x
    } else {
        T::zero()
    }
}

/// Uniform in ±√(6 / fan_in).
fn fan_in_uniform<T: Scalar>(count: usize, fan_in: usize, rng: &mut Rng) -> Vec<T> {
    let bound = (6.0 / fan_in as f64).sqrt();
    (0..count)
        .map(|_| T::from_f64(rng.random_range(-bound..=bound)))
        .collect()
}

impl<T: Scalar> ConvLayer<T> {
    pub fn zeros(filter: usize, in_channels: usize, out_channels: usize) -> Self {
        ConvLayer {
            filter,
            in_channels,
            out_channels,
            weights: vec![T::zero(); filter * filter * in_channels * out_channels],
            bias: vec![T::zero(); out_channels],
        }
    }

    pub(crate) fn init(filter: usize, in_channels: usize, out_channels: usize, rng: &mut Rng) -> Self {
        let fan_in = filter * filter * in_channels;
        ConvLayer {
            weights: fan_in_uniform(fan_in * out_channels, fan_in, rng),
            ..Self::zeros(filter, in_channels, out_channels)
        }
    }

    pub fn output_side(&self, input_side: usize) -> usize {
        input_side + 1 - self.filter
    }

    pub(crate) fn check_input(&self, x: &Tensor3<T>) -> Result<(), NeuralError> {
        let (h, w, c) = x.shape();
        if c != self.in_channels || h != w || h < self.filter {
            return Err(NeuralError::ShapeMismatch(format!(
                "conv layer (H={}, C_in={}) got input ({h}, {w}, {c})",
                self.filter, self.in_channels
            )));
        }
        Ok(())
    }

    /// Pre-activations `W_t · x[i..i+H, j..j+H, :] + b_t`.
    pub(crate) fn pre_activation(&self, x: &Tensor3<T>) -> Tensor3<T> {
        match self.out_channels {
            1 => self.pre_activation_fixed::<1>(x),
            2 => self.pre_activation_fixed::<2>(x),
            4 => self.pre_activation_fixed::<4>(x),
            8 => self.pre_activation_fixed::<8>(x),
            16 => self.pre_activation_fixed::<16>(x),
            32 => self.pre_activation_fixed::<32>(x),
            _ => self.pre_activation_any(x),
        }
    }

    fn pre_activation_fixed<const CO: usize>(&self, x: &Tensor3<T>) -> Tensor3<T> {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: AVX2 support was just checked.
            return unsafe { self.pre_activation_avx2::<CO>(x) };
        }
        self.pre_activation_kernel::<CO>(x)
    }

    /// Wider vectors only; no FMA, so results match the baseline build bit
    /// for bit.
    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    fn pre_activation_avx2<const CO: usize>(&self, x: &Tensor3<T>) -> Tensor3<T> {
        self.pre_activation_kernel::<CO>(x)
    }

    /// Same as `pre_activation_any` with the channel count known at compile
    /// time, so the accumulator lives in registers.
    #[inline(always)]
    fn pre_activation_kernel<const CO: usize>(&self, x: &Tensor3<T>) -> Tensor3<T> {
        let n = x.height();
        let (h, cin) = (self.filter, self.in_channels);
        let side = n + 1 - h;
        let span = h * cin;
        let xd = x.data();
        let bias: [T; CO] = self.bias[..].try_into().expect("bias length");
        let skip_zeros = cin == 1;
        let mut out = Tensor3::zeros(side, side, CO);
        let od = out.data_mut();
        for i in 0..side {
            for j in 0..side {
                let mut acc = bias;
                for di in 0..h {
                    let row = &xd[((i + di) * n + j) * cin..][..span];
                    let wblk = &self.weights[di * span * CO..][..span * CO];
                    for (&xv, wr) in row.iter().zip(wblk.chunks_exact(CO)) {
                        if skip_zeros && xv == T::zero() {
                            continue;
                        }
                        for (a, &w) in acc.iter_mut().zip(wr) {
                            *a += xv * w;
                        }
                    }
                }
                od[(i * side + j) * CO..][..CO].copy_from_slice(&acc);
            }
        }
        out
    }

    fn pre_activation_any(&self, x: &Tensor3<T>) -> Tensor3<T> {
        let n = x.height();
        let (h, cin, cout) = (self.filter, self.in_channels, self.out_channels);
        let side = n + 1 - h;
        let span = h * cin;
        let block = span * cout;
        let xd = x.data();
        let mut out = Tensor3::zeros(side, side, cout);
        let od = out.data_mut();
        for i in 0..side {
            for j in 0..side {
                let acc = &mut od[(i * side + j) * cout..][..cout];
                acc.copy_from_slice(&self.bias);
                for di in 0..h {
                    let row = &xd[((i + di) * n + j) * cin..][..span];
                    let wblk = &self.weights[di * block..][..block];
                    for (r, &xv) in row.iter().enumerate() {
                        if xv == T::zero() {
                            continue;
                        }
                        let wr = &wblk[r * cout..][..cout];
                        for (a, &w) in acc.iter_mut().zip(wr) {
                            *a += xv * w;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn forward(&self, x: &Tensor3<T>) -> Result<Tensor3<T>, NeuralError> {
        self.check_input(x)?;
        let mut out = self.pre_activation(x);
        out.data_mut().iter_mut().for_each(|v| *v = relu(*v));
        Ok(out)
    }

    /// Accumulates parameter gradients for upstream gradient `dz` (w.r.t. the
    /// pre-activations) into `grad`, and the input gradient into `dx` when
    /// given.
    pub(crate) fn backward(
        &self,
        x: &Tensor3<T>,
        dz: &Tensor3<T>,
        grad: &mut ConvLayer<T>,
        dx: Option<&mut Tensor3<T>>,
    ) {
        match self.out_channels {
            1 => self.backward_fixed::<1>(x, dz, grad, dx),
            2 => self.backward_fixed::<2>(x, dz, grad, dx),
            4 => self.backward_fixed::<4>(x, dz, grad, dx),
            8 => self.backward_fixed::<8>(x, dz, grad, dx),
            16 => self.backward_fixed::<16>(x, dz, grad, dx),
            32 => self.backward_fixed::<32>(x, dz, grad, dx),
            _ => self.backward_any(x, dz, grad, dx),
        }
    }

    fn backward_fixed<const CO: usize>(
        &self,
        x: &Tensor3<T>,
        dz: &Tensor3<T>,
        grad: &mut ConvLayer<T>,
        dx: Option<&mut Tensor3<T>>,
    ) {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: AVX2 support was just checked.
            return unsafe { self.backward_avx2::<CO>(x, dz, grad, dx) };
        }
        self.backward_kernel::<CO>(x, dz, grad, dx)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    fn backward_avx2<const CO: usize>(
        &self,
        x: &Tensor3<T>,
        dz: &Tensor3<T>,
        grad: &mut ConvLayer<T>,
        dx: Option<&mut Tensor3<T>>,
    ) {
        self.backward_kernel::<CO>(x, dz, grad, dx)
    }

    #[inline(always)]
    fn backward_kernel<const CO: usize>(
        &self,
        x: &Tensor3<T>,
        dz: &Tensor3<T>,
        grad: &mut ConvLayer<T>,
        mut dx: Option<&mut Tensor3<T>>,
    ) {
        let n = x.height();
        let (h, cin) = (self.filter, self.in_channels);
        let side = dz.height();
        let span = h * cin;
        let xd = x.data();
        let dzd = dz.data();
        let mut bias_grad = [T::zero(); CO];
        let skip_zeros = cin == 1;
        for i in 0..side {
            for j in 0..side {
                let d: [T; CO] = dzd[(i * side + j) * CO..][..CO].try_into().expect("channel slice");
                if d.iter().all(|&v| v == T::zero()) {
                    continue;
                }
                for (b, &dv) in bias_grad.iter_mut().zip(&d) {
                    *b += dv;
                }
                for di in 0..h {
                    let offset = ((i + di) * n + j) * cin;
                    let row = &xd[offset..][..span];
                    let gblk = &mut grad.weights[di * span * CO..][..span * CO];
                    for (&xv, gr) in row.iter().zip(gblk.chunks_exact_mut(CO)) {
                        if skip_zeros && xv == T::zero() {
                            continue;
                        }
                        for (g, &dv) in gr.iter_mut().zip(&d) {
                            *g += xv * dv;
                        }
                    }
                    if let Some(dx) = dx.as_deref_mut() {
                        let wblk = &self.weights[di * span * CO..][..span * CO];
                        let dxrow = &mut dx.data_mut()[offset..][..span];
                        for (g, wr) in dxrow.iter_mut().zip(wblk.chunks_exact(CO)) {
                            let mut s = T::zero();
                            for (&w, &dv) in wr.iter().zip(&d) {
                                s += w * dv;
                            }
                            *g += s;
                        }
                    }
                }
            }
        }
        for (b, v) in grad.bias.iter_mut().zip(bias_grad) {
            *b += v;
        }
    }

    fn backward_any(
        &self,
        x: &Tensor3<T>,
        dz: &Tensor3<T>,
        grad: &mut ConvLayer<T>,
        mut dx: Option<&mut Tensor3<T>>,
    ) {
        let n = x.height();
        let (h, cin, cout) = (self.filter, self.in_channels, self.out_channels);
        let side = dz.height();
        let span = h * cin;
        let block = span * cout;
        let xd = x.data();
        let dzd = dz.data();
        for i in 0..side {
            for j in 0..side {
                let d = &dzd[(i * side + j) * cout..][..cout];
                if d.iter().all(|&v| v == T::zero()) {
                    continue;
                }
                for (b, &dv) in grad.bias.iter_mut().zip(d) {
                    *b += dv;
                }
                for di in 0..h {
                    let offset = ((i + di) * n + j) * cin;
                    let row = &xd[offset..][..span];
                    let gblk = &mut grad.weights[di * block..][..block];
                    for (r, &xv) in row.iter().enumerate() {
                        if xv == T::zero() {
                            continue;
                        }
                        for (g, &dv) in gblk[r * cout..][..cout].iter_mut().zip(d) {
                            *g += xv * dv;
                        }
                    }
                    if let Some(dx) = dx.as_deref_mut() {
                        let wblk = &self.weights[di * block..][..block];
                        let dxrow = &mut dx.data_mut()[offset..][..span];
                        for (r, g) in dxrow.iter_mut().enumerate() {
                            let wr = &wblk[r * cout..][..cout];
                            let mut s = T::zero();
                            for (&w, &dv) in wr.iter().zip(d) {
                                s += w * dv;
                            }
                            *g += s;
                        }
                    }
                }
            }
        }
    }
}

impl<T: Scalar> DenseLayer<T> {
    pub fn zeros(len: usize) -> Self {
        DenseLayer {
            weights: vec![T::zero(); len],
            bias: T::zero(),
        }
    }

    pub(crate) fn init(len: usize, rng: &mut Rng) -> Self {
        DenseLayer {
            weights: fan_in_uniform(len, len, rng),
            bias: T::zero(),
        }
    }

    /// `flatten(x)ᵀ · W + b` with flatten order height → width → channel,
    /// which is the tensor's storage order.
    pub(crate) fn pre_activation(&self, x: &Tensor3<T>) -> Result<T, NeuralError> {
        if x.data().len() != self.weights.len() {
            return Err(NeuralError::ShapeMismatch(format!(
                "dense layer expects {} inputs, got {}",
                self.weights.len(),
                x.data().len()
            )));
        }
        let mut acc = T::zero();
        for (&a, &w) in x.data().iter().zip(&self.weights) {
            acc += a * w;
        }
        Ok(acc + self.bias)
    }

    /// `ReLU(flatten(x)ᵀ · W + b)`.
    pub fn forward(&self, x: &Tensor3<T>) -> Result<T, NeuralError> {
        self.pre_activation(x).map(relu)
    }
}
