use serde::{Deserialize, Serialize};

use super::{CnnModel, Gradients, NeuralError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam optimizer state: first and second moment estimates plus step count.
#[derive(Debug, Clone)]
pub struct Adam<T> {
    pub config: AdamConfig,
    m: Gradients<T>,
    v: Gradients<T>,
    t: u64,
}

impl<T: Scalar> Adam<T> {
    pub fn new(model: &CnnModel<T>, config: AdamConfig) -> Result<Self, NeuralError> {
        Ok(Adam {
            config,
            m: Gradients::zeros(&model.config)?,
            v: Gradients::zeros(&model.config)?,
            t: 0,
        })
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    /// One Adam update. Fails without touching the model if any gradient is
    /// non-finite.
    pub fn step(&mut self, model: &mut CnnModel<T>, grads: &Gradients<T>) -> Result<(), NeuralError> {
        if !grads.is_finite() {
            return Err(NeuralError::NonFiniteGradient);
        }
        self.t += 1;
        let c = self.config;
        let t = self.t as i32;
        let b1 = T::from_f64(c.beta1);
        let b2 = T::from_f64(c.beta2);
        let one_b1 = T::from_f64(1.0 - c.beta1);
        let one_b2 = T::from_f64(1.0 - c.beta2);
        let corr1 = T::from_f64(1.0 / (1.0 - c.beta1.powi(t)));
        let corr2 = T::from_f64(1.0 / (1.0 - c.beta2.powi(t)));
        let lr = T::from_f64(c.learning_rate);
        let eps = T::from_f64(c.epsilon);
        let params = model.params_mut();
        let ms = self.m.slices_mut();
        let vs = self.v.slices_mut();
        for (((p, g), m), v) in params.into_iter().zip(grads.slices()).zip(ms).zip(vs) {
            for (((p, &g), m), v) in p.iter_mut().zip(g).zip(m.iter_mut()).zip(v.iter_mut()) {
                *m = b1 * *m + one_b1 * g;
                *v = b2 * *v + one_b2 * g * g;
                let m_hat = *m * corr1;
                let v_hat = *v * corr2;
                *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
            }
        }
        Ok(())
    }
}
