use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{relative_error, HarnessError, MetricsReport, TrainConfig};
use crate::graph::{pad_to, GraphDataset, Sample, Split};
use crate::neural::{Adam, CnnModel, ModelConfig, NeuralError, Tensor3};
use crate::rng::{derive_indexed, rng_from_seed};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean squared error over the epoch's batches, in normalized units.
    pub train_loss: f64,
    pub val_loss: Option<f64>,
    pub val_e: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose parameters were kept.
    pub best_epoch: usize,
    pub stopped_early: bool,
    pub target_scale: f64,
}

impl TrainHistory {
    /// `epoch,train_loss,val_e,val_loss` rows.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("epoch,train_loss,val_e,val_loss\n");
        for r in &self.epochs {
            out += &format!("{},{},{},{}\n", r.epoch, r.train_loss, opt(r.val_e), opt(r.val_loss));
        }
        out
    }
}

pub(crate) fn tensors(samples: &[&Sample], pad_dim: usize) -> Result<Vec<Tensor3<f32>>, HarnessError> {
    samples
        .par_iter()
        .map(|s| Ok(Tensor3::from_padded(&pad_to(&s.graph, pad_dim)?)))
        .collect()
}

fn labels(samples: &[&Sample]) -> Result<Vec<f64>, HarnessError> {
    samples
        .iter()
        .map(|s| s.label.ok_or_else(|| HarnessError::MissingLabel(s.id.clone())))
        .collect()
}

/// Predictions for every sample, in order.
pub fn predict(model: &CnnModel<f32>, samples: &[&Sample], pad_dim: usize) -> Result<Vec<f64>, HarnessError> {
    samples
        .par_iter()
        .map(|s| Ok(model.forward(&pad_to(&s.graph, pad_dim)?)?))
        .collect()
}

/// Relative error of the model on one split.
pub fn evaluate(model: &CnnModel<f32>, ds: &GraphDataset, split: Split) -> Result<MetricsReport, HarnessError> {
    let samples: Vec<&Sample> = ds.split(split).collect();
    if samples.is_empty() {
        return Err(HarnessError::EmptySplit(split));
    }
    let preds = predict(model, &samples, ds.pad_dim)?;
    Ok(relative_error(&preds, &labels(&samples)?)?)
}

fn diverged(epoch: usize) -> impl Fn(NeuralError) -> HarnessError {
    move |e| match e {
        NeuralError::NonFiniteGradient | NeuralError::NonFinite(_) => HarnessError::DivergedLoss { epoch },
        other => HarnessError::Neural(other),
    }
}

/// Trains a fresh model on the train split with minibatch Adam.
///
/// Targets are divided by the mean training label (stored in the model as
/// `target_scale`). Convolution weights use the model's seeded init; the dense
/// layer starts with zero weights and its bias at the scaled mean label. When
/// a validation split exists, training stops after `patience` epochs without a
/// lower validation relative error and the best epoch's parameters are
/// returned.
pub fn train(
    ds: &GraphDataset,
    model_cfg: &ModelConfig,
    cfg: &TrainConfig,
    init_seed: u64,
    shuffle_seed: u64,
) -> Result<(CnnModel<f32>, TrainHistory), HarnessError> {
    let train: Vec<&Sample> = ds.split(Split::Train).collect();
    if train.is_empty() {
        return Err(HarnessError::EmptySplit(Split::Train));
    }
    if cfg.batch_size == 0 {
        return Err(HarnessError::InvalidConfig("batch size must be positive".into()));
    }
    let val: Vec<&Sample> = ds.split(Split::Validation).collect();
    let model_cfg = ModelConfig {
        input_dim: ds.pad_dim,
        ..model_cfg.clone()
    };
    let mut model = CnnModel::<f32>::new(model_cfg, init_seed)?;
    let train_labels = labels(&train)?;
    let mean = train_labels.iter().sum::<f64>() / train_labels.len() as f64;
    model.target_scale = if cfg.normalize_targets && mean > 0.0 { mean } else { 1.0 };
    // Start as the constant mean predictor: no sample begins on the dead side
    // of the output ReLU, and the random dense weights would otherwise add
    // sample noise that fitting can only remove inside the span of the
    // training set.
    model.dense.weights.fill(0.0);
    model.dense.bias = (mean / model.target_scale) as f32;
    let targets: Vec<f32> = train_labels.iter().map(|&y| (y / model.target_scale) as f32).collect();
    let xs = tensors(&train, ds.pad_dim)?;
    let val_labels = labels(&val)?;
    let val_xs = tensors(&val, ds.pad_dim)?;

    let mut opt = Adam::new(&model, cfg.optimizer)?;
    let mut history = TrainHistory {
        epochs: Vec::new(),
        best_epoch: 0,
        stopped_early: false,
        target_scale: model.target_scale,
    };
    let mut best: Option<(f64, CnnModel<f32>)> = None;
    let mut since_best = 0;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng_from_seed(derive_indexed(shuffle_seed, "epoch", epoch as u64)));
        let mut loss_sum = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<(&Tensor3<f32>, f32)> = chunk.iter().map(|&i| (&xs[i], targets[i])).collect();
            let (loss, grads) = model.backward(&batch).map_err(diverged(epoch))?;
            opt.step(&mut model, &grads).map_err(diverged(epoch))?;
            loss_sum += loss as f64 * chunk.len() as f64;
        }
        let train_loss = loss_sum / xs.len() as f64;
        if !train_loss.is_finite() {
            return Err(HarnessError::DivergedLoss { epoch });
        }
        let (val_loss, val_e) = if val.is_empty() {
            (None, None)
        } else {
            let preds: Vec<f64> = val_xs
                .par_iter()
                .map(|x| model.forward_tensor(x))
                .collect::<Result<_, _>>()
                .map_err(diverged(epoch))?;
            let loss = preds
                .iter()
                .zip(&val_labels)
                .map(|(p, y)| ((p - y) / model.target_scale).powi(2))
                .sum::<f64>()
                / preds.len() as f64;
            (Some(loss), Some(relative_error(&preds, &val_labels)?.e))
        };
        log::info!(
            "epoch {epoch}: train_loss {train_loss:.6} val_e {}",
            val_e.map(|e| format!("{e:.4}")).unwrap_or_else(|| "-".into())
        );
        history.epochs.push(EpochRecord {
            epoch,
            train_loss,
            val_loss,
            val_e,
        });
        match val_e {
            Some(e) if best.as_ref().is_none_or(|(b, _)| e < *b) => {
                best = Some((e, model.clone()));
                history.best_epoch = epoch;
                since_best = 0;
            }
            Some(_) => {
                since_best += 1;
                if since_best >= cfg.patience {
                    history.stopped_early = true;
                    break;
                }
            }
            None => history.best_epoch = epoch,
        }
    }
    if let Some((_, m)) = best {
        model = m;
    }
    Ok((model, history))
}
