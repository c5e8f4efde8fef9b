use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("{preds} predictions for {truths} ground-truth values")]
    LengthMismatch { preds: usize, truths: usize },
    #[error("no samples to evaluate")]
    EmptySplit,
    #[error("mean ground-truth count is zero; relative error is undefined")]
    ZeroMeanTruth,
}

/// Relative error of a set of count estimates, `e = mae / μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mae: f64,
    pub mu: f64,
    pub e: f64,
    /// `(truth c_i, estimate c'_i)` per sample.
    pub pairs: Vec<(f64, f64)>,
    pub s: usize,
}

/// `mae = Σ|c'_i − c_i| / S`, `μ = Σ c_i / S`, `e = mae / μ`.
pub fn relative_error(preds: &[f64], truths: &[f64]) -> Result<MetricsReport, MetricsError> {
    if preds.len() != truths.len() {
        return Err(MetricsError::LengthMismatch {
            preds: preds.len(),
            truths: truths.len(),
        });
    }
    if preds.is_empty() {
        return Err(MetricsError::EmptySplit);
    }
    let s = preds.len();
    let mae = preds.iter().zip(truths).map(|(p, t)| (p - t).abs()).sum::<f64>() / s as f64;
    let mu = truths.iter().sum::<f64>() / s as f64;
    if mu <= 0.0 {
        return Err(MetricsError::ZeroMeanTruth);
    }
    Ok(MetricsReport {
        mae,
        mu,
        e: mae / mu,
        pairs: truths.iter().copied().zip(preds.iter().copied()).collect(),
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formula() {
        let r = relative_error(&[11.0, 19.0], &[10.0, 20.0]).unwrap();
        assert_eq!(r.mae, 1.0);
        assert_eq!(r.mu, 15.0);
        assert!((r.e - 1.0 / 15.0).abs() < 1e-15);
        assert_eq!(r.s, 2);
        assert_eq!(relative_error(&[3.0, 4.0], &[3.0, 4.0]).unwrap().e, 0.0);
    }

    #[test]
    fn error_paths() {
        assert_eq!(relative_error(&[], &[]), Err(MetricsError::EmptySplit));
        assert_eq!(
            relative_error(&[1.0], &[1.0, 2.0]),
            Err(MetricsError::LengthMismatch { preds: 1, truths: 2 })
        );
        assert_eq!(relative_error(&[1.0], &[0.0]), Err(MetricsError::ZeroMeanTruth));
    }

    proptest! {
        #[test]
        fn invariant_under_common_scaling(
            data in prop::collection::vec((0.0f64..1e4, 0.5f64..1e4), 1..40),
            scale in 1e-3f64..1e3,
        ) {
            let (preds, truths): (Vec<f64>, Vec<f64>) = data.into_iter().unzip();
            let base = relative_error(&preds, &truths).unwrap();
            let sp: Vec<f64> = preds.iter().map(|x| x * scale).collect();
            let st: Vec<f64> = truths.iter().map(|x| x * scale).collect();
            let scaled = relative_error(&sp, &st).unwrap();
            prop_assert!((base.e - scaled.e).abs() <= 1e-9 * (1.0 + base.e));
            prop_assert_eq!(base.e, base.mae / base.mu);
        }
    }
}
