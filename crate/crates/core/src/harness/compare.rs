use serde::{Deserialize, Serialize};

use super::train::predict;
use super::{relative_error, CompareConfig, HarnessError};
use crate::exact::GraphletPattern;
use crate::graph::{Graph, GraphDataset, Sample, Split};
use crate::neural::{flops, CnnModel};
use crate::sample::{tune_budget_to_error, Estimator, TuneStatus};
use crate::FLOPS_CONVENTION;

pub const COMPARISON_NOTE: &str = "Direction-only comparison. CNN cost is forward-pass FLOPs per graph; \
sampler cost is counted comparisons (adjacency tests, membership, size and pattern checks) per graph. \
Absolute magnitudes depend on these implementations and are not comparable to published figures.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: String,
    pub error: f64,
    /// Operations per graph: FLOPs for the CNN, comparisons for samplers.
    pub ops: f64,
    /// `ops` summed over the graphs the row was measured on.
    pub total_ops: f64,
    pub graphs: usize,
    pub budget: Option<u64>,
    pub status: Option<TuneStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub dataset: String,
    pub pattern: GraphletPattern,
    pub split: Split,
    /// The CNN's relative error, which every sampler is tuned to match.
    pub target_error: f64,
    pub flops_convention: String,
    pub note: String,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn row(&self, method: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    /// `method,error,ops,budget,total_ops,graphs,status` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,error,ops,budget,total_ops,graphs,status\n");
        for r in &self.rows {
            let budget = r.budget.map(|b| b.to_string()).unwrap_or_default();
            let status = r
                .status
                .map(|s| serde_json::to_value(s).unwrap().as_str().unwrap_or_default().to_string())
                .unwrap_or_default();
            out += &format!(
                "{},{},{},{},{},{},{}\n",
                r.method, r.error, r.ops, budget, r.total_ops, r.graphs, status
            );
        }
        out
    }
}

/// Evaluates the CNN on `split`, then tunes each sampler's budget until its
/// relative error matches the CNN's (±20%) and records its mean cost.
pub fn compare(
    model: &CnnModel<f32>,
    ds: &GraphDataset,
    split: Split,
    pattern: GraphletPattern,
    cfg: &CompareConfig,
    dataset: &str,
    seed: u64,
) -> Result<ComparisonReport, HarnessError> {
    let samples: Vec<&Sample> = ds.split(split).collect();
    if samples.is_empty() {
        return Err(HarnessError::EmptySplit(split));
    }
    let truths: Vec<f64> = samples
        .iter()
        .map(|s| s.label.ok_or_else(|| HarnessError::MissingLabel(s.id.clone())))
        .collect::<Result<_, _>>()?;
    let preds = predict(model, &samples, ds.pad_dim)?;
    let cnn = relative_error(&preds, &truths)?;
    let per_graph = flops(&model.config)?.total as f64;
    let mut rows = vec![ComparisonRow {
        method: "cnn".into(),
        error: cnn.e,
        ops: per_graph,
        total_ops: per_graph * samples.len() as f64,
        graphs: samples.len(),
        budget: None,
        status: None,
    }];

    let take = cfg.tune_graphs.unwrap_or(samples.len()).min(samples.len());
    let set: Vec<(&Graph, f64)> = samples[..take].iter().map(|s| &s.graph).zip(truths.iter().copied()).collect();
    for &method in &cfg.methods {
        log::info!("tuning {} to relative error {:.4} on {take} graphs", method.name(), cnn.e);
        let out = tune_budget_to_error(&set, pattern, cnn.e, method, cfg.cap, seed)?;
        rows.push(ComparisonRow {
            method: method.name().into(),
            error: out.achieved_error,
            ops: out.mean_ops,
            total_ops: out.mean_ops * take as f64,
            graphs: take,
            budget: (method != Estimator::EdgeFullPass).then_some(out.budget),
            status: Some(out.status),
        });
    }
    Ok(ComparisonReport {
        dataset: dataset.into(),
        pattern,
        split,
        target_error: cnn.e,
        flops_convention: FLOPS_CONVENTION.into(),
        note: COMPARISON_NOTE.into(),
        rows,
    })
}
