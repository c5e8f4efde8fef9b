//! Matching a sampler's budget to a target relative error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate_edge_full_pass, estimate_edge_sampling, estimate_mcmc, EstimateResult, SampleError};
use crate::exact::GraphletPattern;
use crate::graph::Graph;
use crate::harness::relative_error;
use crate::ops::OpCounter;
use crate::rng::derive_indexed;

/// Matched-error band: achieved error within ±20% (relative) of the target.
pub const MATCH_TOLERANCE: f64 = 0.2;
const BISECTION_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    /// Edges sampled uniformly with replacement; budget = edges sampled.
    #[serde(rename = "edge", alias = "edge_sampling")]
    EdgeSampling,
    /// Every edge once; budget is ignored.
    #[serde(rename = "edge_full", alias = "edge_full_pass")]
    EdgeFullPass,
    /// Metropolis–Hastings graphlet walk; budget = walk transitions.
    #[serde(rename = "mcmc")]
    Mcmc,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::EdgeSampling => "edge",
            Estimator::EdgeFullPass => "edge_full",
            Estimator::Mcmc => "mcmc",
        }
    }

    pub fn run(
        self,
        g: &Graph,
        p: GraphletPattern,
        budget: u64,
        seed: u64,
        ops: &mut OpCounter,
    ) -> Result<EstimateResult, SampleError> {
        match self {
            Estimator::EdgeSampling => estimate_edge_sampling(g, p, budget, seed, ops),
            Estimator::EdgeFullPass => estimate_edge_full_pass(g, p, ops),
            Estimator::Mcmc => estimate_mcmc(g, p, budget, seed, ops),
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge" | "edge_sampling" => Ok(Estimator::EdgeSampling),
            "edge_full" | "full" => Ok(Estimator::EdgeFullPass),
            "mcmc" | "guise" => Ok(Estimator::Mcmc),
            other => Err(format!("unknown method {other:?} (expected edge, edge_full or mcmc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuneStatus {
    /// Error landed inside the band.
    Matched,
    /// Even the smallest tried budget beat the band's lower edge, or the band
    /// was skipped over and bisection could not land in it.
    BelowTarget,
    /// The cap was reached with the error still above the band.
    BudgetCapReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetProbe {
    pub budget: u64,
    pub error: f64,
    pub mean_ops: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneOutcome {
    pub budget: u64,
    pub achieved_error: f64,
    /// Mean comparisons per graph at the chosen budget.
    pub mean_ops: f64,
    pub status: TuneStatus,
    /// Every budget evaluated, in order.
    pub probes: Vec<BudgetProbe>,
}

fn probe(
    g_set: &[(&Graph, f64)],
    p: GraphletPattern,
    estimator: Estimator,
    budget: u64,
    seed: u64,
) -> Result<BudgetProbe, SampleError> {
    let runs: Vec<EstimateResult> = g_set
        .par_iter()
        .enumerate()
        .map(|(i, (g, _))| {
            estimator.run(g, p, budget, derive_indexed(seed, "tune", i as u64), &mut OpCounter::new())
        })
        .collect::<Result<_, _>>()?;
    let preds: Vec<f64> = runs.iter().map(|r| r.estimate).collect();
    let truths: Vec<f64> = g_set.iter().map(|(_, t)| *t).collect();
    let report = relative_error(&preds, &truths)
        .map_err(|e| SampleError::InvalidTuning(e.to_string()))?;
    Ok(BudgetProbe {
        budget,
        error: report.e,
        mean_ops: runs.iter().map(|r| r.ops as f64).sum::<f64>() / runs.len() as f64,
    })
}

/// Doubles the budget from 1 until the relative error over `g_set` falls
/// within ±20% of `target_rel_error`, or `cap` is reached. When a doubling
/// step jumps over the band, the gap is bisected.
///
/// Each graph uses the same derived seed at every budget, so successive
/// probes extend the same random streams.
pub fn tune_budget_to_error(
    g_set: &[(&Graph, f64)],
    p: GraphletPattern,
    target_rel_error: f64,
    estimator: Estimator,
    cap: u64,
    seed: u64,
) -> Result<TuneOutcome, SampleError> {
    if !(target_rel_error > 0.0) {
        return Err(SampleError::InvalidTuning(format!(
            "target error must be positive, got {target_rel_error}"
        )));
    }
    if cap == 0 {
        return Err(SampleError::ZeroBudget);
    }
    if g_set.is_empty() {
        return Err(SampleError::InvalidTuning("empty graph set".into()));
    }
    let upper = target_rel_error * (1.0 + MATCH_TOLERANCE);
    let lower = target_rel_error * (1.0 - MATCH_TOLERANCE);
    let mut probes = Vec::new();
    let finish = |probes: Vec<BudgetProbe>, chosen: &BudgetProbe, status| TuneOutcome {
        budget: chosen.budget,
        achieved_error: chosen.error,
        mean_ops: chosen.mean_ops,
        status,
        probes,
    };

    let mut budget = 1u64;
    let mut previous: Option<BudgetProbe> = None;
    loop {
        let pr = probe(g_set, p, estimator, budget, seed)?;
        probes.push(pr.clone());
        if pr.error <= upper && pr.error >= lower {
            return Ok(finish(probes, &pr, TuneStatus::Matched));
        }
        if pr.error < lower {
            let Some(mut lo) = previous else {
                return Ok(finish(probes, &pr, TuneStatus::BelowTarget));
            };
            let mut hi = pr;
            for _ in 0..BISECTION_STEPS {
                let mid = lo.budget + (hi.budget - lo.budget) / 2;
                if mid == lo.budget {
                    break;
                }
                let m = probe(g_set, p, estimator, mid, seed)?;
                probes.push(m.clone());
                if m.error <= upper && m.error >= lower {
                    return Ok(finish(probes, &m, TuneStatus::Matched));
                }
                if m.error > upper {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            return Ok(finish(probes, &hi, TuneStatus::BelowTarget));
        }
        if budget >= cap {
            return Ok(finish(probes, &pr, TuneStatus::BudgetCapReached));
        }
        previous = Some(pr);
        budget = (budget * 2).min(cap);
    }
}
