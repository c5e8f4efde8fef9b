use rand::Rng as _;

use super::{EstimateResult, SampleError};
use crate::exact::{per_edge_count_counted, GraphletPattern};
use crate::graph::Graph;
use crate::ops::OpCounter;
use crate::rng::rng_from_seed;

fn pattern_edges(p: GraphletPattern) -> Result<f64, SampleError> {
    p.edge_count()
        .map(|q| q as f64)
        .ok_or(SampleError::AggregatePattern(p))
}

/// Unbiased count estimate from `s` edges drawn uniformly with replacement:
/// `(m / s) · Σ c_e / q`, where `c_e` counts induced occurrences of `p`
/// through the sampled edge and `q` is the pattern's edge count.
pub fn estimate_edge_sampling(
    g: &Graph,
    p: GraphletPattern,
    s: u64,
    seed: u64,
    ops: &mut OpCounter,
) -> Result<EstimateResult, SampleError> {
    let q = pattern_edges(p)?;
    if s == 0 {
        return Err(SampleError::ZeroBudget);
    }
    let edges = g.edges();
    if edges.is_empty() {
        return Err(SampleError::NoEdges);
    }
    let start = ops.comparisons();
    let mut rng = rng_from_seed(seed);
    let mut total = 0u64;
    for _ in 0..s {
        let e = edges[rng.random_range(0..edges.len())];
        total += per_edge_count_counted(g, e, p, ops).expect("sampled pair is an edge");
    }
    Ok(EstimateResult {
        estimate: edges.len() as f64 / s as f64 * total as f64 / q,
        ops: ops.comparisons() - start,
        budget: s,
        seed,
    })
}

/// Deterministic stratified pass visiting every edge once (`s = m`); the
/// estimate equals the exact count.
pub fn estimate_edge_full_pass(
    g: &Graph,
    p: GraphletPattern,
    ops: &mut OpCounter,
) -> Result<EstimateResult, SampleError> {
    let q = pattern_edges(p)?;
    let edges = g.edges();
    if edges.is_empty() {
        return Err(SampleError::NoEdges);
    }
    let start = ops.comparisons();
    let total: u64 = edges
        .iter()
        .map(|&e| per_edge_count_counted(g, e, p, ops).expect("listed pair is an edge"))
        .sum();
    Ok(EstimateResult {
        estimate: total as f64 / q,
        ops: ops.comparisons() - start,
        budget: edges.len() as u64,
        seed: 0,
    })
}
