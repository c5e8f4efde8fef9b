//! Exact induced graphlet counts.

mod esu;
mod pattern;

pub use esu::{enumerate_connected_induced, for_each_connected_induced, for_each_connected_superset};
pub use pattern::{
    canonical_code, classify, classify_by_degrees, classify_code, encode, ClassifyError,
    GraphletPattern, ParsePatternError,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::ops::OpCounter;
use pattern::pair_bit;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
}

/// Counts of every pattern of one size k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    k: usize,
    counts: BTreeMap<GraphletPattern, u64>,
}

impl CountVector {
    fn zeros(k: usize) -> Self {
        CountVector {
            k,
            counts: GraphletPattern::of_size(k).map(|p| (p, 0)).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, p: GraphletPattern) -> u64 {
        self.counts.get(&p).copied().unwrap_or(0)
    }

    /// Number of connected induced k-subsets.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GraphletPattern, u64)> + '_ {
        self.counts.iter().map(|(&p, &c)| (p, c))
    }
}

/// Pair encoding of the subgraph induced by `nodes`, one counted adjacency
/// test per pair.
#[inline]
fn induced_code(g: &Graph, nodes: &[usize], ops: &mut OpCounter) -> u16 {
    let k = nodes.len();
    let mut code = 0u16;
    for i in 0..k {
        for j in i + 1..k {
            ops.tick();
            if g.has_edge(nodes[i], nodes[j]) {
                code |= 1 << pair_bit(k, i, j);
            }
        }
    }
    code
}

/// Class of the connected subgraph induced by `nodes` (3 to 5 nodes).
pub(crate) fn classify_nodes(g: &Graph, nodes: &[usize], ops: &mut OpCounter) -> Option<GraphletPattern> {
    classify_code(nodes.len(), induced_code(g, nodes, ops))
}

/// All patterns of size `k` (3..=5) in one enumeration pass.
pub fn count_all(g: &Graph, k: usize) -> CountVector {
    assert!((3..=5).contains(&k), "graphlet size {k} outside 3..=5");
    let mut ops = OpCounter::new();
    let mut table = [0u64; GraphletPattern::ALL.len()];
    let mut class_ops = OpCounter::new();
    for_each_connected_induced(g, k, &mut ops, |nodes| {
        if let Some(p) = classify_nodes(g, nodes, &mut class_ops) {
            table[p as usize] += 1;
        }
    });
    let mut out = CountVector::zeros(k);
    for (p, c) in out.counts.iter_mut() {
        *c = table[*p as usize];
    }
    out
}

/// Number of induced occurrences of `p` in `g`.
pub fn count_exact(g: &Graph, p: GraphletPattern) -> u64 {
    count_exact_counted(g, p, &mut OpCounter::new())
}

pub fn count_exact_counted(g: &Graph, p: GraphletPattern, ops: &mut OpCounter) -> u64 {
    let mut count = 0;
    let mut class_ops = OpCounter::new();
    for_each_connected_induced(g, p.k(), ops, |nodes| {
        let class = classify_nodes(g, nodes, &mut class_ops);
        class_ops.tick();
        if class == Some(p) {
            count += 1;
        }
    });
    ops.add(class_ops.comparisons());
    count
}

/// Triangles by scanning neighbor pairs `v < w` of each node `u < v`.
pub fn triangle_count_fast(g: &Graph) -> u64 {
    triangle_count_counted(g, &mut OpCounter::new())
}

pub fn triangle_count_counted(g: &Graph, ops: &mut OpCounter) -> u64 {
    let mut t = 0;
    for u in 0..g.node_count() {
        let nb = g.neighbors(u);
        let start = nb.partition_point(|&v| v <= u);
        let higher = &nb[start..];
        for (i, &v) in higher.iter().enumerate() {
            for &w in &higher[i + 1..] {
                ops.tick();
                if g.has_edge(v, w) {
                    t += 1;
                }
            }
        }
    }
    t
}

/// Induced 2-paths: `Σ_v C(deg v, 2) − 3·triangles`.
pub fn open_triangle_count_fast(g: &Graph) -> u64 {
    open_triangle_count_from(g, triangle_count_fast(g))
}

pub(crate) fn open_triangle_count_from(g: &Graph, triangles: u64) -> u64 {
    let wedges: u64 = (0..g.node_count())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    wedges - 3 * triangles
}

/// Induced occurrences of `p` containing both endpoints of the edge `e`.
/// Summed over all edges this gives `q · count_exact(g, p)`.
pub fn per_edge_count(g: &Graph, e: (usize, usize), p: GraphletPattern) -> Result<u64, ExactError> {
    per_edge_count_counted(g, e, p, &mut OpCounter::new())
}

pub fn per_edge_count_counted(
    g: &Graph,
    (u, v): (usize, usize),
    p: GraphletPattern,
    ops: &mut OpCounter,
) -> Result<u64, ExactError> {
    if u >= g.node_count() || v >= g.node_count() || !g.has_edge(u, v) {
        return Err(ExactError::NotAnEdge(u, v));
    }
    let mut count = 0;
    let mut class_ops = OpCounter::new();
    for_each_connected_superset(g, &[u, v], p.k(), ops, |nodes| {
        let class = classify_nodes(g, nodes, &mut class_ops);
        class_ops.tick();
        if class == Some(p) {
            count += 1;
        }
    });
    ops.add(class_ops.comparisons());
    Ok(count)
}
