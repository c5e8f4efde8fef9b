use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};
use crate::rng::rng_from_seed;

/// Erdős–Rényi G(n, p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// Random geometric graph in the unit cube `[0,1]^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RggConfig {
    pub n: usize,
    pub r: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub seed: u64,
}

fn default_dim() -> usize {
    3
}

impl ErConfig {
    pub fn validate(&self) -> Result<(), GraphError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(GraphError::InvalidConfig(format!(
                "edge probability {} outside [0, 1]",
                self.p
            )));
        }
        Ok(())
    }
}

impl RggConfig {
    pub fn validate(&self) -> Result<(), GraphError> {
        if !(self.r >= 0.0) {
            return Err(GraphError::InvalidConfig(format!("negative radius {}", self.r)));
        }
        if self.dim != 2 && self.dim != 3 {
            return Err(GraphError::InvalidConfig(format!(
                "dimension {} not in {{2, 3}}",
                self.dim
            )));
        }
        Ok(())
    }
}

/// Each pair `(u, v)`, `u < v`, visited in lexicographic order, is an edge
/// with probability `p`.
pub fn gen_er(cfg: &ErConfig) -> Result<Graph, GraphError> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut edges = Vec::new();
    for u in 0..cfg.n {
        for v in u + 1..cfg.n {
            if rng.random_bool(cfg.p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(cfg.n, edges)
}

/// Nodes are placed uniformly in the unit cube (coordinates drawn node by
/// node); `u` and `v` are joined iff their Euclidean distance is at most `r`.
pub fn gen_rgg(cfg: &RggConfig) -> Result<Graph, GraphError> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let points: Vec<[f64; 3]> = (0..cfg.n)
        .map(|_| {
            let mut p = [0.0; 3];
            for c in p.iter_mut().take(cfg.dim) {
                *c = rng.random::<f64>();
            }
            p
        })
        .collect();
    let r2 = cfg.r * cfg.r;
    let mut edges = Vec::new();
    for u in 0..cfg.n {
        for v in u + 1..cfg.n {
            let d2: f64 = (0..cfg.dim).map(|c| (points[u][c] - points[v][c]).powi(2)).sum();
            if d2 <= r2 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(cfg.n, edges)
}
