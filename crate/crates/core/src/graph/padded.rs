use rand::Rng as _;

use super::{Graph, GraphError};
use crate::rng::rng_from_seed;

/// A graph's adjacency embedded in the top-left corner of an `N×N` zero
/// matrix. Entries are 0/1; the matrix stays symmetric with a zero diagonal
/// under every operation defined here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedMatrix {
    dim: usize,
    original_node_count: usize,
    values: Vec<u8>,
}

/// Zero-pads the adjacency of `g` to `dim × dim`.
pub fn pad_to(g: &Graph, dim: usize) -> Result<PaddedMatrix, GraphError> {
    let n = g.node_count();
    if dim < n {
        return Err(GraphError::DimensionTooSmall { dim, nodes: n });
    }
    let mut values = vec![0u8; dim * dim];
    for (u, v) in g.edges() {
        values[u * dim + v] = 1;
        values[v * dim + u] = 1;
    }
    Ok(PaddedMatrix {
        dim,
        original_node_count: n,
        values,
    })
}

impl PaddedMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Node count of the graph this matrix was padded from.
    pub fn original_node_count(&self) -> usize {
        self.original_node_count
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.values[i * self.dim + j]
    }

    /// Row-major 0/1 entries.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Exchanges rows `i`, `j` and then columns `i`, `j`.
    pub fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let d = self.dim;
        for c in 0..d {
            self.values.swap(i * d + c, j * d + c);
        }
        for r in 0..d {
            self.values.swap(r * d + i, r * d + j);
        }
    }

    /// The graph on all `dim` nodes (padding rows become isolated nodes).
    pub fn to_graph(&self) -> Graph {
        let d = self.dim;
        let edges = (0..d)
            .flat_map(|u| (u + 1..d).map(move |v| (u, v)))
            .filter(|&(u, v)| self.values[u * d + v] != 0);
        Graph::from_edges(d, edges).expect("padded matrix indices are in range")
    }
}

/// Produces `m` augmented copies. Copy `t+1` is copy `t` with one random
/// transposition applied: `i ≠ j` drawn uniformly from `[0, N)` (the padded
/// range, not only occupied rows). Matrices with `N < 2` are returned as `m`
/// plain copies.
pub fn swap_augment(mx: &PaddedMatrix, m: usize, seed: u64) -> Vec<PaddedMatrix> {
    let mut rng = rng_from_seed(seed);
    let mut current = mx.clone();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        if mx.dim >= 2 {
            let i = rng.random_range(0..mx.dim);
            let mut j = rng.random_range(0..mx.dim - 1);
            if j >= i {
                j += 1;
            }
            current.swap(i, j);
        }
        out.push(current.clone());
    }
    out
}
