//! Undirected simple graphs and everything that produces or reshapes them.

mod dataset;
mod generate;
mod padded;
mod tu;

pub use dataset::{load_dataset, save_dataset, GraphDataset, Sample, Split};
pub use generate::{gen_er, gen_rgg, ErConfig, RggConfig};
pub use padded::{pad_to, swap_augment, PaddedMatrix};
pub use tu::load_tu_dataset;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("pad dimension {dim} is smaller than the graph's {nodes} nodes")]
    DimensionTooSmall { dim: usize, nodes: usize },
    #[error("invalid generator parameter: {0}")]
    InvalidConfig(String),
}

/// Errors raised while reading graph files.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("edge ({u}, {v}) at line {line} joins nodes of graphs {gu} and {gv}")]
    InconsistentIndicator {
        line: usize,
        u: usize,
        v: usize,
        gu: u64,
        gv: u64,
    },
    #[error("dataset schema version {found} is not supported (expected {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl DataError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        DataError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        DataError::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

/// Undirected graph without self-loops or parallel edges.
///
/// Adjacency is held twice: as a row-major bit matrix for O(1) membership
/// tests and as sorted neighbor lists for traversal.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from unordered pairs. Duplicate pairs (in either
    /// orientation) collapse into one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        g.finish();
        Ok(g)
    }

    /// Builds a graph from a dense symmetric boolean matrix given row by row.
    pub fn from_adjacency(rows: &[Vec<bool>]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut edges = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::InvalidConfig(format!(
                    "adjacency row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if row[i] {
                return Err(GraphError::SelfLoop(i));
            }
            for (j, &a) in row.iter().enumerate().skip(i + 1) {
                if a != rows[j][i] {
                    return Err(GraphError::InvalidConfig(format!(
                        "adjacency is not symmetric at ({i}, {j})"
                    )));
                }
                if a {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, edges)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::NodeOutOfRange { node: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Ok(());
        }
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.m += 1;
        Ok(())
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline(always)]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.bits[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Sorted neighbors of `u`.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            out.extend(self.adj[u].iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Dense boolean adjacency, row by row.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.has_edge(u, v)).collect())
            .collect()
    }

    /// Relabels node `u` as `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::InvalidConfig(format!(
                "permutation has length {}, graph has {} nodes",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(GraphError::InvalidConfig(
                    "not a permutation of the node set".into(),
                ));
            }
        }
        Graph::from_edges(self.n, self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Whether the subgraph induced by `nodes` is connected. Empty sets count
    /// as connected.
    pub fn is_connected_subset(&self, nodes: &[usize]) -> bool {
        if nodes.len() <= 1 {
            return true;
        }
        let mut reached = vec![false; nodes.len()];
        let mut stack = vec![0];
        reached[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for j in 0..nodes.len() {
                if !reached[j] && self.has_edge(nodes[i], nodes[j]) {
                    reached[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == nodes.len()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}
