//! Graphlet catalog and canonical classification of small graphs.
//!
//! A k-node graph (k ≤ 5) is encoded as a bit string over its node pairs
//! `(i, j)`, `i < j`, in lexicographic order (bit 0 = (0,1), bit 1 = (0,2), ...).
//! The canonical code is the minimum encoding over all k! relabelings.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphletPattern {
    /// Closed triangle, K3.
    Triangle,
    /// Induced 2-path.
    OpenTriangle,
    FourPath,
    ThreeStar,
    FourCycle,
    TailedTriangle,
    /// K4 minus one edge.
    Diamond,
    FourClique,
    FivePath,
    /// Aggregate bucket for the twenty connected 5-node classes other than
    /// the 5-path.
    OtherFive,
}

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("induced subgraph is disconnected")]
    Disconnected,
    #[error("no graphlet catalog for {0}-node graphs (supported: 3 to 5)")]
    UnknownPattern(usize),
    #[error("adjacency is not a symmetric zero-diagonal square matrix")]
    InvalidAdjacency,
}

#[derive(Debug, Error, PartialEq)]
#[error("unknown graphlet pattern {0:?}")]
pub struct ParsePatternError(String);

use GraphletPattern::*;

impl GraphletPattern {
    pub const ALL: [GraphletPattern; 10] = [
        Triangle,
        OpenTriangle,
        FourPath,
        ThreeStar,
        FourCycle,
        TailedTriangle,
        Diamond,
        FourClique,
        FivePath,
        OtherFive,
    ];

    /// Patterns of `k` nodes, in catalog order.
    pub fn of_size(k: usize) -> impl Iterator<Item = GraphletPattern> {
        Self::ALL.into_iter().filter(move |p| p.k() == k)
    }

    pub fn k(self) -> usize {
        match self {
            Triangle | OpenTriangle => 3,
            FourPath | ThreeStar | FourCycle | TailedTriangle | Diamond | FourClique => 4,
            FivePath | OtherFive => 5,
        }
    }

    /// A labeled representative. `None` for the aggregate bucket.
    pub fn representative_edges(self) -> Option<&'static [(usize, usize)]> {
        Some(match self {
            Triangle => &[(0, 1), (1, 2), (0, 2)],
            OpenTriangle => &[(0, 1), (1, 2)],
            FourPath => &[(0, 1), (1, 2), (2, 3)],
            ThreeStar => &[(0, 1), (0, 2), (0, 3)],
            FourCycle => &[(0, 1), (1, 2), (2, 3), (0, 3)],
            TailedTriangle => &[(0, 1), (1, 2), (0, 2), (2, 3)],
            Diamond => &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)],
            FourClique => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            FivePath => &[(0, 1), (1, 2), (2, 3), (3, 4)],
            OtherFive => return None,
        })
    }

    /// Edge count q of the pattern; `None` for the aggregate bucket.
    pub fn edge_count(self) -> Option<usize> {
        self.representative_edges().map(<[_]>::len)
    }

    /// Canonical code of the pattern; `None` for the aggregate bucket.
    pub fn canonical_code(self) -> Option<u16> {
        self.representative_edges()
            .map(|edges| canonical_code(self.k(), encode(self.k(), edges)))
    }

    pub fn name(self) -> &'static str {
        match self {
            Triangle => "Triangle",
            OpenTriangle => "OpenTriangle",
            FourPath => "FourPath",
            ThreeStar => "ThreeStar",
            FourCycle => "FourCycle",
            TailedTriangle => "TailedTriangle",
            Diamond => "Diamond",
            FourClique => "FourClique",
            FivePath => "FivePath",
            OtherFive => "OtherFive",
        }
    }
}

impl std::fmt::Display for GraphletPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphletPattern {
    type Err = ParsePatternError;

    /// Accepts the catalog names case-insensitively, plus a few common
    /// aliases (`4-clique`, `4-path`, `3-star`, `5-path`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let found = match key.as_str() {
            "triangle" | "closedtriangle" | "k3" => Triangle,
            "opentriangle" | "wedge" | "2path" => OpenTriangle,
            "fourpath" | "4path" | "p4" => FourPath,
            "threestar" | "3star" | "star" => ThreeStar,
            "fourcycle" | "4cycle" | "c4" => FourCycle,
            "tailedtriangle" => TailedTriangle,
            "diamond" => Diamond,
            "fourclique" | "4clique" | "k4" | "clique" => FourClique,
            "fivepath" | "5path" | "p5" => FivePath,
            "otherfive" => OtherFive,
            _ => return Err(ParsePatternError(s.to_string())),
        };
        Ok(found)
    }
}

#[inline]
pub(crate) fn pair_bit(k: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // Pairs before row i: sum_{r<i} (k-1-r).
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Encodes an edge list on nodes `0..k`.
pub fn encode(k: usize, edges: &[(usize, usize)]) -> u16 {
    edges.iter().fold(0u16, |code, &(i, j)| code | 1 << pair_bit(k, i, j))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Minimum encoding over all relabelings of a k-node graph.
pub fn canonical_code(k: usize, code: u16) -> u16 {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|&(i, j)| code >> pair_bit(k, i, j) & 1 == 1)
        .collect();
    permutations(k)
        .iter()
        .map(|perm| {
            pairs
                .iter()
                .fold(0u16, |c, &(i, j)| c | 1 << pair_bit(k, perm[i], perm[j]))
        })
        .min()
        .unwrap_or(0)
}

fn code_is_connected(k: usize, code: u16) -> bool {
    let mut reached = 1u32;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for j in 0..k {
            if j != i && reached >> j & 1 == 0 && code >> pair_bit(k, i, j) & 1 == 1 {
                reached |= 1 << j;
                frontier.push(j);
            }
        }
    }
    reached.count_ones() as usize == k
}

fn classify_code_slow(k: usize, code: u16) -> Result<GraphletPattern, ClassifyError> {
    if !(3..=5).contains(&k) {
        return Err(ClassifyError::UnknownPattern(k));
    }
    if !code_is_connected(k, code) {
        return Err(ClassifyError::Disconnected);
    }
    let canon = canonical_code(k, code);
    Ok(GraphletPattern::of_size(k)
        .find(|p| p.canonical_code() == Some(canon))
        .unwrap_or(OtherFive))
}

/// Raw-code → class tables for k = 3, 4, 5, built once from the canonical
/// path. `None` marks disconnected graphs.
static CODE_TABLES: LazyLock<[Vec<Option<GraphletPattern>>; 3]> = LazyLock::new(|| {
    std::array::from_fn(|idx| {
        let k = idx + 3;
        let bits = k * (k - 1) / 2;
        // Canonical forms repeat heavily, so memoize them.
        let mut memo: HashMap<u16, Option<GraphletPattern>> = HashMap::new();
        (0..1u32 << bits)
            .map(|code| {
                let code = code as u16;
                let canon = canonical_code(k, code);
                *memo
                    .entry(canon)
                    .or_insert_with(|| classify_code_slow(k, canon).ok())
            })
            .collect()
    })
});

/// Table lookup of a raw pair encoding. `k` must be 3, 4 or 5.
#[inline]
pub fn classify_code(k: usize, code: u16) -> Option<GraphletPattern> {
    CODE_TABLES[k - 3][code as usize]
}

fn validate(adj: &[Vec<bool>]) -> Result<u16, ClassifyError> {
    let k = adj.len();
    if adj.iter().any(|row| row.len() != k) {
        return Err(ClassifyError::InvalidAdjacency);
    }
    if !(3..=5).contains(&k) {
        return Err(ClassifyError::UnknownPattern(k));
    }
    let mut code = 0u16;
    for i in 0..k {
        if adj[i][i] {
            return Err(ClassifyError::InvalidAdjacency);
        }
        for j in i + 1..k {
            if adj[i][j] != adj[j][i] {
                return Err(ClassifyError::InvalidAdjacency);
            }
            if adj[i][j] {
                code |= 1 << pair_bit(k, i, j);
            }
        }
    }
    Ok(code)
}

/// Classifies a small connected graph by its canonical code.
pub fn classify(adj: &[Vec<bool>]) -> Result<GraphletPattern, ClassifyError> {
    let code = validate(adj)?;
    classify_code_slow(adj.len(), code)
}

/// Classification by edge count and sorted degree sequence, valid for k ≤ 4.
/// These two invariants separate all 3- and 4-node connected classes.
pub fn classify_by_degrees(adj: &[Vec<bool>]) -> Result<GraphletPattern, ClassifyError> {
    let code = validate(adj)?;
    let k = adj.len();
    if k > 4 {
        return Err(ClassifyError::UnknownPattern(k));
    }
    if !code_is_connected(k, code) {
        return Err(ClassifyError::Disconnected);
    }
    let mut degrees: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&a| a).count()).collect();
    degrees.sort_unstable();
    let edges = degrees.iter().sum::<usize>() / 2;
    Ok(match (k, edges, degrees.as_slice()) {
        (3, 3, _) => Triangle,
        (3, 2, _) => OpenTriangle,
        (4, 3, [1, 1, 1, 3]) => ThreeStar,
        (4, 3, _) => FourPath,
        (4, 4, [2, 2, 2, 2]) => FourCycle,
        (4, 4, _) => TailedTriangle,
        (4, 5, _) => Diamond,
        (4, 6, _) => FourClique,
        _ => unreachable!("connected {k}-node graph with {edges} edges"),
    })
}
