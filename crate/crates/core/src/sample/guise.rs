//! Metropolis–Hastings random walk over connected induced subgraphs of 3 to
//! 5 nodes ("embeddings").
//!
//! Two embeddings are neighbors when one is obtained from the other by
//! swapping one member for an outside node, adding one node, or removing one
//! node, with the result connected and of size 3 to 5. The relation is
//! symmetric; proposing a uniform neighbor and accepting with
//! `min(1, |N(current)| / |N(proposed)|)` makes the uniform distribution over
//! embeddings (of the start node's component) stationary.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{EstimateResult, SampleError};
use crate::exact::{
    classify_nodes, open_triangle_count_from, triangle_count_counted, GraphletPattern,
};
use crate::graph::Graph;
use crate::ops::OpCounter;
use crate::rng::{rng_from_seed, Rng};

const MIN_SIZE: usize = 3;
const MAX_SIZE: usize = 5;

/// Graphlet frequency distribution: share of post-burn-in walk steps spent
/// in each pattern class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Gfd(BTreeMap<GraphletPattern, f64>);

impl Gfd {
    pub fn from_visits(visits: &BTreeMap<GraphletPattern, u64>) -> Self {
        let total: u64 = visits.values().sum();
        if total == 0 {
            return Gfd::default();
        }
        Gfd(visits
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&p, &c)| (p, c as f64 / total as f64))
            .collect())
    }

    pub fn from_frequencies(freqs: impl IntoIterator<Item = (GraphletPattern, f64)>) -> Self {
        Gfd(freqs.into_iter().collect())
    }

    pub fn get(&self, p: GraphletPattern) -> f64 {
        self.0.get(&p).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GraphletPattern, f64)> + '_ {
        self.0.iter().map(|(&p, &f)| (p, f))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// L1 distance over the union of both supports.
    pub fn l1_distance(&self, other: &Gfd) -> f64 {
        GraphletPattern::ALL
            .iter()
            .map(|&p| (self.get(p) - other.get(p)).abs())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Embedding {
    nodes: [usize; MAX_SIZE],
    len: u8,
}

impl Embedding {
    fn from_slice(nodes: &[usize]) -> Self {
        let mut e = Embedding {
            nodes: [usize::MAX; MAX_SIZE],
            len: nodes.len() as u8,
        };
        e.nodes[..nodes.len()].copy_from_slice(nodes);
        e.nodes[..nodes.len()].sort_unstable();
        e
    }

    fn as_slice(&self) -> &[usize] {
        &self.nodes[..self.len as usize]
    }

    fn without(&self, idx: usize) -> ([usize; MAX_SIZE], usize) {
        let mut out = [usize::MAX; MAX_SIZE];
        let mut len = 0;
        for (i, &v) in self.as_slice().iter().enumerate() {
            if i != idx {
                out[len] = v;
                len += 1;
            }
        }
        (out, len)
    }

    fn plus(nodes: &[usize], y: usize) -> Self {
        let mut buf = [usize::MAX; MAX_SIZE];
        buf[..nodes.len()].copy_from_slice(nodes);
        buf[nodes.len()] = y;
        Embedding::from_slice(&buf[..nodes.len() + 1])
    }
}

fn connected(g: &Graph, nodes: &[usize], ops: &mut OpCounter) -> bool {
    let k = nodes.len();
    if k <= 1 {
        return true;
    }
    let mut reached = 1u32;
    let mut stack = [0usize; MAX_SIZE + 1];
    let mut top = 1;
    while top > 0 {
        top -= 1;
        let i = stack[top];
        for j in 0..k {
            if reached >> j & 1 == 0 {
                ops.tick();
                if g.has_edge(nodes[i], nodes[j]) {
                    reached |= 1 << j;
                    stack[top] = j;
                    top += 1;
                }
            }
        }
    }
    reached.count_ones() as usize == k
}

/// Scratch space for neighbor enumeration.
struct Scratch {
    in_set: Vec<u32>,
    in_boundary: Vec<u32>,
    epoch: u32,
    boundary: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            in_set: vec![0; n],
            in_boundary: vec![0; n],
            epoch: 0,
            boundary: Vec::new(),
        }
    }

    fn neighbors(&mut self, g: &Graph, s: &Embedding, out: &mut Vec<Embedding>, ops: &mut OpCounter) {
        out.clear();
        self.epoch += 1;
        let epoch = self.epoch;
        let members = s.as_slice();
        for &x in members {
            self.in_set[x] = epoch;
        }
        self.boundary.clear();
        for &x in members {
            for &y in g.neighbors(x) {
                ops.tick();
                if self.in_set[y] == epoch {
                    continue;
                }
                ops.tick();
                if self.in_boundary[y] != epoch {
                    self.in_boundary[y] = epoch;
                    self.boundary.push(y);
                }
            }
        }

        let len = members.len();
        if len < MAX_SIZE {
            for &y in &self.boundary {
                out.push(Embedding::plus(members, y));
            }
        }
        for idx in 0..len {
            let (rest, rest_len) = s.without(idx);
            let rest = &rest[..rest_len];
            let rest_connected = connected(g, rest, ops);
            if len > MIN_SIZE && rest_connected {
                out.push(Embedding::from_slice(rest));
            }
            for &y in &self.boundary {
                let joins = if rest_connected {
                    rest.iter().any(|&r| {
                        ops.tick();
                        g.has_edge(r, y)
                    })
                } else {
                    let mut buf = [0usize; MAX_SIZE];
                    buf[..rest_len].copy_from_slice(rest);
                    buf[rest_len] = y;
                    connected(g, &buf[..rest_len + 1], ops)
                };
                if joins {
                    out.push(Embedding::plus(rest, y));
                }
            }
        }
    }
}

/// A running walk. Exposed so callers can inspect visited embeddings.
pub struct GuiseWalk<'g> {
    g: &'g Graph,
    rng: Rng,
    current: Embedding,
    class: GraphletPattern,
    current_nbrs: Vec<Embedding>,
    proposal_nbrs: Vec<Embedding>,
    scratch: Scratch,
}

impl<'g> GuiseWalk<'g> {
    /// Starts at a random connected 3-node subgraph: a uniformly drawn node
    /// of degree ≥ 2 and two of its neighbors.
    pub fn new(g: &'g Graph, seed: u64, ops: &mut OpCounter) -> Result<Self, SampleError> {
        let mut rng = rng_from_seed(seed);
        let hubs: Vec<usize> = (0..g.node_count()).filter(|&v| g.degree(v) >= 2).collect();
        if hubs.is_empty() {
            return Err(SampleError::NoSeedGraphlet);
        }
        let v = hubs[rng.random_range(0..hubs.len())];
        let nb = g.neighbors(v);
        let a = rng.random_range(0..nb.len());
        let mut b = rng.random_range(0..nb.len() - 1);
        if b >= a {
            b += 1;
        }
        let current = Embedding::from_slice(&[v, nb[a], nb[b]]);
        let class = classify_nodes(g, current.as_slice(), ops).expect("seed is connected");
        let mut scratch = Scratch::new(g.node_count());
        let mut current_nbrs = Vec::new();
        scratch.neighbors(g, &current, &mut current_nbrs, ops);
        Ok(GuiseWalk {
            g,
            rng,
            current,
            class,
            current_nbrs,
            proposal_nbrs: Vec::new(),
            scratch,
        })
    }

    /// Sorted node set of the current embedding.
    pub fn current(&self) -> &[usize] {
        self.current.as_slice()
    }

    pub fn current_class(&self) -> GraphletPattern {
        self.class
    }

    /// One Metropolis–Hastings transition; returns whether the proposal was
    /// accepted. An embedding without neighbors stays put.
    pub fn step(&mut self, ops: &mut OpCounter) -> bool {
        if self.current_nbrs.is_empty() {
            return false;
        }
        let proposal = self.current_nbrs[self.rng.random_range(0..self.current_nbrs.len())];
        self.scratch
            .neighbors(self.g, &proposal, &mut self.proposal_nbrs, ops);
        let ratio = self.current_nbrs.len() as f64 / self.proposal_nbrs.len() as f64;
        let u: f64 = self.rng.random();
        ops.tick();
        if u < ratio {
            self.current = proposal;
            std::mem::swap(&mut self.current_nbrs, &mut self.proposal_nbrs);
            self.class = classify_nodes(self.g, self.current.as_slice(), ops)
                .expect("walk only visits connected embeddings");
            true
        } else {
            false
        }
    }
}

/// Runs `burn_in` discarded transitions, then `steps` recorded ones.
pub fn estimate_guise_gfd(
    g: &Graph,
    steps: u64,
    burn_in: u64,
    seed: u64,
    ops: &mut OpCounter,
) -> Result<Gfd, SampleError> {
    if steps == 0 {
        return Err(SampleError::ZeroBudget);
    }
    let mut walk = GuiseWalk::new(g, seed, ops)?;
    for _ in 0..burn_in {
        walk.step(ops);
    }
    let mut visits = BTreeMap::new();
    for _ in 0..steps {
        walk.step(ops);
        *visits.entry(walk.current_class()).or_insert(0u64) += 1;
    }
    Ok(Gfd::from_visits(&visits))
}

/// Turns frequencies into counts through one exactly known anchor count:
/// `estimate(p) = gfd[p] / gfd[anchor] · anchor_count`.
pub fn counts_from_gfd(
    gfd: &Gfd,
    anchor: GraphletPattern,
    anchor_count: u64,
) -> Result<BTreeMap<GraphletPattern, f64>, SampleError> {
    let anchor_freq = gfd.get(anchor);
    if anchor_freq <= 0.0 {
        return Err(SampleError::ZeroAnchorFrequency(anchor));
    }
    Ok(gfd
        .iter()
        .map(|(p, f)| {
            let value = if p == anchor {
                anchor_count as f64
            } else {
                f / anchor_freq * anchor_count as f64
            };
            (p, value)
        })
        .collect())
}

/// Count estimate for `p` from a walk of `budget` transitions, the first
/// tenth of which is burn-in. The anchor is whichever 3-node class has the
/// larger exact count (computed with the counted triangle scan). When the
/// walk never visits the anchor the estimate is 0.
pub fn estimate_mcmc(
    g: &Graph,
    p: GraphletPattern,
    budget: u64,
    seed: u64,
    ops: &mut OpCounter,
) -> Result<EstimateResult, SampleError> {
    if budget == 0 {
        return Err(SampleError::ZeroBudget);
    }
    let start = ops.comparisons();
    let burn_in = budget / 10;
    let gfd = estimate_guise_gfd(g, budget - burn_in, burn_in, seed, ops)?;
    let triangles = triangle_count_counted(g, ops);
    let open = open_triangle_count_from(g, triangles);
    let (anchor, anchor_count) = if open >= triangles {
        (GraphletPattern::OpenTriangle, open)
    } else {
        (GraphletPattern::Triangle, triangles)
    };
    let estimate = match counts_from_gfd(&gfd, anchor, anchor_count) {
        Ok(counts) => counts.get(&p).copied().unwrap_or(0.0),
        Err(SampleError::ZeroAnchorFrequency(_)) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(EstimateResult {
        estimate,
        ops: ops.comparisons() - start,
        budget,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_all, count_exact};
    use crate::graph::{gen_er, ErConfig};
    use std::collections::{BTreeSet, HashMap};
    use GraphletPattern::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    /// Exact neighbor sets by brute force over all node sets of size 3..=5.
    fn brute_neighbors(g: &Graph, s: &[usize]) -> BTreeSet<Vec<usize>> {
        let n = g.node_count();
        let set: BTreeSet<usize> = s.iter().copied().collect();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << n) {
            let t: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if t.len() < 3 || t.len() > 5 || !g.is_connected_subset(&t) {
                continue;
            }
            let tset: BTreeSet<usize> = t.iter().copied().collect();
            let sym = set.symmetric_difference(&tset).count();
            let neighbor = match t.len() as i64 - s.len() as i64 {
                0 => sym == 2,
                1 | -1 => sym == 1,
                _ => false,
            };
            if neighbor {
                out.insert(t);
            }
        }
        out
    }

    #[test]
    fn neighbor_enumeration_matches_brute_force() {
        let g = gen_er(&ErConfig { n: 9, p: 0.4, seed: 3 }).unwrap();
        let mut scratch = Scratch::new(9);
        let mut out = Vec::new();
        for size in 3..=5 {
            for s in crate::exact::enumerate_connected_induced(&g, size) {
                scratch.neighbors(&g, &Embedding::from_slice(&s), &mut out, &mut OpCounter::new());
                let found: Vec<Vec<usize>> = out.iter().map(|e| e.as_slice().to_vec()).collect();
                let set: BTreeSet<_> = found.iter().cloned().collect();
                assert_eq!(set.len(), found.len());
                assert_eq!(set, brute_neighbors(&g, &s), "{s:?}");
            }
        }
    }

    #[test]
    fn triangle_only() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let gfd = estimate_guise_gfd(&k3, 100, 10, 1, &mut OpCounter::new()).unwrap();
        assert_eq!(gfd, Gfd::from_frequencies([(Triangle, 1.0)]));
    }

    #[test]
    fn star_frequencies() {
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let gfd = estimate_guise_gfd(&star, 200_000, 1_000, 5, &mut OpCounter::new()).unwrap();
        let expected = Gfd::from_frequencies([(OpenTriangle, 0.75), (ThreeStar, 0.25)]);
        assert!(gfd.l1_distance(&expected) <= 0.05, "{gfd:?}");
    }

    #[test]
    fn no_seed_graphlet() {
        let matching = graph(4, &[(0, 1), (2, 3)]);
        assert!(matches!(
            estimate_guise_gfd(&matching, 10, 0, 0, &mut OpCounter::new()),
            Err(SampleError::NoSeedGraphlet)
        ));
    }

    #[test]
    fn uniform_over_small_state_space() {
        // House graph: a 4-cycle with a roof.
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]);
        let states: usize = (3..=5).map(|k| count_all(&g, k).total() as usize).sum();
        let mut walk = GuiseWalk::new(&g, 8, &mut OpCounter::new()).unwrap();
        let mut visits: HashMap<Vec<usize>, u64> = HashMap::new();
        let steps = 300_000;
        let mut ops = OpCounter::new();
        for _ in 0..steps {
            walk.step(&mut ops);
            *visits.entry(walk.current().to_vec()).or_default() += 1;
        }
        assert_eq!(visits.len(), states);
        let l1: f64 = visits
            .values()
            .map(|&c| (c as f64 / steps as f64 - 1.0 / states as f64).abs())
            .sum();
        assert!(l1 <= 0.02, "l1 {l1}");
    }

    #[test]
    fn anchor_conversion() {
        let gfd = Gfd::from_frequencies([(Triangle, 0.8), (FourClique, 0.2)]);
        let counts = counts_from_gfd(&gfd, Triangle, 4).unwrap();
        assert!((counts[&FourClique] - 1.0).abs() < 1e-12);
        assert_eq!(counts[&Triangle], 4.0);
        assert_eq!(
            counts_from_gfd(&gfd, OpenTriangle, 4),
            Err(SampleError::ZeroAnchorFrequency(OpenTriangle))
        );
    }

    #[test]
    fn gfd_matches_exact_distribution() {
        let g = gen_er(&ErConfig { n: 25, p: 0.3, seed: 6 }).unwrap();
        let mut exact = BTreeMap::new();
        for k in 3..=5 {
            for (p, c) in count_all(&g, k).iter() {
                exact.insert(p, c);
            }
        }
        let exact = Gfd::from_visits(&exact);
        let gfd = estimate_guise_gfd(&g, 200_000, 5_000, 2, &mut OpCounter::new()).unwrap();
        let d = gfd.l1_distance(&exact);
        assert!(d <= 0.05, "L1 {d}");
    }

    #[test]
    fn mcmc_count_estimate_via_anchor() {
        let g = gen_er(&ErConfig { n: 25, p: 0.3, seed: 6 }).unwrap();
        let exact = count_exact(&g, FourClique) as f64;
        let open = crate::exact::open_triangle_count_fast(&g);
        let runs = 30;
        let mean = (0..runs)
            .map(|seed| {
                let gfd = estimate_guise_gfd(&g, 20_000, 1_000, seed, &mut OpCounter::new()).unwrap();
                counts_from_gfd(&gfd, OpenTriangle, open).unwrap().get(&FourClique).copied().unwrap_or(0.0)
            })
            .sum::<f64>()
            / runs as f64;
        assert!((mean - exact).abs() <= 0.15 * exact, "mean {mean} exact {exact}");
    }

    #[test]
    fn deterministic_runs() {
        let g = gen_er(&ErConfig { n: 20, p: 0.3, seed: 1 }).unwrap();
        let a = estimate_mcmc(&g, TailedTriangle, 2_000, 4, &mut OpCounter::new()).unwrap();
        let b = estimate_mcmc(&g, TailedTriangle, 2_000, 4, &mut OpCounter::new()).unwrap();
        assert_eq!(a, b);
        assert!(a.ops > 0 && a.estimate >= 0.0);
        let c = estimate_mcmc(&g, TailedTriangle, 2_001, 4, &mut OpCounter::new()).unwrap();
        assert!(c.ops > a.ops);
    }
}
