//! ESU enumeration of connected induced subgraphs.
//!
//! Every connected node set is grown from a seed by repeatedly adding a node
//! from the extension set. A node only enters the extension set when it is a
//! neighbor of the node just added and lies outside the closed neighborhood
//! of the current set, which makes each set reachable along exactly one path.
//! For whole-graph enumeration the seed is the smallest member, enforced by
//! only admitting nodes greater than the root.

use crate::graph::Graph;
use crate::ops::OpCounter;

/// Whether `u` lies in `sub` or is adjacent to a member of `sub`.
#[inline]
fn in_closed_neighborhood(g: &Graph, sub: &[usize], u: usize, ops: &mut OpCounter) -> bool {
    for &s in sub {
        ops.tick();
        if u == s {
            return true;
        }
        ops.tick();
        if g.has_edge(u, s) {
            return true;
        }
    }
    false
}

fn extend<F: FnMut(&[usize])>(
    g: &Graph,
    k: usize,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    root: Option<usize>,
    ops: &mut OpCounter,
    visit: &mut F,
) {
    ops.tick();
    if sub.len() + 1 == k {
        for &w in &ext {
            sub.push(w);
            visit(sub);
            sub.pop();
        }
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in g.neighbors(w) {
            if let Some(r) = root {
                ops.tick();
                if u <= r {
                    continue;
                }
            }
            if !in_closed_neighborhood(g, sub, u, ops) {
                next.push(u);
            }
        }
        sub.push(w);
        extend(g, k, sub, next, root, ops, visit);
        sub.pop();
    }
}

/// Calls `visit` once for every connected induced `k`-node subset of `g`.
/// Subsets are passed in discovery order, not sorted.
pub fn for_each_connected_induced<F: FnMut(&[usize])>(
    g: &Graph,
    k: usize,
    ops: &mut OpCounter,
    mut visit: F,
) {
    if k == 0 || k > g.node_count() {
        return;
    }
    let mut sub = Vec::with_capacity(k);
    for v in 0..g.node_count() {
        if k == 1 {
            visit(&[v]);
            continue;
        }
        let ext: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        sub.push(v);
        extend(g, k, &mut sub, ext, Some(v), ops, &mut visit);
        sub.pop();
    }
}

/// Calls `visit` once for every connected induced `k`-node superset of the
/// connected node set `seed`.
pub fn for_each_connected_superset<F: FnMut(&[usize])>(
    g: &Graph,
    seed: &[usize],
    k: usize,
    ops: &mut OpCounter,
    mut visit: F,
) {
    if k < seed.len() {
        return;
    }
    if k == seed.len() {
        visit(seed);
        return;
    }
    let mut ext = Vec::new();
    for (i, &s) in seed.iter().enumerate() {
        for &u in g.neighbors(s) {
            // Owned by the first seed member that reaches it.
            let mut seen = false;
            for &t in seed {
                ops.tick();
                if u == t {
                    seen = true;
                    break;
                }
            }
            if !seen {
                for &t in &seed[..i] {
                    ops.tick();
                    if g.has_edge(u, t) {
                        seen = true;
                        break;
                    }
                }
            }
            if !seen {
                ext.push(u);
            }
        }
    }
    let mut sub = seed.to_vec();
    extend(g, k, &mut sub, ext, None, ops, &mut visit);
}

/// Collects all connected induced `k`-subsets, each sorted ascending.
pub fn enumerate_connected_induced(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_connected_induced(g, k, &mut OpCounter::new(), |s| {
        let mut s = s.to_vec();
        s.sort_unstable();
        out.push(s);
    });
    out
}
