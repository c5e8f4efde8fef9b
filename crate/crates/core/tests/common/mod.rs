//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use graphlet_cnn::neural::{CnnModel, Tensor3};
use graphlet_cnn::{Graph, GraphletPattern};

/// Counts every connected induced k-subset by brute force over all subsets,
/// classifying by edge count and sorted degree sequence.
pub fn brute_force_counts(g: &Graph, k: usize) -> BTreeMap<GraphletPattern, u64> {
    use GraphletPattern::*;
    let n = g.node_count();
    let mut counts = BTreeMap::new();
    if k > n {
        return counts;
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if connected(g, &subset) {
            let mut degrees: Vec<usize> = subset
                .iter()
                .map(|&u| subset.iter().filter(|&&v| g.has_edge(u, v)).count())
                .collect();
            degrees.sort_unstable();
            let edges = degrees.iter().sum::<usize>() / 2;
            let p = match (k, edges, degrees.as_slice()) {
                (3, 3, _) => Triangle,
                (3, 2, _) => OpenTriangle,
                (4, 3, [1, 1, 2, 2]) => FourPath,
                (4, 3, _) => ThreeStar,
                (4, 4, [2, 2, 2, 2]) => FourCycle,
                (4, 4, _) => TailedTriangle,
                (4, 5, _) => Diamond,
                (4, 6, _) => FourClique,
                (5, 4, [1, 1, 2, 2, 2]) => FivePath,
                (5, _, _) => OtherFive,
                _ => unreachable!("connected {k}-subset with {edges} edges"),
            };
            *counts.entry(p).or_insert(0) += 1;
        }
        // next combination in lexicographic order
        let mut i = k;
        while i > 0 && subset[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return counts;
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn connected(g: &Graph, nodes: &[usize]) -> bool {
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..nodes.len() {
            if !seen[b] && g.has_edge(nodes[a], nodes[b]) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Scalar re-implementation of the forward pass that tallies every
/// floating-point multiply and add it performs.
pub fn instrumented_forward(model: &CnnModel<f64>, x: &Tensor3<f64>) -> (f64, u64) {
    let mut tally = 0u64;
    let a1 = tallied_conv(x, &model.conv1, &mut tally);
    let a2 = tallied_conv(&a1, &model.conv2, &mut tally);
    let mut acc = 0.0;
    for i in 0..a2.height() {
        for j in 0..a2.width() {
            for t in 0..a2.channels() {
                let idx = (i * a2.width() + j) * a2.channels() + t;
                acc += a2.get(i, j, t) * model.dense.weights[idx];
                tally += 2;
            }
        }
    }
    acc += model.dense.bias;
    tally += 1;
    let out = if model.config.linear_output { acc } else { acc.max(0.0) };
    (out * model.target_scale, tally)
}

fn tallied_conv(
    x: &Tensor3<f64>,
    layer: &graphlet_cnn::neural::ConvLayer<f64>,
    tally: &mut u64,
) -> Tensor3<f64> {
    let (h, cin, cout) = (layer.filter, layer.in_channels, layer.out_channels);
    let side = x.height() + 1 - h;
    let mut out = Tensor3::zeros(side, side, cout);
    for i in 0..side {
        for j in 0..side {
            for t in 0..cout {
                let mut acc = 0.0;
                for di in 0..h {
                    for dj in 0..h {
                        for c in 0..cin {
                            let w = layer.weights[((di * h + dj) * cin + c) * cout + t];
                            acc += w * x.get(i + di, j + dj, c);
                            *tally += 2;
                        }
                    }
                }
                acc += layer.bias[t];
                *tally += 1;
                out.set(i, j, t, acc.max(0.0));
            }
        }
    }
    out
}

/// Mean squared error of the normalized outputs, computed without the
/// backward machinery.
pub fn batch_loss(model: &CnnModel<f64>, batch: &[(&Tensor3<f64>, f64)]) -> f64 {
    batch
        .iter()
        .map(|&(x, y)| (model.forward_normalized(x).unwrap() - y).powi(2))
        .sum::<f64>()
        / batch.len() as f64
}

pub fn param_mut(model: &mut CnnModel<f64>, group: usize, idx: usize) -> &mut f64 {
    match group {
        0 => &mut model.conv1.weights[idx],
        1 => &mut model.conv1.bias[idx],
        2 => &mut model.conv2.weights[idx],
        3 => &mut model.conv2.bias[idx],
        4 => &mut model.dense.weights[idx],
        _ => &mut model.dense.bias,
    }
}

pub fn group_len(model: &CnnModel<f64>, group: usize) -> usize {
    match group {
        0 => model.conv1.weights.len(),
        1 => model.conv1.bias.len(),
        2 => model.conv2.weights.len(),
        3 => model.conv2.bias.len(),
        4 => model.dense.weights.len(),
        _ => 1,
    }
}

/// Moves every bias off zero so that zero-padded regions do not sit exactly
/// on a ReLU kink, where one-sided differences disagree with the subgradient.
pub fn jitter_biases(model: &mut CnnModel<f64>, seed: u64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for b in model.conv1.bias.iter_mut().chain(model.conv2.bias.iter_mut()) {
        *b = rng.random_range(0.05..0.2) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
    model.dense.bias = 1.0;
}

/// Central-difference check of `backward` on `count` parameters drawn from
/// `groups`. Returns the largest relative error seen.
pub fn gradient_check(
    model: &CnnModel<f64>,
    batch: &[(&Tensor3<f64>, f64)],
    groups: &[usize],
    count: usize,
    seed: u64,
) -> f64 {
    use rand::{Rng, SeedableRng};
    let (_, grads) = model.backward(batch).unwrap();
    let analytic = grads.slices();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let group = groups[rng.random_range(0..groups.len())];
        let idx = rng.random_range(0..group_len(model, group));
        let mut probe = model.clone();
        let base = *param_mut(&mut probe, group, idx);
        *param_mut(&mut probe, group, idx) = base + h;
        let up = batch_loss(&probe, batch);
        *param_mut(&mut probe, group, idx) = base - h;
        let down = batch_loss(&probe, batch);
        let numeric = (up - down) / (2.0 * h);
        let a = analytic[group][idx];
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    worst
}
