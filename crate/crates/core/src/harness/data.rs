use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{DataSource, ExperimentConfig, HarnessError, SeedPlan};
use crate::exact::count_exact;
use crate::graph::{
    gen_er, gen_rgg, load_dataset, load_tu_dataset, pad_to, swap_augment, ErConfig, Graph, GraphDataset, RggConfig,
    Sample, Split,
};
use crate::rng::{derive_indexed, rng_from_seed};

/// Assigns 80/10/10 train/validation/test by seeded shuffle.
fn shuffled_splits(count: usize, seed: u64) -> Vec<Split> {
    let mut order: Vec<usize> = (0..count).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let train = (count as f64 * 0.8).round() as usize;
    let validation = (count as f64 * 0.1).round() as usize;
    let mut splits = vec![Split::Test; count];
    for (rank, &i) in order.iter().enumerate() {
        splits[i] = if rank < train {
            Split::Train
        } else if rank < train + validation {
            Split::Validation
        } else {
            Split::Test
        };
    }
    splits
}

fn generated(cfg: &ExperimentConfig, seeds: &SeedPlan) -> Result<Vec<(String, Graph, Split)>, HarnessError> {
    let s = cfg.splits;
    let plan = std::iter::repeat_n(Split::Train, s.train)
        .chain(std::iter::repeat_n(Split::Validation, s.validation))
        .chain(std::iter::repeat_n(Split::Test, s.test));
    plan.enumerate()
        .map(|(i, split)| {
            let seed = derive_indexed(seeds.data, "graph", i as u64);
            let g = match cfg.source {
                DataSource::Er { n, p } => gen_er(&ErConfig { n, p, seed })?,
                DataSource::Rgg { n, r, dim } => gen_rgg(&RggConfig { n, r, dim, seed })?,
                _ => unreachable!("generated() called for a loaded source"),
            };
            Ok((format!("g{i}"), g, split))
        })
        .collect()
}

fn loaded(cfg: &ExperimentConfig, seeds: &SeedPlan) -> Result<Vec<(String, Graph, Split)>, HarnessError> {
    let (ids, graphs, given): (Vec<String>, Vec<Graph>, Vec<Option<Split>>) = match &cfg.source {
        DataSource::Tu { path } => {
            let graphs = load_tu_dataset(path)?;
            let ids = (1..=graphs.len()).map(|i| format!("g{i}")).collect();
            let none = vec![None; graphs.len()];
            (ids, graphs, none)
        }
        DataSource::Jsonl { path } => {
            let ds = load_dataset(path)?;
            let mut ids = Vec::new();
            let mut graphs = Vec::new();
            let mut splits = Vec::new();
            for s in ds.samples {
                ids.push(s.id);
                graphs.push(s.graph);
                splits.push(s.split);
            }
            (ids, graphs, splits)
        }
        _ => unreachable!("loaded() called for a generated source"),
    };
    let splits: Vec<Split> = if !given.is_empty() && given.iter().all(Option::is_some) {
        given.into_iter().flatten().collect()
    } else {
        shuffled_splits(graphs.len(), seeds.split)
    };
    Ok(ids
        .into_iter()
        .zip(graphs)
        .zip(splits)
        .map(|((id, g), s)| (id, g, s))
        .collect())
}

/// Builds the labeled, split and (optionally) augmented dataset described by
/// `cfg`. Labels are exact counts; augmented copies are added to the
/// training split only.
pub fn build_labeled_dataset(cfg: &ExperimentConfig, seeds: &SeedPlan) -> Result<GraphDataset, HarnessError> {
    let items = if cfg.source.is_generated() {
        generated(cfg, seeds)?
    } else {
        loaded(cfg, seeds)?
    };
    let max_n = items.iter().map(|(_, g, _)| g.node_count()).max().unwrap_or(0);
    let pad_dim = match cfg.pad_dim {
        Some(d) if d < max_n => {
            return Err(HarnessError::InvalidConfig(format!(
                "pad dimension {d} is smaller than the largest graph ({max_n} nodes)"
            )))
        }
        Some(d) => d,
        None => max_n,
    };
    log::info!("labeling {} graphs ({})", items.len(), cfg.pattern);
    let labels: Vec<u64> = items.par_iter().map(|(_, g, _)| count_exact(g, cfg.pattern)).collect();

    let mut ds = GraphDataset::new(Some(cfg.pattern), pad_dim);
    for (i, ((id, g, split), label)) in items.into_iter().zip(labels).enumerate() {
        let augmented = if split == Split::Train && cfg.augment > 0 {
            let mx = pad_to(&g, pad_dim)?;
            swap_augment(&mx, cfg.augment, derive_indexed(seeds.augment, "augment", i as u64))
        } else {
            Vec::new()
        };
        ds.samples.push(Sample {
            id: id.clone(),
            graph: g,
            label: Some(label as f64),
            split: Some(split),
        });
        for (t, mx) in augmented.into_iter().enumerate() {
            ds.samples.push(Sample {
                id: format!("{id}#aug{}", t + 1),
                graph: mx.to_graph(),
                label: Some(label as f64),
                split: Some(Split::Train),
            });
        }
    }
    check_no_leak(&ds)?;
    Ok(ds)
}

/// Fails if a graph (or a copy of it) appears in the training split and in
/// validation or test.
pub fn check_no_leak(ds: &GraphDataset) -> Result<(), HarnessError> {
    let train: BTreeSet<&str> = ds.split(Split::Train).map(Sample::base_id).collect();
    for s in ds.split(Split::Validation).chain(ds.split(Split::Test)) {
        if train.contains(s.base_id()) {
            return Err(HarnessError::SplitLeak(s.id.clone()));
        }
    }
    Ok(())
}
