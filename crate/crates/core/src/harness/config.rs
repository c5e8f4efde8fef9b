use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::exact::GraphletPattern;
use crate::neural::{AdamConfig, ModelConfig};
use crate::rng::derive_seed;
use crate::sample::Estimator;

/// Where the graphs come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DataSource {
    Er {
        n: usize,
        p: f64,
    },
    Rgg {
        n: usize,
        r: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// Directory holding `*_A.txt` and `*_graph_indicator.txt`.
    Tu { path: PathBuf },
    /// A dataset file; existing split assignments are kept when every sample
    /// has one.
    Jsonl { path: PathBuf },
}

fn default_dim() -> usize {
    3
}

impl DataSource {
    pub fn is_generated(&self) -> bool {
        matches!(self, DataSource::Er { .. } | DataSource::Rgg { .. })
    }
}

/// Split sizes for generated datasets. Loaded datasets are split 80/10/10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSizes {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        SplitSizes {
            train: 3000,
            validation: 300,
            test: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub max_epochs: usize,
    /// Epochs without a new best validation error before stopping.
    pub patience: usize,
    pub batch_size: usize,
    pub optimizer: AdamConfig,
    /// Divide targets by the mean training label.
    pub normalize_targets: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 50,
            patience: 10,
            batch_size: 32,
            // At 1e-3 the first Adam steps move all dense weights together and
            // push every sample onto the dead side of the output ReLU.
            optimizer: AdamConfig {
                learning_rate: 1e-4,
                ..AdamConfig::default()
            },
            normalize_targets: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    pub methods: Vec<Estimator>,
    /// Largest budget tried per method.
    pub cap: u64,
    /// Tune samplers on the first this-many test graphs (all when absent).
    pub tune_graphs: Option<usize>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            methods: vec![Estimator::EdgeSampling, Estimator::Mcmc],
            cap: 1 << 21,
            tune_graphs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub pattern: GraphletPattern,
    #[serde(default)]
    pub splits: SplitSizes,
    /// Swap-augmented copies per training graph.
    #[serde(default)]
    pub augment: usize,
    /// Padded matrix side; the largest graph size when absent.
    #[serde(default)]
    pub pad_dim: Option<usize>,
    /// `input_dim` is overwritten with the resolved pad dimension.
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(source: DataSource, pattern: GraphletPattern, seed: u64) -> Self {
        ExperimentConfig {
            source,
            pattern,
            splits: SplitSizes::default(),
            augment: 0,
            pad_dim: None,
            model: ModelConfig::default(),
            train: TrainConfig::default(),
            compare: CompareConfig::default(),
            seed,
            output_dir: None,
        }
    }
}

/// Named sub-seeds expanded from the experiment seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPlan {
    pub data: u64,
    pub split: u64,
    pub augment: u64,
    pub init: u64,
    pub shuffle: u64,
    pub compare: u64,
}

impl SeedPlan {
    pub fn from_root(seed: u64) -> Self {
        SeedPlan {
            data: derive_seed(seed, "data"),
            split: derive_seed(seed, "split"),
            augment: derive_seed(seed, "augment"),
            init: derive_seed(seed, "init"),
            shuffle: derive_seed(seed, "shuffle"),
            compare: derive_seed(seed, "compare"),
        }
    }
}

/// What gets written to `config.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub seeds: SeedPlan,
    pub early_stopping: String,
    pub flops_convention: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json_gets_defaults() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"source":{"kind":"er","n":50,"p":0.5},"pattern":"FourClique"}"#).unwrap();
        assert_eq!(cfg.splits, SplitSizes::default());
        assert_eq!(cfg.train.max_epochs, 50);
        assert_eq!(cfg.train.patience, 10);
        assert_eq!(cfg.train.batch_size, 32);
        assert_eq!(cfg.train.optimizer.learning_rate, 1e-4);
        assert_eq!(cfg.model, ModelConfig::default());
        let rgg: DataSource = serde_json::from_str(r#"{"kind":"rgg","n":50,"r":0.45}"#).unwrap();
        assert_eq!(rgg, DataSource::Rgg { n: 50, r: 0.45, dim: 3 });
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"source":{"kind":"er","n":5,"p":0.5},"pattern":"Triangle","epochs":3}"#
        )
        .is_err());
        assert!(serde_json::from_str::<DataSource>(r#"{"kind":"er","n":5,"p":0.5,"q":1}"#).is_err());
    }

    #[test]
    fn sub_seeds_distinct_and_stable() {
        let a = SeedPlan::from_root(7);
        assert_eq!(a, SeedPlan::from_root(7));
        let all = [a.data, a.split, a.augment, a.init, a.shuffle, a.compare];
        let set: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert_ne!(a, SeedPlan::from_root(8));
    }
}
