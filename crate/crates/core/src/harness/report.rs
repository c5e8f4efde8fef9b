use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    build_labeled_dataset, evaluate, train, ExperimentConfig, HarnessError, MetricsReport, ResolvedConfig, SeedPlan,
    TrainHistory,
};
use crate::graph::{GraphDataset, Split};
use crate::neural::{save_model, CnnModel, ModelConfig};
use crate::FLOPS_CONVENTION;

pub const EARLY_STOPPING_NOTE: &str =
    "validation graphs drive early stopping on relative error; they are not used for hyperparameter choice";

/// Creates `dir`, refusing to reuse a non-empty directory unless `force`.
pub fn prepare_output_dir(dir: &Path, force: bool) -> Result<(), HarnessError> {
    if dir.exists() {
        let non_empty = fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))?.next().is_some();
        if non_empty && !force {
            return Err(HarnessError::OutputExists(dir.display().to_string()));
        }
    }
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::io(path, e))?;
    fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

/// Contents of `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub test: Option<MetricsReport>,
    pub validation: Option<MetricsReport>,
    pub best_epoch: usize,
    pub stopped_early: bool,
    pub early_stopping: String,
}

pub struct ExperimentOutcome {
    pub resolved: ResolvedConfig,
    pub dataset: GraphDataset,
    pub model: CnnModel<f32>,
    pub history: TrainHistory,
    pub test: Option<MetricsReport>,
    pub validation: Option<MetricsReport>,
}

impl ExperimentConfig {
    /// Config with the pad dimension filled in and the sub-seeds expanded.
    pub fn resolve(&self, pad_dim: usize) -> ResolvedConfig {
        let mut config = self.clone();
        config.pad_dim = Some(pad_dim);
        config.model = ModelConfig {
            input_dim: pad_dim,
            ..config.model
        };
        ResolvedConfig {
            config,
            seeds: SeedPlan::from_root(self.seed),
            early_stopping: EARLY_STOPPING_NOTE.into(),
            flops_convention: FLOPS_CONVENTION.into(),
        }
    }
}

fn optional_metrics(model: &CnnModel<f32>, ds: &GraphDataset, split: Split) -> Result<Option<MetricsReport>, HarnessError> {
    match evaluate(model, ds, split) {
        Ok(r) => Ok(Some(r)),
        Err(HarnessError::EmptySplit(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Builds the dataset, trains and evaluates. With `out`, writes
/// `config.json`, `model.bin`, `history.csv` and `metrics.json` there.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out: Option<&Path>,
    force: bool,
) -> Result<ExperimentOutcome, HarnessError> {
    if let Some(dir) = out {
        prepare_output_dir(dir, force)?;
    }
    let seeds = SeedPlan::from_root(cfg.seed);
    let dataset = build_labeled_dataset(cfg, &seeds)?;
    let resolved = cfg.resolve(dataset.pad_dim);
    if let Some(dir) = out {
        write_json(&dir.join("config.json"), &resolved)?;
    }
    let (model, history) = train(&dataset, &resolved.config.model, &cfg.train, seeds.init, seeds.shuffle)?;
    let test = optional_metrics(&model, &dataset, Split::Test)?;
    let validation = optional_metrics(&model, &dataset, Split::Validation)?;
    if let Some(dir) = out {
        save_model(&model, &dir.join("model.bin"))?;
        write_text(&dir.join("history.csv"), &history.to_csv())?;
        write_json(
            &dir.join("metrics.json"),
            &MetricsFile {
                test: test.clone(),
                validation: validation.clone(),
                best_epoch: history.best_epoch,
                stopped_early: history.stopped_early,
                early_stopping: EARLY_STOPPING_NOTE.into(),
            },
        )?;
    }
    Ok(ExperimentOutcome {
        resolved,
        dataset,
        model,
        history,
        test,
        validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GraphletPattern;
    use crate::harness::{DataSource, SplitSizes};
    use crate::neural::load_model;

    #[test]
    fn writes_all_artifacts_and_refuses_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("run");
        let mut cfg = ExperimentConfig::new(DataSource::Er { n: 10, p: 0.5 }, GraphletPattern::Triangle, 5);
        cfg.splits = SplitSizes { train: 8, validation: 2, test: 2 };
        cfg.model = ModelConfig {
            filter1: 3,
            filter2: 3,
            channels1: 2,
            channels2: 2,
            ..ModelConfig::default()
        };
        cfg.train.max_epochs = 2;
        let outcome = run_experiment(&cfg, Some(&out), false).unwrap();
        for f in ["config.json", "model.bin", "history.csv", "metrics.json"] {
            assert!(out.join(f).is_file(), "{f}");
        }
        let loaded: CnnModel<f32> = load_model(&out.join("model.bin")).unwrap();
        assert_eq!(loaded, outcome.model);
        let resolved: ResolvedConfig =
            serde_json::from_str(&fs::read_to_string(out.join("config.json")).unwrap()).unwrap();
        assert_eq!(resolved.config.pad_dim, Some(10));
        assert_eq!(resolved.seeds, SeedPlan::from_root(5));
        assert!(matches!(run_experiment(&cfg, Some(&out), false), Err(HarnessError::OutputExists(_))));
        run_experiment(&cfg, Some(&out), true).unwrap();
    }
}
