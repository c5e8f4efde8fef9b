use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use graphlet_cnn::exact::count_all;
use graphlet_cnn::graph::{gen_er, gen_rgg, load_dataset, save_dataset, ErConfig, GraphDataset, RggConfig, Sample, Split};
use graphlet_cnn::harness::{
    build_labeled_dataset, evaluate, prepare_output_dir, run_experiment, write_json, DataSource, ExperimentConfig,
    SeedPlan,
};
use graphlet_cnn::neural::{flops as model_flops, load_model, CnnModel, ModelConfig};
use graphlet_cnn::rng::derive_indexed;
use graphlet_cnn::OpCounter;
use serde::Serialize;

use crate::error::CliError;
use crate::{CompareArgs, CountArgs, EstimateArgs, EvalArgs, FlopsArgs, GenArgs, GraphModel, OutArgs, SplitArg, TrainArgs};

fn refuse_overwrite(path: &Path, force: bool) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::Data(format!(
            "{} already exists (use --force to overwrite)",
            path.display()
        )));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Runtime(e.to_string()))
}

/// Writes to `--out` when given, standard output otherwise.
fn emit(out: &OutArgs, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => {
            refuse_overwrite(path, out.force)?;
            fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn dataset_id(source: &DataSource) -> String {
    match source {
        DataSource::Er { n, p } => format!("er(n={n},p={p})"),
        DataSource::Rgg { n, r, dim } => format!("rgg(n={n},r={r},dim={dim})"),
        DataSource::Tu { path } | DataSource::Jsonl { path } => path.display().to_string(),
    }
}

fn split_of(s: SplitArg) -> Split {
    match s {
        SplitArg::Train => Split::Train,
        SplitArg::Validation => Split::Validation,
        SplitArg::Test => Split::Test,
    }
}

pub fn gen(a: GenArgs) -> Result<(), CliError> {
    refuse_overwrite(&a.out, a.force)?;
    let mut ds = GraphDataset::new(None, a.n);
    for i in 0..a.count {
        let seed = derive_indexed(a.seed, "graph", i as u64);
        let graph = match a.model {
            GraphModel::Er => gen_er(&ErConfig { n: a.n, p: a.p.unwrap_or_default(), seed })?,
            GraphModel::Rgg => gen_rgg(&RggConfig {
                n: a.n,
                r: a.r.unwrap_or_default(),
                dim: a.dim,
                seed,
            })?,
        };
        ds.samples.push(Sample {
            id: format!("g{i}"),
            graph,
            label: None,
            split: None,
        });
    }
    save_dataset(&ds, &a.out)?;
    log::info!("wrote {} graphs to {}", a.count, a.out.display());
    Ok(())
}

#[derive(Serialize)]
struct GraphCounts {
    id: String,
    counts: BTreeMap<String, u64>,
}

#[derive(Serialize)]
struct CountOutput {
    k: usize,
    graphs: Vec<GraphCounts>,
}

pub fn count(a: CountArgs) -> Result<(), CliError> {
    let k = match (a.k, a.pattern) {
        (Some(k), Some(p)) if p.k() != k as usize => {
            return Err(CliError::Usage(format!("pattern {p} has {} nodes, not --k {k}", p.k())))
        }
        (Some(k), _) => k as usize,
        (None, Some(p)) => p.k(),
        (None, None) => return Err(CliError::Usage("one of --k or --pattern is required".into())),
    };
    let ds = load_dataset(&a.input)?;
    let graphs = ds
        .samples
        .iter()
        .map(|s| {
            let counts = count_all(&s.graph, k)
                .iter()
                .filter(|(p, _)| a.pattern.is_none_or(|q| q == *p))
                .map(|(p, c)| (p.name().to_string(), c))
                .collect();
            GraphCounts {
                id: s.id.clone(),
                counts,
            }
        })
        .collect();
    emit(&a.out, &to_json(&CountOutput { k, graphs })?)
}

#[derive(Serialize)]
struct EstimateOutput {
    graph_id: String,
    pattern: String,
    method: String,
    budget: u64,
    estimate: f64,
    comparisons: u64,
    seed: u64,
}

pub fn estimate(a: EstimateArgs) -> Result<(), CliError> {
    if a.budget == 0 {
        return Err(CliError::Usage("--budget must be at least 1".into()));
    }
    let ds = load_dataset(&a.input)?;
    let mut out = Vec::new();
    for (i, s) in ds.samples.iter().enumerate() {
        let seed = derive_indexed(a.seed, "estimate", i as u64);
        let r = a.method.run(&s.graph, a.pattern, a.budget, seed, &mut OpCounter::new())?;
        out.push(EstimateOutput {
            graph_id: s.id.clone(),
            pattern: a.pattern.name().to_string(),
            method: a.method.name().to_string(),
            budget: r.budget,
            estimate: r.estimate,
            comparisons: r.ops,
            seed: r.seed,
        });
    }
    emit(&a.out, &to_json(&out)?)
}

pub fn train(a: TrainArgs) -> Result<(), CliError> {
    let mut cfg = read_config(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(e) = a.max_epochs {
        cfg.train.max_epochs = e;
    }
    let out = a
        .out
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| CliError::Usage("no output directory (--out or output_dir in the config)".into()))?;
    cfg.output_dir = Some(out.clone());
    let outcome = run_experiment(&cfg, Some(&out), a.force)?;
    #[derive(Serialize)]
    struct Summary {
        output_dir: String,
        best_epoch: usize,
        epochs_run: usize,
        validation_e: Option<f64>,
        test_e: Option<f64>,
    }
    print!(
        "{}",
        to_json(&Summary {
            output_dir: out.display().to_string(),
            best_epoch: outcome.history.best_epoch,
            epochs_run: outcome.history.epochs.len(),
            validation_e: outcome.validation.map(|r| r.e),
            test_e: outcome.test.map(|r| r.e),
        })?
    );
    Ok(())
}

fn experiment_data(config: &Path, seed: Option<u64>) -> Result<(ExperimentConfig, SeedPlan, GraphDataset), CliError> {
    let mut cfg = read_config(config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let seeds = SeedPlan::from_root(cfg.seed);
    let ds = build_labeled_dataset(&cfg, &seeds)?;
    Ok((cfg, seeds, ds))
}

fn read_model(path: &Path, ds: &GraphDataset) -> Result<CnnModel<f32>, CliError> {
    let model: CnnModel<f32> = load_model(path)?;
    if model.config.input_dim != ds.pad_dim {
        return Err(CliError::Data(format!(
            "model expects {}×{} inputs but the dataset is padded to {}",
            model.config.input_dim, model.config.input_dim, ds.pad_dim
        )));
    }
    Ok(model)
}

pub fn eval(a: EvalArgs) -> Result<(), CliError> {
    let (_, _, ds) = experiment_data(&a.config, a.seed)?;
    let model = read_model(&a.model, &ds)?;
    let report = evaluate(&model, &ds, split_of(a.split))?;
    emit(&a.out, &to_json(&report)?)
}

pub fn compare(a: CompareArgs) -> Result<(), CliError> {
    let (mut cfg, seeds, ds) = experiment_data(&a.config, a.seed)?;
    if let Some(m) = a.methods {
        cfg.compare.methods = m;
    }
    if let Some(c) = a.cap {
        cfg.compare.cap = c;
    }
    if a.tune_graphs.is_some() {
        cfg.compare.tune_graphs = a.tune_graphs;
    }
    let model = read_model(&a.model, &ds)?;
    prepare_output_dir(&a.out, a.force)?;
    let report = graphlet_cnn::harness::compare(
        &model,
        &ds,
        Split::Test,
        cfg.pattern,
        &cfg.compare,
        &dataset_id(&cfg.source),
        seeds.compare,
    )?;
    fs::write(a.out.join("comparison.csv"), report.to_csv())
        .map_err(|e| CliError::Data(format!("{}: {e}", a.out.display())))?;
    write_json(&a.out.join("comparison.json"), &report)?;
    print!("{}", report.to_csv());
    Ok(())
}

pub fn flops(a: FlopsArgs) -> Result<(), CliError> {
    let config = match (&a.config, &a.model) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ModelConfig>(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        }
        (None, Some(path)) => load_model::<f32>(path)?.config,
        (None, None) => unreachable!("clap requires one of --config or --model"),
    };
    emit(&a.out, &to_json(&model_flops(&config)?)?)
}
