//! Labeled graph datasets and their JSONL file format.
//!
//! The first line is a header object
//! `{"schema_version":1,"pattern":"FourClique","pad_dim":50}`; every further
//! line is one sample `{"id":..,"n":..,"edges":[[u,v],..],"label":..,"split":..}`.
//! `pattern`, `label` and `split` may be `null` for unlabeled graph sets
//! (the output of `gen`).

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DataError, Graph};
use crate::exact::GraphletPattern;
use crate::DATASET_SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Unique id. Augmented copies are named `<base>#aug<t>`.
    pub id: String,
    pub graph: Graph,
    pub label: Option<f64>,
    pub split: Option<Split>,
}

impl Sample {
    /// Id of the original graph this sample was derived from.
    pub fn base_id(&self) -> &str {
        self.id.split('#').next().unwrap_or(&self.id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphDataset {
    pub pattern: Option<GraphletPattern>,
    pub pad_dim: usize,
    pub samples: Vec<Sample>,
}

impl GraphDataset {
    pub fn new(pattern: Option<GraphletPattern>, pad_dim: usize) -> Self {
        GraphDataset {
            pattern,
            pad_dim,
            samples: Vec::new(),
        }
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.split == Some(split))
    }

    pub fn max_node_count(&self) -> usize {
        self.samples.iter().map(|s| s.graph.node_count()).max().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema_version: u32,
    pattern: Option<GraphletPattern>,
    pad_dim: usize,
}

#[derive(Serialize, Deserialize)]
struct Record {
    id: String,
    n: usize,
    edges: Vec<[usize; 2]>,
    label: Option<f64>,
    split: Option<Split>,
}

pub fn save_dataset(ds: &GraphDataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| DataError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let header = Header {
        schema_version: DATASET_SCHEMA_VERSION,
        pattern: ds.pattern,
        pad_dim: ds.pad_dim,
    };
    write_json_line(&mut out, &header).map_err(|e| DataError::io(path, e))?;
    for s in &ds.samples {
        let record = Record {
            id: s.id.clone(),
            n: s.graph.node_count(),
            edges: s.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            label: s.label,
            split: s.split,
        };
        write_json_line(&mut out, &record).map_err(|e| DataError::io(path, e))?;
    }
    out.flush().map_err(|e| DataError::io(path, e))
}

fn write_json_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<GraphDataset, DataError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| DataError::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let name = path.display().to_string();

    let header_line = match lines.next() {
        Some((_, line)) => line.map_err(|e| DataError::io(path, e))?,
        None => return Err(DataError::parse(format!("{name}:1"), "missing header line")),
    };
    let version: serde_json::Value = serde_json::from_str(&header_line)
        .map_err(|e| DataError::parse(format!("{name}:1"), e.to_string()))?;
    let found = version.get("schema_version").and_then(|v| v.as_u64());
    match found {
        Some(v) if v == DATASET_SCHEMA_VERSION as u64 => {}
        Some(v) => {
            return Err(DataError::SchemaVersionMismatch {
                found: v as u32,
                expected: DATASET_SCHEMA_VERSION,
            })
        }
        None => return Err(DataError::parse(format!("{name}:1"), "header lacks schema_version")),
    }
    let header: Header = serde_json::from_value(version)
        .map_err(|e| DataError::parse(format!("{name}:1"), e.to_string()))?;

    let mut ds = GraphDataset::new(header.pattern, header.pad_dim);
    for (i, line) in lines {
        let line = line.map_err(|e| DataError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let location = format!("{name}:{}", i + 1);
        let rec: Record =
            serde_json::from_str(&line).map_err(|e| DataError::parse(&location, e.to_string()))?;
        if let Some(label) = rec.label {
            if !(label >= 0.0) || !label.is_finite() {
                return Err(DataError::parse(&location, format!("invalid label {label}")));
            }
        }
        let graph = Graph::from_edges(rec.n, rec.edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| DataError::parse(&location, e.to_string()))?;
        ds.samples.push(Sample {
            id: rec.id,
            graph,
            label: rec.label,
            split: rec.split,
        });
    }
    Ok(ds)
}
