//! Reader for the TU graph-kernel benchmark layout (`DS_A.txt` plus
//! `DS_graph_indicator.txt`). Label and attribute files are ignored.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{DataError, Graph};

fn find_file(dir: &Path, suffix: &str) -> Result<PathBuf, DataError> {
    let entries = fs::read_dir(dir).map_err(|e| DataError::io(dir, e))?;
    let mut found: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.ends_with(suffix))
        })
        .collect();
    found.sort();
    found.into_iter().next().ok_or_else(|| {
        DataError::io(
            &dir.join(format!("*{suffix}")),
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        )
    })
}

fn parse_index(token: &str, location: impl Fn() -> String) -> Result<usize, DataError> {
    let value: usize = token
        .trim()
        .parse()
        .map_err(|_| DataError::parse(location(), format!("not a positive integer: {token:?}")))?;
    if value == 0 {
        return Err(DataError::parse(location(), "indices are 1-based"));
    }
    Ok(value)
}

/// Loads every graph of a TU-format dataset directory.
///
/// Graphs come back ordered by graph id, with nodes renumbered from 0 in
/// global node order. Arcs are symmetrized and duplicates collapse; self-loop
/// arcs are dropped since graphs are simple.
pub fn load_tu_dataset(dir: impl AsRef<Path>) -> Result<Vec<Graph>, DataError> {
    let dir = dir.as_ref();
    let indicator_path = find_file(dir, "_graph_indicator.txt")?;
    let arcs_path = find_file(dir, "_A.txt")?;
    let indicator_name = indicator_path.display().to_string();
    let arcs_name = arcs_path.display().to_string();

    let indicator_text =
        fs::read_to_string(&indicator_path).map_err(|e| DataError::io(&indicator_path, e))?;
    let mut graph_of_node: Vec<u64> = Vec::new();
    for (lineno, line) in indicator_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let id = parse_index(line, || format!("{indicator_name}:{}", lineno + 1))?;
        graph_of_node.push(id as u64);
    }

    // Local ids in global node order within each graph.
    let mut members: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut local = vec![0usize; graph_of_node.len()];
    for (node, &gid) in graph_of_node.iter().enumerate() {
        let list = members.entry(gid).or_default();
        local[node] = list.len();
        list.push(node);
    }
    let mut edges: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();

    let arcs_text = fs::read_to_string(&arcs_path).map_err(|e| DataError::io(&arcs_path, e))?;
    for (lineno, line) in arcs_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = || format!("{arcs_name}:{}", lineno + 1);
        let mut parts = line.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(DataError::parse(location(), format!("expected `u, v`, got {line:?}")));
        };
        let u = parse_index(a, location)? - 1;
        let v = parse_index(b, location)? - 1;
        for x in [u, v] {
            if x >= graph_of_node.len() {
                return Err(DataError::parse(
                    location(),
                    format!("node {} has no graph indicator entry", x + 1),
                ));
            }
        }
        let (gu, gv) = (graph_of_node[u], graph_of_node[v]);
        if gu != gv {
            return Err(DataError::InconsistentIndicator {
                line: lineno + 1,
                u: u + 1,
                v: v + 1,
                gu,
                gv,
            });
        }
        if u != v {
            edges.entry(gu).or_default().push((local[u], local[v]));
        }
    }

    members
        .iter()
        .map(|(gid, nodes)| {
            let list = edges.remove(gid).unwrap_or_default();
            Graph::from_edges(nodes.len(), list).map_err(DataError::from)
        })
        .collect()
}
