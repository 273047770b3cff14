//! Reader and writer for the multi-file benchmark text format.
//!
//! A dataset `NAME` lives in a directory holding
//!
//! * `NAME_A.txt`: one edge `i, j` per line, global 1-based vertex ids;
//! * `NAME_graph_indicator.txt`: line `k` is the 1-based graph id of vertex `k`;
//! * `NAME_graph_labels.txt`: one integer class label per graph;
//! * `NAME_node_labels.txt` (optional): one integer label per vertex.
//!
//! LF and CRLF line endings are accepted, as are blank lines.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{Graph, GraphDataset};
use crate::error::{Error, Result};

fn file_for(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

fn read_required(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_int(path: &Path, line: usize, token: &str) -> Result<i64> {
    token.trim().parse::<i64>().map_err(|_| Error::Format {
        file: path.to_path_buf(),
        line,
        message: format!("expected an integer, found `{}`", token.trim()),
    })
}

fn parse_column(path: &Path, text: &str) -> Result<Vec<(usize, i64)>> {
    lines(text)
        .map(|(n, l)| parse_int(path, n, l).map(|v| (n, v)))
        .collect()
}

/// Loads the dataset `name` from `dir`.
pub fn parse_tu_dataset(dir: impl AsRef<Path>, name: &str) -> Result<GraphDataset> {
    let dir = dir.as_ref();
    let a_path = file_for(dir, name, "A");
    let ind_path = file_for(dir, name, "graph_indicator");
    let gl_path = file_for(dir, name, "graph_labels");
    let nl_path = file_for(dir, name, "node_labels");

    let a_text = read_required(&a_path)?;
    let ind_text = read_required(&ind_path)?;
    let gl_text = read_required(&gl_path)?;

    let graph_labels: Vec<i64> = parse_column(&gl_path, &gl_text)?.into_iter().map(|(_, v)| v).collect();
    let n_graphs = graph_labels.len();

    // Global vertex k (0-based) -> (graph, local index).
    let mut owner = Vec::new();
    let mut sizes = vec![0usize; n_graphs];
    for (line, gid) in parse_column(&ind_path, &ind_text)? {
        if gid < 1 || gid as usize > n_graphs {
            return Err(Error::Format {
                file: ind_path.clone(),
                line,
                message: format!("graph id {gid} outside 1..={n_graphs}"),
            });
        }
        let g = gid as usize - 1;
        owner.push((g, sizes[g]));
        sizes[g] += 1;
    }
    let n_vertices = owner.len();

    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_graphs];
    for (line, l) in lines(&a_text) {
        let mut parts = l.split(',');
        let (Some(i), Some(j), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Format {
                file: a_path.clone(),
                line,
                message: format!("expected `i, j`, found `{l}`"),
            });
        };
        let endpoint = |tok: &str| -> Result<(usize, usize)> {
            let v = parse_int(&a_path, line, tok)?;
            if v < 1 || v as usize > n_vertices {
                return Err(Error::Format {
                    file: a_path.clone(),
                    line,
                    message: format!("vertex id {v} outside 1..={n_vertices}"),
                });
            }
            Ok(owner[v as usize - 1])
        };
        let (gi, li) = endpoint(i)?;
        let (gj, lj) = endpoint(j)?;
        if gi != gj {
            return Err(Error::Format {
                file: a_path.clone(),
                line,
                message: format!("edge crosses graphs {} and {}", gi + 1, gj + 1),
            });
        }
        edges[gi].push((li, lj));
    }

    let node_labels = if nl_path.is_file() {
        let text = fs::read_to_string(&nl_path).map_err(|e| Error::io(&nl_path, e))?;
        let col = parse_column(&nl_path, &text)?;
        if col.len() != n_vertices {
            return Err(Error::Format {
                file: nl_path.clone(),
                line: col.last().map_or(0, |&(n, _)| n),
                message: format!("{} node labels for {} vertices", col.len(), n_vertices),
            });
        }
        let mut per_graph: Vec<Vec<i64>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (k, (_, v)) in col.into_iter().enumerate() {
            per_graph[owner[k].0].push(v);
        }
        Some(per_graph)
    } else {
        None
    };

    let mut graphs = Vec::with_capacity(n_graphs);
    for (g, e) in edges.into_iter().enumerate() {
        let mut graph = Graph::new(sizes[g], e)?;
        if let Some(nl) = &node_labels {
            graph = graph.with_node_labels(nl[g].clone())?;
        }
        graphs.push(graph);
    }
    GraphDataset::new(name, graphs, &graph_labels)
}

/// Writes `dataset` in the benchmark format under `dir` using its own name.
/// Edges are written in both directions, as the public copies do.
pub fn write_tu_dataset(dataset: &GraphDataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = &dataset.name;
    let mut a = String::new();
    let mut ind = String::new();
    let mut nl = String::new();
    let mut offset = 0;
    for (g, graph) in dataset.graphs().iter().enumerate() {
        for _ in 0..graph.num_vertices() {
            ind.push_str(&format!("{}\n", g + 1));
        }
        for &(u, v) in graph.edges() {
            a.push_str(&format!("{}, {}\n", u + offset + 1, v + offset + 1));
            if u != v {
                a.push_str(&format!("{}, {}\n", v + offset + 1, u + offset + 1));
            }
        }
        if let Some(labels) = graph.node_labels() {
            for l in labels {
                nl.push_str(&format!("{l}\n"));
            }
        }
        offset += graph.num_vertices();
    }
    let gl: String = dataset
        .labels()
        .iter()
        .map(|&c| format!("{}\n", dataset.class_values()[c]))
        .collect();

    let mut files = vec![("A", a), ("graph_indicator", ind), ("graph_labels", gl)];
    if dataset.has_node_labels() {
        files.push(("node_labels", nl));
    }
    for (suffix, body) in files {
        let path = file_for(dir, name, suffix);
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(body.as_bytes()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
