#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use saen::graph::{degree_attributes, Graph, GraphDataset};
use saen::harness::ExperimentConfig;
use saen::hdecomp::egnn_decompose;
use saen::net::ModelSpec;
use saen::Decomposition;

/// Ten triangles (class 0) and ten paths on 3 to 7 vertices (class 1).
pub fn triangles_vs_paths() -> GraphDataset {
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..20 {
        if i % 2 == 0 {
            graphs.push(Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap());
            labels.push(0);
        } else {
            let n = 3 + (i / 2) % 5;
            graphs.push(Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap());
            labels.push(1);
        }
    }
    GraphDataset::new("toy", graphs, &labels).unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let p = rng.gen_range(0.05..0.5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Non-empty ascending subset of `{0, 1, 2}`.
pub fn random_radii<R: Rng>(rng: &mut R) -> Vec<usize> {
    loop {
        let radii: Vec<usize> = (0..3).filter(|_| rng.gen_bool(0.5)).collect();
        if !radii.is_empty() {
            return radii;
        }
    }
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn decompose(ds: &GraphDataset, radii: &[usize]) -> Decomposition {
    egnn_decompose(ds, &degree_attributes(ds).unwrap(), radii).unwrap()
}

pub fn spec_for(h: &Decomposition, widths: Vec<Vec<usize>>, class_count: usize) -> ModelSpec {
    ModelSpec {
        attribute_dim: h.attributes().width(),
        alphabet_sizes: h.alphabets().iter().map(|a| a.size()).collect(),
        widths,
        class_count,
        alpha: 0.01,
    }
}

/// `|a - b| <= tol * max(|a|, |b|)`, with `floor` guarding exact zeros.
pub fn rel_close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(floor)
}

pub fn toy_config(epochs: usize, lr: f64, folds: usize, repeats: usize) -> ExperimentConfig {
    let text = format!(
        r#"
version = 1
[dataset]
path = "unused"
name = "toy"
attributes = "degree"
[decomposition]
radii = [0, 1]
[model]
widths = [[8], [8], [8]]
[training]
epochs = {epochs}
lr = {lr}
[cv]
folds = {folds}
repeats = {repeats}
seed = 3
"#
    );
    ExperimentConfig::from_toml_str(&text, None).unwrap()
}

pub fn mutag_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/MUTAG")
}

/// Directory holding `name`: `$SAEN_DATA_DIR/name` when set, else the
/// repository's `data/name`.
pub fn dataset_dir(name: &str) -> PathBuf {
    match std::env::var_os("SAEN_DATA_DIR") {
        Some(d) => PathBuf::from(d).join(name),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name),
    }
}

/// Mean cross-entropy over all rows and its gradient, flattened in
/// parameter order.
pub fn loss_and_gradient(model: &saen::Model, input: &saen::Input, graph_labels: &[usize]) -> (f64, Vec<f64>) {
    use saen::net::{backward, cross_entropy_loss, flatten_gradients, forward, row_labels};
    let labels = row_labels(input, graph_labels).unwrap();
    let trace = forward(model, input).unwrap();
    let (loss, d) = cross_entropy_loss(trace.logits.view(), &labels).unwrap();
    let grads = backward(model, input, &trace, d.view()).unwrap();
    (loss, flatten_gradients(&grads))
}

pub fn loss_only(model: &saen::Model, input: &saen::Input, graph_labels: &[usize]) -> f64 {
    use saen::net::{cross_entropy_loss, logits, row_labels};
    let labels = row_labels(input, graph_labels).unwrap();
    let z = logits(model, input).unwrap();
    cross_entropy_loss(z.view(), &labels).unwrap().0
}

pub const TOY_WIDTHS: [usize; 3] = [8, 8, 8];
pub const TOY_LR: f64 = 0.005;

pub fn toy_widths() -> Vec<Vec<usize>> {
    TOY_WIDTHS.iter().map(|&w| vec![w]).collect()
}
