use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::compression::{compression_report, domain_compress, CompressionReport};
use crate::error::Result;
use crate::graph::{build_attributes, parse_tu_dataset, GraphDataset};
use crate::hdecomp::egnn_decompose;
use crate::net::{evaluate, train, ModelSpec, NetInput, SaenModel};
use crate::{Compressed, Decomposition};

/// Wall-clock seconds spent in each phase. Phases that did not run stay 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub load_s: f64,
    pub decompose_s: f64,
    pub compress_s: f64,
    pub train_s: f64,
    pub eval_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub graphs: usize,
    pub classes: usize,
    pub vertices: usize,
    pub mean_vertices: f64,
    pub average_max_degree: f64,
}

impl DatasetSummary {
    pub fn of(ds: &GraphDataset) -> Self {
        Self {
            name: ds.name.clone(),
            graphs: ds.len(),
            classes: ds.class_count(),
            vertices: ds.total_vertices(),
            mean_vertices: ds.mean_vertices(),
            average_max_degree: ds.average_max_degree(),
        }
    }
}

pub(crate) fn seconds_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Reads the dataset named by `config`, recording the load time.
pub fn load_dataset(config: &ExperimentConfig, timings: &mut Timings) -> Result<GraphDataset> {
    let t = Instant::now();
    let ds = parse_tu_dataset(&config.dataset.path, &config.dataset.name)?;
    timings.load_s += seconds_since(t);
    Ok(ds)
}

/// A dataset decomposed (and optionally compressed) once, ready for any
/// number of training runs.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub dataset: GraphDataset,
    pub decomposition: Decomposition,
    pub compressed: Option<Compressed>,
    pub input: NetInput<f64>,
}

impl Prepared {
    pub fn build(
        config: &ExperimentConfig,
        dataset: GraphDataset,
        compress: bool,
        timings: &mut Timings,
    ) -> Result<Self> {
        let t = Instant::now();
        let x = build_attributes(&dataset, config.dataset.attributes)?;
        let decomposition: Decomposition = egnn_decompose(&dataset, &x, &config.decomposition.radii)?;
        timings.decompose_s += seconds_since(t);
        let (compressed, input) = if compress {
            let t = Instant::now();
            let c = domain_compress(&decomposition)?;
            let input = NetInput::compressed(&c);
            timings.compress_s += seconds_since(t);
            (Some(c), input)
        } else {
            let input = NetInput::uncompressed(&decomposition);
            (None, input)
        };
        Ok(Self {
            dataset,
            decomposition,
            compressed,
            input,
        })
    }

    pub fn model_spec(&self, config: &ExperimentConfig) -> ModelSpec {
        ModelSpec {
            attribute_dim: self.decomposition.attributes().width(),
            alphabet_sizes: self.decomposition.alphabets().iter().map(|a| a.size()).collect(),
            widths: config.model.widths.clone(),
            class_count: self.dataset.class_count(),
            alpha: config.model.alpha,
        }
    }

    pub fn compression_report(&self) -> Option<CompressionReport> {
        self.compressed
            .as_ref()
            .map(|c| compression_report(&self.decomposition, c))
    }

    /// Logits rows belonging to the given dataset graphs.
    pub fn rows_for_graphs(&self, graphs: &[usize]) -> Vec<usize> {
        let mut wanted = vec![false; self.dataset.len()];
        for &g in graphs {
            wanted[g] = true;
        }
        (0..self.input.output_rows())
            .filter(|&r| wanted[self.input.graph_ids[r]])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub compress: bool,
    pub dataset: DatasetSummary,
    pub param_count: usize,
    pub loss_curve: Vec<f64>,
    pub train_accuracy: f64,
    pub compression: Option<CompressionReport>,
    pub timings: Timings,
}

/// Trains one model on every graph of the configured dataset.
pub fn run_training(config: &ExperimentConfig, seed: u64, compress: bool) -> Result<(SaenModel<f64>, TrainReport)> {
    let mut timings = Timings::default();
    let ds = load_dataset(config, &mut timings)?;
    let prepared = Prepared::build(config, ds, compress, &mut timings)?;
    let mut model = SaenModel::new(&prepared.model_spec(config), seed)?;
    let labels = prepared.dataset.labels().to_vec();
    let t = Instant::now();
    let loss_curve = train(&mut model, &prepared.input, &labels, None, &config.train_config())?;
    timings.train_s = seconds_since(t);
    let t = Instant::now();
    let eval = evaluate(&model, &prepared.input, &labels, None)?;
    timings.eval_s = seconds_since(t);
    let report = TrainReport {
        toolkit_version: super::TOOLKIT_VERSION.to_string(),
        config: config.clone(),
        seed,
        compress,
        dataset: DatasetSummary::of(&prepared.dataset),
        param_count: model.param_count(),
        loss_curve,
        train_accuracy: eval.accuracy,
        compression: prepared.compression_report(),
        timings,
    };
    Ok((model, report))
}
