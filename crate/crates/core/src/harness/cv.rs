use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::folds::{complement, stratified_folds};
use super::pipeline::{load_dataset, seconds_since, DatasetSummary, Prepared, Timings};
use crate::compression::CompressionReport;
use crate::error::Result;
use crate::graph::GraphDataset;
use crate::net::{evaluate, train, SaenModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub repeat: usize,
    pub fold: usize,
    pub model_seed: u64,
    pub test_graphs: usize,
    pub accuracy: f64,
    pub final_loss: f64,
}

/// Accuracy statistics over a list of folds. Standard deviations are
/// population deviations (divisor `n`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub mean_accuracy: f64,
    /// Deviation over every fold of every repeat.
    pub std_accuracy: f64,
    /// Mean accuracy of each repeat that has at least one fold.
    pub repeat_means: Vec<f64>,
    /// Deviation of `repeat_means`.
    pub std_of_repeat_means: f64,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl CvSummary {
    pub fn from_folds(folds: &[FoldResult]) -> Self {
        let acc: Vec<f64> = folds.iter().map(|f| f.accuracy).collect();
        let (mean_accuracy, std_accuracy) = mean_std(&acc);
        let repeats = folds.iter().map(|f| f.repeat + 1).max().unwrap_or(0);
        let repeat_means: Vec<f64> = (0..repeats)
            .filter_map(|r| {
                let a: Vec<f64> = folds.iter().filter(|f| f.repeat == r).map(|f| f.accuracy).collect();
                (!a.is_empty()).then(|| mean_std(&a).0)
            })
            .collect();
        let (_, std_of_repeat_means) = mean_std(&repeat_means);
        Self {
            mean_accuracy,
            std_accuracy,
            repeat_means,
            std_of_repeat_means,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    pub compress: bool,
    /// False while folds are still running.
    pub complete: bool,
    pub folds: Vec<FoldResult>,
    pub summary: CvSummary,
    pub compression: Option<CompressionReport>,
    pub timings: Timings,
}

impl ExperimentReport {
    /// Largest gap between the stored summary and one recomputed from the
    /// fold list.
    pub fn summary_drift(&self) -> f64 {
        let fresh = CvSummary::from_folds(&self.folds);
        let mut drift = (fresh.mean_accuracy - self.summary.mean_accuracy)
            .abs()
            .max((fresh.std_accuracy - self.summary.std_accuracy).abs())
            .max((fresh.std_of_repeat_means - self.summary.std_of_repeat_means).abs());
        if fresh.repeat_means.len() != self.summary.repeat_means.len() {
            return f64::INFINITY;
        }
        for (a, b) in fresh.repeat_means.iter().zip(&self.summary.repeat_means) {
            drift = drift.max((a - b).abs());
        }
        drift
    }
}

/// Seed of the model trained on `fold` of `repeat`.
pub fn fold_model_seed(base: u64, repeat: usize, fold: usize, folds: usize) -> u64 {
    base.wrapping_add((repeat * folds + fold) as u64)
}

/// Loads the configured dataset and runs repeated stratified
/// cross-validation on it.
pub fn run_cross_validation(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut timings = Timings::default();
    let ds = load_dataset(config, &mut timings)?;
    cross_validate(config, ds, timings, |_| Ok(()))
}

/// Cross-validation on an in-memory dataset. `on_fold` sees the partial
/// report after every fold, e.g. to flush it to disk.
pub fn cross_validate<F>(
    config: &ExperimentConfig,
    dataset: GraphDataset,
    mut timings: Timings,
    mut on_fold: F,
) -> Result<ExperimentReport>
where
    F: FnMut(&ExperimentReport) -> Result<()>,
{
    config.validate()?;
    let compress = config.cv.compress;
    let prepared = Prepared::build(config, dataset, compress, &mut timings)?;
    let spec = prepared.model_spec(config);
    let train_cfg = config.train_config();
    let labels = prepared.dataset.labels().to_vec();
    let k = config.cv.folds;

    let mut report = ExperimentReport {
        toolkit_version: super::TOOLKIT_VERSION.to_string(),
        config: config.clone(),
        dataset: DatasetSummary::of(&prepared.dataset),
        compress,
        complete: false,
        folds: Vec::with_capacity(k * config.cv.repeats),
        summary: CvSummary::default(),
        compression: prepared.compression_report(),
        timings,
    };

    for repeat in 0..config.cv.repeats {
        let split = stratified_folds(&labels, k, config.cv.seed.wrapping_add(repeat as u64))?;
        for (fold, test_graphs) in split.iter().enumerate() {
            let train_graphs = complement(labels.len(), test_graphs);
            let train_rows = prepared.rows_for_graphs(&train_graphs);
            let test_rows = prepared.rows_for_graphs(test_graphs);
            let model_seed = fold_model_seed(config.cv.seed, repeat, fold, k);
            let mut model = SaenModel::new(&spec, model_seed)?;

            let t = Instant::now();
            let curve = train(&mut model, &prepared.input, &labels, Some(&train_rows), &train_cfg)?;
            report.timings.train_s += seconds_since(t);

            let t = Instant::now();
            let eval = evaluate(&model, &prepared.input, &labels, Some(&test_rows))?;
            report.timings.eval_s += seconds_since(t);

            report.folds.push(FoldResult {
                repeat,
                fold,
                model_seed,
                test_graphs: test_graphs.len(),
                accuracy: eval.accuracy,
                final_loss: curve.last().copied().unwrap_or(f64::NAN),
            });
            report.summary = CvSummary::from_folds(&report.folds);
            on_fold(&report)?;
        }
    }
    report.complete = true;
    Ok(report)
}
