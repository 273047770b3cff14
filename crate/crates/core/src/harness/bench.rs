use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::pipeline::{load_dataset, seconds_since, DatasetSummary, Timings};
use crate::compression::{compression_report, domain_compress, CompressionReport};
use crate::error::Result;
use crate::graph::build_attributes;
use crate::hdecomp::egnn_decompose;
use crate::net::{train, ModelSpec, NetInput, SaenModel, TrainConfig};
use crate::Decomposition;

/// Result of timing one variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunOutcome {
    Completed {
        epochs: usize,
        seconds_per_epoch: f64,
    },
    /// The time budget ran out before the variant finished.
    Timeout,
    /// The estimated working set exceeds the memory cap; nothing was run.
    OutOfMemory {
        estimated_bytes: u64,
        cap_bytes: u64,
    },
}

impl RunOutcome {
    pub fn seconds_per_epoch(&self) -> Option<f64> {
        match self {
            Self::Completed { seconds_per_epoch, .. } => Some(*seconds_per_epoch),
            _ => None,
        }
    }

    pub fn is_sentinel(&self) -> bool {
        !matches!(self, Self::Completed { .. })
    }

    /// Short table cell: seconds, `TO` or `OOM`.
    pub fn cell(&self) -> String {
        match self {
            Self::Completed { seconds_per_epoch, .. } => format!("{seconds_per_epoch:.4}"),
            Self::Timeout => "TO".into(),
            Self::OutOfMemory { .. } => "OOM".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    pub timeout_secs: f64,
    pub memory_cap_bytes: u64,
    pub compression: Option<CompressionReport>,
    pub uncompressed: RunOutcome,
    pub compressed: RunOutcome,
    /// Uncompressed over compressed seconds per epoch, when both completed.
    pub speedup: Option<f64>,
    pub timings: Timings,
}

impl BenchReport {
    pub fn has_sentinel(&self) -> bool {
        self.uncompressed.is_sentinel() || self.compressed.is_sentinel()
    }
}

/// Rough peak bytes of one training epoch: the input matrices, per-level
/// aggregates and activations (kept for the backward pass, plus their
/// gradients) and the parameters with their Adam moments.
pub fn estimate_training_bytes(input: &NetInput<f64>, spec: &ModelSpec) -> u64 {
    let f = std::mem::size_of::<f64>() as u64;
    let idx = std::mem::size_of::<usize>() as u64;
    let x = input.x.len() as u64 * f;
    let relations: u64 = input
        .relations
        .iter()
        .flatten()
        .map(|r| r.nnz() as u64 * (f + idx) + (r.rows() as u64 + 1) * idx)
        .sum();
    let mut activations = 0u64;
    for l in 0..spec.levels() {
        let rows = if l == 0 {
            input.x.nrows()
        } else {
            input.relations[l - 1].first().map_or(0, |r| r.rows())
        } as u64;
        let cells: usize = spec.input_dim(l) + 2 * spec.widths[l].iter().sum::<usize>();
        activations += rows * cells as u64 * f;
    }
    let top = input.output_rows() as u64 * (spec.output_dim(spec.levels() - 1) + spec.class_count) as u64 * f;
    let params = SaenModel::<f64>::new(spec, 0).map_or(0, |m| m.param_count() as u64) * 4 * f;
    x + relations + 2 * (activations + top) + params
}

struct Deadline {
    end: Option<Instant>,
}

impl Deadline {
    fn new(start: Instant, secs: f64) -> Self {
        Self {
            end: Duration::try_from_secs_f64(secs)
                .ok()
                .and_then(|d| start.checked_add(d)),
        }
    }

    fn passed(&self) -> bool {
        self.end.is_some_and(|e| Instant::now() >= e)
    }
}

fn time_epochs(
    input: &NetInput<f64>,
    spec: &ModelSpec,
    labels: &[usize],
    config: &ExperimentConfig,
    cap: u64,
    deadline: &Deadline,
) -> Result<RunOutcome> {
    let estimated = estimate_training_bytes(input, spec);
    if estimated > cap {
        return Ok(RunOutcome::OutOfMemory {
            estimated_bytes: estimated,
            cap_bytes: cap,
        });
    }
    let mut model = SaenModel::new(spec, config.cv.seed)?;
    let one = TrainConfig {
        epochs: 1,
        ..config.train_config()
    };
    let epochs = config.bench.epochs.max(1);
    let mut total = 0.0;
    for _ in 0..epochs {
        if deadline.passed() {
            return Ok(RunOutcome::Timeout);
        }
        let t = Instant::now();
        train(&mut model, input, labels, None, &one)?;
        total += seconds_since(t);
    }
    if deadline.passed() {
        return Ok(RunOutcome::Timeout);
    }
    Ok(RunOutcome::Completed {
        epochs,
        seconds_per_epoch: total / epochs as f64,
    })
}

/// Times training epochs on the uncompressed and compressed inputs of the
/// configured dataset. `timeout_secs` and `memory_cap_mb` override the
/// config's `bench` section.
///
/// The time budget covers decomposition, compression and both timed runs;
/// it is checked between phases and between epochs.
pub fn benchmark_compression(
    config: &ExperimentConfig,
    timeout_secs: Option<f64>,
    memory_cap_mb: Option<u64>,
) -> Result<BenchReport> {
    let mut timings = Timings::default();
    let ds = load_dataset(config, &mut timings)?;
    let timeout = timeout_secs.unwrap_or(config.bench.timeout_secs);
    let cap = memory_cap_mb
        .unwrap_or(config.bench.memory_cap_mb)
        .saturating_mul(1 << 20);
    let start = Instant::now();
    let deadline = Deadline::new(start, timeout);

    let mut report = BenchReport {
        toolkit_version: super::TOOLKIT_VERSION.to_string(),
        config: config.clone(),
        dataset: DatasetSummary::of(&ds),
        timeout_secs: timeout,
        memory_cap_bytes: cap,
        compression: None,
        uncompressed: RunOutcome::Timeout,
        compressed: RunOutcome::Timeout,
        speedup: None,
        timings: Timings::default(),
    };
    if deadline.passed() {
        report.timings = timings;
        return Ok(report);
    }

    let t = Instant::now();
    let x = build_attributes(&ds, config.dataset.attributes)?;
    let h: Decomposition = egnn_decompose(&ds, &x, &config.decomposition.radii)?;
    timings.decompose_s = seconds_since(t);
    let spec = ModelSpec {
        attribute_dim: h.attributes().width(),
        alphabet_sizes: h.alphabets().iter().map(|a| a.size()).collect(),
        widths: config.model.widths.clone(),
        class_count: ds.class_count(),
        alpha: config.model.alpha,
    };
    let labels = ds.labels();

    if !deadline.passed() {
        let input = NetInput::uncompressed(&h);
        report.uncompressed = time_epochs(&input, &spec, labels, config, cap, &deadline)?;
    }
    if !deadline.passed() {
        let t = Instant::now();
        let c = domain_compress(&h)?;
        let input = NetInput::compressed(&c);
        timings.compress_s = seconds_since(t);
        report.compression = Some(compression_report(&h, &c));
        report.compressed = time_epochs(&input, &spec, labels, config, cap, &deadline)?;
    }
    report.speedup = match (
        report.uncompressed.seconds_per_epoch(),
        report.compressed.seconds_per_epoch(),
    ) {
        (Some(u), Some(c)) if c > 0.0 => Some(u / c),
        _ => None,
    };
    report.timings = timings;
    Ok(report)
}
