use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::bench::BenchReport;
use super::cv::ExperimentReport;
use super::pipeline::TrainReport;
use crate::error::{Error, Result};

/// Reports that render as a plain-text table.
pub trait Tabular {
    fn table(&self) -> String;
}

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

impl Tabular for ExperimentReport {
    fn table(&self) -> String {
        let mut s = String::new();
        let state = if self.complete { "" } else { " (partial)" };
        let _ = writeln!(
            s,
            "{} x {}-fold cross-validation{state}, compress={}",
            self.config.cv.repeats, self.config.cv.folds, self.compress
        );
        let _ = writeln!(
            s,
            "{:<16} {:>8} {:>18} {:>14}",
            "DATASET", "GRAPHS", "ACCURACY (%)", "STD(REPEATS)"
        );
        let _ = writeln!(
            s,
            "{:<16} {:>8} {:>18} {:>14}",
            self.dataset.name,
            self.dataset.graphs,
            format!(
                "{} ± {}",
                pct(self.summary.mean_accuracy),
                pct(self.summary.std_accuracy)
            ),
            pct(self.summary.std_of_repeat_means)
        );
        let t = &self.timings;
        let _ = writeln!(
            s,
            "time (s): load {:.3}  decompose {:.3}  compress {:.3}  train {:.3}  eval {:.3}",
            t.load_s, t.decompose_s, t.compress_s, t.train_s, t.eval_s
        );
        s
    }
}

impl Tabular for BenchReport {
    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<16} {:>12} {:>12} {:>8} {:>12} {:>12} {:>8}",
            "DATASET", "SIZE ORIG", "SIZE COMP", "RATIO", "EPOCH ORIG", "EPOCH COMP", "SPEEDUP"
        );
        let (orig, comp, ratio) = match &self.compression {
            Some(c) => (
                c.stored_entries_original.to_string(),
                c.stored_entries_compressed.to_string(),
                format!("{:.2}", c.stored_entry_ratio),
            ),
            None => ("-".into(), "-".into(), "-".into()),
        };
        let speedup = self.speedup.map_or_else(|| "-".into(), |x| format!("{x:.2}"));
        let _ = writeln!(
            s,
            "{:<16} {:>12} {:>12} {:>8} {:>12} {:>12} {:>8}",
            self.dataset.name,
            orig,
            comp,
            ratio,
            self.uncompressed.cell(),
            self.compressed.cell(),
            speedup
        );
        if let Some(c) = &self.compression {
            let _ = writeln!(
                s,
                "serialized bytes: {} -> {} ({:.2})",
                c.serialized_bytes_original, c.serialized_bytes_compressed, c.serialized_byte_ratio
            );
            for l in &c.levels {
                let _ = writeln!(
                    s,
                    "level {}: {} -> {} objects ({:.2})",
                    l.level, l.original, l.compressed, l.ratio
                );
            }
        }
        s
    }
}

impl Tabular for TrainReport {
    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} epochs, seed {}, compress={}, {} parameters",
            self.dataset.name,
            self.loss_curve.len(),
            self.seed,
            self.compress,
            self.param_count
        );
        let first = self.loss_curve.first().copied().unwrap_or(f64::NAN);
        let last = self.loss_curve.last().copied().unwrap_or(f64::NAN);
        let _ = writeln!(
            s,
            "loss {first:.4} -> {last:.4}, training accuracy {}%",
            pct(self.train_accuracy)
        );
        s
    }
}

/// Path of the text table written next to a JSON report.
pub fn table_path(json_path: &Path) -> PathBuf {
    json_path.with_extension("txt")
}

/// Writes `report` as pretty JSON to `path` and its table to
/// [`table_path`]. Keys keep struct declaration order, so output is stable.
pub fn emit_report<R: Serialize + Tabular>(report: &R, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut json = serde_json::to_string_pretty(report).map_err(|e| Error::Serialization(e.to_string()))?;
    json.push('\n');
    fs::write(path, json).map_err(|e| Error::io(path, e))?;
    let table = table_path(path);
    if table != path {
        fs::write(&table, report.table()).map_err(|e| Error::io(&table, e))?;
    }
    Ok(())
}

pub fn load_report<R: DeserializeOwned>(path: impl AsRef<Path>) -> Result<R> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Serialization(format!("{}: {e}", path.display())))
}

impl Tabular for crate::compression::CompressionReport {
    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<6} {:>10} {:>10} {:>8}",
            "LEVEL", "ORIGINAL", "COMPRESSED", "RATIO"
        );
        for l in &self.levels {
            let _ = writeln!(
                s,
                "{:<6} {:>10} {:>10} {:>8.3}",
                l.level, l.original, l.compressed, l.ratio
            );
        }
        let _ = writeln!(
            s,
            "stored entries: {} -> {} ({:.3})",
            self.stored_entries_original, self.stored_entries_compressed, self.stored_entry_ratio
        );
        let _ = writeln!(
            s,
            "serialized bytes: {} -> {} ({:.3})",
            self.serialized_bytes_original, self.serialized_bytes_compressed, self.serialized_byte_ratio
        );
        s
    }
}
