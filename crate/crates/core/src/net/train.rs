use super::adam::{adam_step, AdamConfig};
use super::forward::{backward, forward, logits, NetInput};
use super::loss::cross_entropy_loss_rows;
use super::model::SaenModel;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub adam: AdamConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            adam: AdamConfig::default(),
        }
    }
}

/// Label of every logits row, looked up through the input's graph ids.
pub fn row_labels<T>(input: &NetInput<T>, graph_labels: &[usize]) -> Result<Vec<usize>> {
    input
        .graph_ids
        .iter()
        .map(|&g| {
            graph_labels
                .get(g)
                .copied()
                .ok_or_else(|| Error::Argument(format!("no label for graph {g}")))
        })
        .collect()
}

/// Full-batch Adam on the listed logits rows (all rows when `rows` is
/// `None`). Returns the loss at each epoch, measured before its update.
pub fn train<T: Real>(
    model: &mut SaenModel<T>,
    input: &NetInput<T>,
    graph_labels: &[usize],
    rows: Option<&[usize]>,
    cfg: &TrainConfig,
) -> Result<Vec<f64>> {
    let labels = row_labels(input, graph_labels)?;
    let all: Vec<usize>;
    let rows = match rows {
        Some(r) => r,
        None => {
            all = (0..input.output_rows()).collect();
            &all
        }
    };
    let mut curve = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        let trace = forward(model, input)?;
        let (loss, d_logits) = cross_entropy_loss_rows(trace.logits.view(), &labels, rows)?;
        let grads = backward(model, input, &trace, d_logits.view())?;
        adam_step(model, &grads, &cfg.adam)?;
        curve.push(loss.to_f64().unwrap_or(f64::NAN));
    }
    Ok(curve)
}

/// Arg-max class of every logits row.
pub fn predict<T: Real>(model: &SaenModel<T>, input: &NetInput<T>) -> Result<Vec<usize>> {
    let z = logits(model, input)?;
    Ok(z.rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(
                    (0, T::neg_infinity()),
                    |best, (j, &v)| if v > best.1 { (j, v) } else { best },
                )
                .0
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    /// Predicted class per evaluated row, in the order requested.
    pub predictions: Vec<usize>,
}

pub fn evaluate<T: Real>(
    model: &SaenModel<T>,
    input: &NetInput<T>,
    graph_labels: &[usize],
    rows: Option<&[usize]>,
) -> Result<Evaluation> {
    let labels = row_labels(input, graph_labels)?;
    let all = predict(model, input)?;
    let rows: Vec<usize> = rows.map_or_else(|| (0..all.len()).collect(), <[usize]>::to_vec);
    let predictions: Vec<usize> = rows.iter().map(|&r| all[r]).collect();
    let correct = rows.iter().zip(&predictions).filter(|(&r, &p)| labels[r] == p).count();
    let accuracy = if rows.is_empty() {
        0.0
    } else {
        correct as f64 / rows.len() as f64
    };
    Ok(Evaluation { accuracy, predictions })
}

/// Accuracy of precomputed predictions.
pub fn accuracy(predictions: &[usize], labels: &[usize]) -> f64 {
    if predictions.is_empty() {
        return 0.0;
    }
    predictions.iter().zip(labels).filter(|(p, l)| p == l).count() as f64 / predictions.len() as f64
}
