use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mean softmax cross-entropy over all rows, with its gradient.
pub fn cross_entropy_loss<T: Real>(logits: ArrayView2<'_, T>, labels: &[usize]) -> Result<(T, Array2<T>)> {
    let rows: Vec<usize> = (0..logits.nrows()).collect();
    cross_entropy_loss_rows(logits, labels, &rows)
}

/// Mean cross-entropy over the listed rows only; `labels` holds one label
/// per logits row. Rows not listed get a zero gradient.
pub fn cross_entropy_loss_rows<T: Real>(
    logits: ArrayView2<'_, T>,
    labels: &[usize],
    rows: &[usize],
) -> Result<(T, Array2<T>)> {
    if labels.len() != logits.nrows() {
        return Err(Error::shape("labels", logits.nrows(), labels.len()));
    }
    let k = logits.ncols();
    let mut grad = Array2::zeros(logits.raw_dim());
    if rows.is_empty() {
        return Ok((T::zero(), grad));
    }
    let scale = T::one() / <T as Real>::from_f64(rows.len() as f64);
    let mut total = T::zero();
    for &r in rows {
        let label = labels[r];
        if label >= k {
            return Err(Error::Argument(format!("label {label} of row {r} outside 0..{k}")));
        }
        let row = logits.row(r);
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        let sum: T = row.iter().map(|&z| (z - max).exp()).fold(T::zero(), |a, b| a + b);
        let log_sum = sum.ln() + max;
        total += log_sum - row[label];
        for (j, &z) in row.iter().enumerate() {
            let p = (z - log_sum).exp();
            let target = if j == label { T::one() } else { T::zero() };
            grad[[r, j]] = (p - target) * scale;
        }
    }
    Ok((total * scale, grad))
}
