//! Compressed sparse row matrices.
//!
//! Rows are stored with strictly increasing column indices and no explicit
//! zeros, so two rows are equal as vectors iff their index and value slices
//! are equal. Collapsibility detection relies on this canonical form.

use std::fmt;

use ndarray::{Array2, ArrayView2, ArrayViewMut2, Axis};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T> CsrMatrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }
}

impl<T: Scalar> CsrMatrix<T> {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            offsets: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            offsets: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate positions
    /// are summed and resulting zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut per_row: Vec<Vec<(usize, T)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Argument(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            per_row[r].push((c, v));
        }
        Self::from_rows(cols, per_row)
    }

    /// Builds a matrix from per-row `(col, value)` lists in any order.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let n_rows = rows.len();
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                if c >= cols {
                    return Err(Error::Argument(format!(
                        "column {c} outside a matrix with {cols} columns"
                    )));
                }
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if !v.is_zero() {
                    indices.push(c);
                    values.push(v);
                }
            }
            offsets.push(indices.len());
        }
        Ok(Self {
            rows: n_rows,
            cols,
            offsets,
            indices,
            values,
        })
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let (idx, vals) = self.row(r);
        match idx.binary_search(&c) {
            Ok(p) => vals[p],
            Err(_) => T::zero(),
        }
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (idx, vals) = self.row(r);
            idx.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|r| self.row(r).1.iter().fold(T::zero(), |acc, &v| acc + v))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols];
        for (_, c, v) in self.triplets() {
            sums[c] += v;
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut next = counts;
        let mut indices = vec![0; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for (r, c, v) in self.triplets() {
            let p = next[c];
            indices[p] = r;
            values[p] = v;
            next[c] += 1;
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            offsets,
            indices,
            values,
        }
    }

    /// Sparse product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(
                "sparse matmul",
                format!("rhs with {} rows", self.cols),
                format!("{} rows", rhs.rows),
            ));
        }
        // Dense accumulator per output row, reset through the touched list.
        let mut acc = vec![T::zero(); rhs.cols];
        let mut touched = vec![false; rhs.cols];
        let mut cols_hit = Vec::new();
        let mut rows_out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let (idx, vals) = self.row(r);
            for (&k, &a) in idx.iter().zip(vals) {
                let (ridx, rvals) = rhs.row(k);
                for (&c, &b) in ridx.iter().zip(rvals) {
                    if !touched[c] {
                        touched[c] = true;
                        cols_hit.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            let mut row = Vec::with_capacity(cols_hit.len());
            for &c in &cols_hit {
                row.push((c, acc[c]));
                acc[c] = T::zero();
                touched[c] = false;
            }
            cols_hit.clear();
            rows_out.push(row);
        }
        Self::from_rows(rhs.cols, rows_out)
    }

    /// Concatenates matrices with equal row counts side by side.
    pub fn hstack(blocks: &[&Self]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if let Some(bad) = blocks.iter().find(|b| b.rows != rows) {
            return Err(Error::shape("hstack", rows, bad.rows));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut offsets = Vec::with_capacity(rows + 1);
        offsets.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for r in 0..rows {
            let mut shift = 0;
            for b in blocks {
                let (idx, vals) = b.row(r);
                indices.extend(idx.iter().map(|&c| c + shift));
                values.extend_from_slice(vals);
                shift += b.cols;
            }
            offsets.push(indices.len());
        }
        Ok(Self {
            rows,
            cols,
            offsets,
            indices,
            values,
        })
    }

    /// Selects rows by index, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for &r in rows {
            let (idx, vals) = self.row(r);
            indices.extend_from_slice(idx);
            values.extend_from_slice(vals);
            offsets.push(indices.len());
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            offsets,
            indices,
            values,
        }
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(T) -> U) -> CsrMatrix<U> {
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let (idx, vals) = self.row(r);
            rows.push(idx.iter().zip(vals).map(|(&c, &v)| (c, f(v))).collect());
        }
        CsrMatrix::from_rows(self.cols, rows).expect("columns already validated")
    }

    pub fn to_dense(&self) -> Array2<T> {
        let mut out = Array2::from_elem((self.rows, self.cols), T::zero());
        for (r, c, v) in self.triplets() {
            out[[r, c]] = v;
        }
        out
    }

    pub fn from_dense(dense: ArrayView2<'_, T>) -> Self {
        let rows = dense
            .axis_iter(Axis(0))
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, &v)| (c, v))
                    .collect()
            })
            .collect();
        Self::from_rows(dense.ncols(), rows).expect("dense columns in range")
    }
}

impl<T: Real> CsrMatrix<T> {
    /// Dense product `self * rhs`.
    pub fn mul_dense(&self, rhs: ArrayView2<'_, T>) -> Result<Array2<T>> {
        let mut out = Array2::zeros((self.rows, rhs.ncols()));
        self.mul_dense_into(rhs, out.view_mut())?;
        Ok(out)
    }

    /// Accumulates `self * rhs` into `out` (which may be a column block of a
    /// wider matrix).
    pub fn mul_dense_into(&self, rhs: ArrayView2<'_, T>, mut out: ArrayViewMut2<'_, T>) -> Result<()> {
        if rhs.nrows() != self.cols || out.nrows() != self.rows || out.ncols() != rhs.ncols() {
            return Err(Error::shape(
                "sparse-dense product",
                format!("{}x{} times {}x{}", self.rows, self.cols, self.cols, out.ncols()),
                format!(
                    "rhs {}x{}, out {}x{}",
                    rhs.nrows(),
                    rhs.ncols(),
                    out.nrows(),
                    out.ncols()
                ),
            ));
        }
        for r in 0..self.rows {
            let (idx, vals) = self.row(r);
            let mut dst = out.row_mut(r);
            for (&c, &v) in idx.iter().zip(vals) {
                dst.scaled_add(v, &rhs.row(c));
            }
        }
        Ok(())
    }

    /// Accumulates `selfᵀ * rhs` into `out` without materializing the
    /// transpose.
    pub fn transpose_mul_dense_into(&self, rhs: ArrayView2<'_, T>, mut out: ArrayViewMut2<'_, T>) -> Result<()> {
        if rhs.nrows() != self.rows || out.nrows() != self.cols || out.ncols() != rhs.ncols() {
            return Err(Error::shape(
                "transposed sparse-dense product",
                format!("{}x{} times {}x{}", self.cols, self.rows, self.rows, out.ncols()),
                format!(
                    "rhs {}x{}, out {}x{}",
                    rhs.nrows(),
                    rhs.ncols(),
                    out.nrows(),
                    out.ncols()
                ),
            ));
        }
        for r in 0..self.rows {
            let (idx, vals) = self.row(r);
            let src = rhs.row(r);
            for (&c, &v) in idx.iter().zip(vals) {
                out.row_mut(c).scaled_add(v, &src);
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for CsrMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CsrMatrix({}x{}, nnz={}) [", self.rows, self.cols, self.nnz())?;
        for r in 0..self.rows.min(16) {
            let (idx, vals) = self.row(r);
            write!(f, "\n  {r}: ")?;
            for (c, v) in idx.iter().zip(vals) {
                write!(f, "({c}: {v:?}) ")?;
            }
        }
        if self.rows > 16 {
            write!(f, "\n  ...")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn triplets_are_summed_and_zeros_dropped() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(0, 2, 1i64), (0, 2, 2), (1, 0, 1), (1, 0, -1)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 2), 3);
        assert_eq!(m.row(1).0.len(), 0);
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        assert!(CsrMatrix::from_triplets(2, 2, vec![(0, 2, 1i64)]).is_err());
    }

    #[test]
    fn matmul_matches_dense() {
        let a = CsrMatrix::from_dense(array![[1i64, 0, 2], [0, 3, 0]].view());
        let b = CsrMatrix::from_dense(array![[1i64, 1], [0, 2], [4, 0]].view());
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.to_dense(), array![[9, 1], [0, 6]]);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn transpose_and_hstack() {
        let a = CsrMatrix::from_dense(array![[1i64, 0, 2], [0, 3, 0]].view());
        assert_eq!(a.transpose().to_dense(), array![[1, 0], [0, 3], [2, 0]]);
        let h = CsrMatrix::hstack(&[&a, &a]).unwrap();
        assert_eq!(h.to_dense(), array![[1, 0, 2, 1, 0, 2], [0, 3, 0, 0, 3, 0]]);
    }

    #[test]
    fn dense_products() {
        let a = CsrMatrix::from_dense(array![[1.0, 0.0, 2.0], [0.0, 3.0, 0.0]].view());
        let h = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        assert_eq!(a.mul_dense(h.view()).unwrap(), a.to_dense().dot(&h));
        let g = array![[1.0, -1.0], [0.5, 2.0]];
        let mut out = Array2::zeros((3, 2));
        a.transpose_mul_dense_into(g.view(), out.view_mut()).unwrap();
        assert_eq!(out, a.to_dense().t().dot(&g));
    }
}
