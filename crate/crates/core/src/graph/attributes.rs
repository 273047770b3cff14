use serde::{Deserialize, Serialize};

use super::GraphDataset;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Bottom-level attribute matrix: one row per vertex, in (graph, vertex)
/// order. Rows built by this module are concatenations of one-hot blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct AttributeMatrix {
    matrix: CsrMatrix<f64>,
}

/// Which vertex information is one-hot encoded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttributeMode {
    Degree,
    NodeLabels,
    /// Degree block followed by a node-label block. Falls back to degree
    /// alone when the dataset has no node labels.
    #[default]
    Both,
}

impl AttributeMatrix {
    pub fn new(matrix: CsrMatrix<f64>) -> Self {
        Self { matrix }
    }

    /// One row per entry of `hot`, with a 1 at each listed column.
    pub fn from_hot_columns(width: usize, hot: Vec<Vec<usize>>) -> Result<Self> {
        let rows = hot
            .into_iter()
            .map(|cols| cols.into_iter().map(|c| (c, 1.0)).collect())
            .collect();
        Ok(Self {
            matrix: CsrMatrix::from_rows(width, rows)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Attribute dimension.
    pub fn width(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &CsrMatrix<f64> {
        &self.matrix
    }

    /// Rows holding a non-integer entry. Empty iff every entry is an exact
    /// integer, which is what compression requires.
    pub fn non_categorical_rows(&self) -> Vec<usize> {
        (0..self.rows())
            .filter(|&r| self.matrix.row(r).1.iter().any(|v| !v.is_finite() || v.fract() != 0.0))
            .collect()
    }

    /// Hot column indices of a row.
    pub fn hot_columns(&self, row: usize) -> &[usize] {
        self.matrix.row(row).0
    }

    /// Horizontal concatenation of attribute blocks.
    pub fn concat(blocks: &[&AttributeMatrix]) -> Result<Self> {
        let mats: Vec<&CsrMatrix<f64>> = blocks.iter().map(|b| &b.matrix).collect();
        Ok(Self {
            matrix: CsrMatrix::hstack(&mats)?,
        })
    }
}

/// One-hot vertex degrees. Width is the maximum degree over the whole
/// dataset plus one, so every graph shares one attribute space.
pub fn degree_attributes(dataset: &GraphDataset) -> Result<AttributeMatrix> {
    if dataset.is_empty() {
        return Err(Error::Argument("dataset is empty".into()));
    }
    let width = dataset.graphs().iter().map(|g| g.max_degree()).max().unwrap_or(0) + 1;
    let hot = dataset
        .graphs()
        .iter()
        .flat_map(|g| (0..g.num_vertices()).map(move |v| vec![g.degree(v)]))
        .collect();
    AttributeMatrix::from_hot_columns(width, hot)
}

/// One-hot node labels, columns ordered by ascending raw label value.
pub fn node_label_attributes(dataset: &GraphDataset) -> Result<AttributeMatrix> {
    if !dataset.has_node_labels() {
        return Err(Error::Argument(format!(
            "dataset `{}` has no node labels",
            dataset.name
        )));
    }
    let mut values: Vec<i64> = dataset
        .graphs()
        .iter()
        .flat_map(|g| g.node_labels().unwrap().iter().copied())
        .collect();
    values.sort_unstable();
    values.dedup();
    let hot = dataset
        .graphs()
        .iter()
        .flat_map(|g| g.node_labels().unwrap().iter())
        .map(|l| vec![values.binary_search(l).expect("label present")])
        .collect();
    AttributeMatrix::from_hot_columns(values.len(), hot)
}

pub fn build_attributes(dataset: &GraphDataset, mode: AttributeMode) -> Result<AttributeMatrix> {
    match mode {
        AttributeMode::Degree => degree_attributes(dataset),
        AttributeMode::NodeLabels => node_label_attributes(dataset),
        AttributeMode::Both if dataset.has_node_labels() => {
            let deg = degree_attributes(dataset)?;
            let lab = node_label_attributes(dataset)?;
            AttributeMatrix::concat(&[&deg, &lab])
        }
        AttributeMode::Both => degree_attributes(dataset),
    }
}
