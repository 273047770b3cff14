//! Shift, aggregate and extract, level by level, with exact reverse-mode
//! gradients.

use ndarray::{s, Array2, ArrayView2, Axis};

use super::layer::{Dense, MlpCache};
use super::model::{Gradients, SaenModel};
use crate::compression::CompressedDecomposition;
use crate::error::{Error, Result};
use crate::hdecomp::HDecomposition;
use crate::scalar::{ExactScalar, Real};
use crate::sparse::CsrMatrix;

/// Numeric view of a decomposition ready for the network, either
/// uncompressed or compressed.
#[derive(Clone, Debug)]
pub struct NetInput<T> {
    /// Bottom attributes (`X` or `X^comp`).
    pub x: Array2<T>,
    /// `relations[l - 1][π]`.
    pub relations: Vec<Vec<CsrMatrix<T>>>,
    /// Class of each original top-level object when compressed.
    pub top_classes: Option<Vec<usize>>,
    /// Dataset graph id of each (original) top-level object, i.e. of each
    /// logits row.
    pub graph_ids: Vec<usize>,
}

fn to_real<T: Real, E: ExactScalar>(m: &CsrMatrix<E>) -> CsrMatrix<T> {
    m.map(|v| T::from_exact(&v))
}

impl<T: Real> NetInput<T> {
    pub fn uncompressed<E: ExactScalar>(h: &HDecomposition<E>) -> Self {
        Self {
            x: h.attributes().matrix().map(|v| <T as Real>::from_f64(v)).to_dense(),
            relations: (1..=h.top_level())
                .map(|l| h.relations(l).iter().map(|r| to_real(&r.matrix)).collect())
                .collect(),
            top_classes: None,
            graph_ids: h.top_index().to_vec(),
        }
    }

    pub fn compressed<E: ExactScalar>(c: &CompressedDecomposition<E>) -> Self {
        Self {
            x: c.x_comp().matrix().map(|v| <T as Real>::from_f64(v)).to_dense(),
            relations: (1..=c.top_level())
                .map(|l| c.relations(l).iter().map(to_real).collect())
                .collect(),
            top_classes: Some(c.pair(c.top_level()).classes().to_vec()),
            graph_ids: c.top_index().to_vec(),
        }
    }

    pub fn top_level(&self) -> usize {
        self.relations.len()
    }

    /// Number of logits rows.
    pub fn output_rows(&self) -> usize {
        self.graph_ids.len()
    }

    /// Stored entries touched by one pass: dense attribute cells plus
    /// relation nonzeros.
    pub fn working_entries(&self) -> usize {
        self.x.len() + self.relations.iter().flatten().map(CsrMatrix::nnz).sum::<usize>()
    }
}

/// `A_l`: column block `π` holds `R_{l,π} · H_{l-1}`.
pub fn shift_aggregate<T: Real>(relations: &[CsrMatrix<T>], h_prev: ArrayView2<'_, T>) -> Result<Array2<T>> {
    let rows = relations.first().map_or(0, CsrMatrix::rows);
    let d = h_prev.ncols();
    let mut a = Array2::zeros((rows, relations.len() * d));
    for (pi, r) in relations.iter().enumerate() {
        if r.rows() != rows {
            return Err(Error::shape("shift-aggregate relation rows", rows, r.rows()));
        }
        if r.cols() != h_prev.nrows() {
            return Err(Error::shape(
                "shift-aggregate relation columns",
                h_prev.nrows(),
                r.cols(),
            ));
        }
        r.mul_dense_into(h_prev, a.slice_mut(s![.., pi * d..(pi + 1) * d]))?;
    }
    Ok(a)
}

/// Everything the backward pass needs from a forward pass.
#[derive(Clone, Debug)]
pub struct ForwardTrace<T> {
    /// `A_l` per level.
    pub aggregates: Vec<Array2<T>>,
    /// `H_l` per level (compressed when the input is).
    pub representations: Vec<Array2<T>>,
    pub caches: Vec<MlpCache<T>>,
    /// Top representations after decompression, one row per original object.
    pub top: Array2<T>,
    pub logits: Array2<T>,
}

pub fn forward<T: Real>(model: &SaenModel<T>, input: &NetInput<T>) -> Result<ForwardTrace<T>> {
    if input.top_level() != model.top_level() {
        return Err(Error::shape(
            "decomposition levels",
            model.top_level() + 1,
            input.top_level() + 1,
        ));
    }
    let mut aggregates = Vec::with_capacity(model.nets.len());
    let mut representations: Vec<Array2<T>> = Vec::with_capacity(model.nets.len());
    let mut caches = Vec::with_capacity(model.nets.len());
    for (l, net) in model.nets.iter().enumerate() {
        let a = if l == 0 {
            input.x.clone()
        } else {
            shift_aggregate(&input.relations[l - 1], representations[l - 1].view())?
        };
        let (h, cache) = net.forward_cached(a.view())?;
        aggregates.push(a);
        representations.push(h);
        caches.push(cache);
    }
    let top_comp = representations.last().unwrap();
    let top = match &input.top_classes {
        Some(classes) => top_comp.select(Axis(0), classes),
        None => top_comp.clone(),
    };
    let logits = model.classifier.apply(top.view());
    Ok(ForwardTrace {
        aggregates,
        representations,
        caches,
        top,
        logits,
    })
}

/// Convenience wrapper returning only the logits.
pub fn logits<T: Real>(model: &SaenModel<T>, input: &NetInput<T>) -> Result<Array2<T>> {
    forward(model, input).map(|t| t.logits)
}

/// Gradients of every parameter given `d_logits`, the loss gradient with
/// respect to the logits.
pub fn backward<T: Real>(
    model: &SaenModel<T>,
    input: &NetInput<T>,
    trace: &ForwardTrace<T>,
    d_logits: ArrayView2<'_, T>,
) -> Result<Gradients<T>> {
    if d_logits.dim() != trace.logits.dim() {
        return Err(Error::shape(
            "logit gradient",
            format!("{:?}", trace.logits.dim()),
            format!("{:?}", d_logits.dim()),
        ));
    }
    let classifier_grad = Dense {
        weight: trace.top.t().dot(&d_logits),
        bias: d_logits.sum_axis(Axis(0)),
    };
    let d_top = d_logits.dot(&model.classifier.weight.t());
    // Through D_L: scatter-add rows back onto their classes.
    let mut d_h = match &input.top_classes {
        Some(classes) => {
            let mut acc = Array2::zeros(trace.representations.last().unwrap().raw_dim());
            for (i, &c) in classes.iter().enumerate() {
                let mut row = acc.row_mut(c);
                row += &d_top.row(i);
            }
            acc
        }
        None => d_top,
    };

    let mut level_grads: Vec<Vec<Dense<T>>> = vec![Vec::new(); model.nets.len()];
    for l in (0..model.nets.len()).rev() {
        let (d_a, grads) = model.nets[l].backward(&trace.caches[l], d_h);
        level_grads[l] = grads;
        if l == 0 {
            break;
        }
        let h_prev = &trace.representations[l - 1];
        let d = h_prev.ncols();
        let mut d_prev = Array2::zeros(h_prev.raw_dim());
        for (pi, r) in input.relations[l - 1].iter().enumerate() {
            r.transpose_mul_dense_into(d_a.slice(s![.., pi * d..(pi + 1) * d]), d_prev.view_mut())?;
        }
        d_h = d_prev;
    }
    let mut out: Gradients<T> = level_grads.into_iter().flatten().collect();
    out.push(classifier_grad);
    Ok(out)
}
