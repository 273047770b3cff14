use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Affine layer `z = x·W + b` with `W` of shape `in x out`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    pub weight: Array2<T>,
    pub bias: Array1<T>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            weight: Array2::zeros((inputs, outputs)),
            bias: Array1::zeros(outputs),
        }
    }

    /// Weights uniform in `±sqrt(6 / (fan_in + fan_out))`, zero bias.
    pub fn glorot<R: Rng>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        let limit = (6.0 / (inputs + outputs).max(1) as f64).sqrt();
        Self {
            weight: Array2::from_shape_simple_fn((inputs, outputs), || {
                <T as Real>::from_f64(rng.gen_range(-limit..=limit))
            }),
            bias: Array1::zeros(outputs),
        }
    }

    pub fn inputs(&self) -> usize {
        self.weight.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.weight.ncols()
    }

    pub fn param_count(&self) -> usize {
        self.weight.len() + self.bias.len()
    }

    pub fn apply(&self, x: ArrayView2<'_, T>) -> Array2<T> {
        x.dot(&self.weight) + &self.bias
    }

    /// Parameters flattened as weights (row-major) then biases.
    pub fn iter_params(&self) -> impl Iterator<Item = &T> {
        self.weight.iter().chain(self.bias.iter())
    }

    pub fn iter_params_mut(&mut self) -> impl Iterator<Item = &mut T> {
        self.weight.iter_mut().chain(self.bias.iter_mut())
    }

    pub(crate) fn same_shape(&self, other: &Self) -> bool {
        self.weight.dim() == other.weight.dim() && self.bias.len() == other.bias.len()
    }
}

pub fn leaky_relu<T: Real>(x: T, alpha: T) -> T {
    if x >= T::zero() {
        x
    } else {
        alpha * x
    }
}

pub(crate) fn leaky_relu_grad<T: Real>(x: T, alpha: T) -> T {
    if x >= T::zero() {
        T::one()
    } else {
        alpha
    }
}

/// Per-level extraction network: a stack of dense layers, each followed by
/// Leaky ReLU.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelNet<T> {
    pub level: usize,
    pub layers: Vec<Dense<T>>,
    pub alpha: T,
}

/// Values kept from a level's forward pass for backpropagation.
#[derive(Clone, Debug)]
pub struct MlpCache<T> {
    /// Input to each layer; the first is the aggregate matrix.
    pub inputs: Vec<Array2<T>>,
    /// Pre-activation of each layer.
    pub pre: Vec<Array2<T>>,
}

impl<T: Real> LevelNet<T> {
    /// `dims = [input, hidden.., output]`.
    pub fn new<R: Rng>(level: usize, dims: &[usize], alpha: T, rng: &mut R) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::Argument(format!("level {level}: invalid layer dims {dims:?}")));
        }
        Ok(Self {
            level,
            layers: dims.windows(2).map(|w| Dense::glorot(w[0], w[1], rng)).collect(),
            alpha,
        })
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.input_dim()];
        dims.extend(self.layers.iter().map(Dense::outputs));
        dims
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().outputs()
    }

    pub fn forward_cached(&self, a: ArrayView2<'_, T>) -> Result<(Array2<T>, MlpCache<T>)> {
        if a.ncols() != self.input_dim() {
            return Err(Error::shape("extract input", self.input_dim(), a.ncols()));
        }
        let alpha = self.alpha;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut current = a.to_owned();
        for layer in &self.layers {
            let z = layer.apply(current.view());
            let out = z.mapv(|v| leaky_relu(v, alpha));
            inputs.push(current);
            pre.push(z);
            current = out;
        }
        Ok((current, MlpCache { inputs, pre }))
    }

    /// Backpropagates `d_out` (gradient w.r.t. the level output) and returns
    /// the gradient w.r.t. the level input plus per-layer parameter
    /// gradients.
    pub fn backward(&self, cache: &MlpCache<T>, d_out: Array2<T>) -> (Array2<T>, Vec<Dense<T>>) {
        let alpha = self.alpha;
        let mut grads = Vec::with_capacity(self.layers.len());
        let mut delta = d_out;
        for (k, layer) in self.layers.iter().enumerate().rev() {
            ndarray::Zip::from(&mut delta)
                .and(&cache.pre[k])
                .for_each(|d, &z| *d *= leaky_relu_grad(z, alpha));
            grads.push(Dense {
                weight: cache.inputs[k].t().dot(&delta),
                bias: delta.sum_axis(Axis(0)),
            });
            delta = delta.dot(&layer.weight.t());
        }
        grads.reverse();
        (delta, grads)
    }
}

/// Row-wise application of a level network: `H_l = f_l(A_l)`.
pub fn extract<T: Real>(net: &LevelNet<T>, a: ArrayView2<'_, T>) -> Result<Array2<T>> {
    net.forward_cached(a).map(|(h, _)| h)
}
