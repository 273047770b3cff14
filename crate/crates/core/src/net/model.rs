use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::AdamState;
use super::layer::{Dense, LevelNet};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Architecture of a network over an `L`-level decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Attribute dimension `p`.
    pub attribute_dim: usize,
    /// `n(l)` for `l = 1..=L`.
    pub alphabet_sizes: Vec<usize>,
    /// Layer widths per level `0..=L`; the last width of level `l` is `d_l`.
    pub widths: Vec<Vec<usize>>,
    pub class_count: usize,
    /// Leaky ReLU slope.
    pub alpha: f64,
}

impl ModelSpec {
    pub fn levels(&self) -> usize {
        self.widths.len()
    }

    /// Input dimension of level `l`: `p` at the bottom, `n(l)·d_{l-1}` above.
    pub fn input_dim(&self, l: usize) -> usize {
        if l == 0 {
            self.attribute_dim
        } else {
            self.alphabet_sizes[l - 1] * self.output_dim(l - 1)
        }
    }

    pub fn output_dim(&self, l: usize) -> usize {
        *self.widths[l].last().expect("validated non-empty")
    }

    pub fn validate(&self) -> Result<()> {
        if self.widths.is_empty() {
            return Err(Error::Argument("at least one level of widths is required".into()));
        }
        if self.alphabet_sizes.len() + 1 != self.widths.len() {
            return Err(Error::shape(
                "model levels",
                format!("{} width lists", self.alphabet_sizes.len() + 1),
                self.widths.len(),
            ));
        }
        if let Some(l) = self.widths.iter().position(|w| w.is_empty() || w.contains(&0)) {
            return Err(Error::Argument(format!(
                "level {l} widths must be non-empty and positive"
            )));
        }
        if self.attribute_dim == 0 || self.class_count == 0 || self.alphabet_sizes.contains(&0) {
            return Err(Error::Argument(
                "attribute dim, class count and alphabet sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-level extraction networks, the classifier head and optimizer state.
#[derive(Clone, Debug, PartialEq)]
pub struct SaenModel<T> {
    pub nets: Vec<LevelNet<T>>,
    /// Affine map `d_L -> class_count` producing logits.
    pub classifier: Dense<T>,
    pub adam: AdamState<T>,
    pub seed: u64,
}

/// Gradients laid out like [`SaenModel::layers`].
pub type Gradients<T> = Vec<Dense<T>>;

impl<T: Real> SaenModel<T> {
    pub fn new(spec: &ModelSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = <T as Real>::from_f64(spec.alpha);
        let nets = (0..spec.levels())
            .map(|l| {
                let mut dims = vec![spec.input_dim(l)];
                dims.extend(&spec.widths[l]);
                LevelNet::new(l, &dims, alpha, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        let classifier = Dense::glorot(spec.output_dim(spec.levels() - 1), spec.class_count, &mut rng);
        let mut model = Self {
            nets,
            classifier,
            adam: AdamState::default(),
            seed,
        };
        model.adam = AdamState::for_layers(&model.layers());
        Ok(model)
    }

    pub fn top_level(&self) -> usize {
        self.nets.len() - 1
    }

    pub fn class_count(&self) -> usize {
        self.classifier.outputs()
    }

    /// All dense layers: level 0 bottom-up, then the classifier.
    pub fn layers(&self) -> Vec<&Dense<T>> {
        self.nets
            .iter()
            .flat_map(|n| n.layers.iter())
            .chain(std::iter::once(&self.classifier))
            .collect()
    }

    pub fn layers_mut(&mut self) -> Vec<&mut Dense<T>> {
        self.nets
            .iter_mut()
            .flat_map(|n| n.layers.iter_mut())
            .chain(std::iter::once(&mut self.classifier))
            .collect()
    }

    /// Human-readable path of each entry of [`Self::layers`].
    pub fn layer_paths(&self) -> Vec<String> {
        self.nets
            .iter()
            .flat_map(|n| (0..n.layers.len()).map(move |k| format!("level{}.layer{}", n.level, k)))
            .chain(std::iter::once("classifier".to_string()))
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers().iter().map(|l| l.param_count()).sum()
    }

    pub fn flat_params(&self) -> Vec<T> {
        self.layers()
            .into_iter()
            .flat_map(|l| l.iter_params().copied())
            .collect()
    }

    pub fn set_flat_params(&mut self, params: &[T]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::shape("flat parameters", self.param_count(), params.len()));
        }
        let mut it = params.iter();
        for layer in self.layers_mut() {
            for p in layer.iter_params_mut() {
                *p = *it.next().unwrap();
            }
        }
        Ok(())
    }

    pub fn zero_gradients(&self) -> Gradients<T> {
        self.layers()
            .iter()
            .map(|l| Dense::zeros(l.inputs(), l.outputs()))
            .collect()
    }
}

/// Gradients in the order of [`SaenModel::flat_params`].
pub fn flatten_gradients<T: Real>(grads: &Gradients<T>) -> Vec<T> {
    grads.iter().flat_map(|g| g.iter_params().copied()).collect()
}
