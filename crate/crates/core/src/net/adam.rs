use super::layer::Dense;
use super::model::{Gradients, SaenModel};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates, one per model layer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<Dense<T>>,
    pub v: Vec<Dense<T>>,
    pub step: u64,
}

impl<T: Real> AdamState<T> {
    pub fn for_layers(layers: &[&Dense<T>]) -> Self {
        let zeros: Vec<Dense<T>> = layers.iter().map(|l| Dense::zeros(l.inputs(), l.outputs())).collect();
        Self {
            m: zeros.clone(),
            v: zeros,
            step: 0,
        }
    }
}

/// One bias-corrected Adam update of every parameter.
pub fn adam_step<T: Real>(model: &mut SaenModel<T>, grads: &Gradients<T>, cfg: &AdamConfig) -> Result<()> {
    let paths = model.layer_paths();
    let layers = model.layers();
    if grads.len() != layers.len() {
        return Err(Error::shape("gradient layers", layers.len(), grads.len()));
    }
    for ((g, l), path) in grads.iter().zip(&layers).zip(&paths) {
        if !g.same_shape(l) {
            return Err(Error::shape(
                "gradient shape",
                format!("{:?}", l.weight.dim()),
                format!("{path}: {:?}", g.weight.dim()),
            ));
        }
        if let Some(i) = g.iter_params().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteGradient {
                path: format!("{path}[{i}]"),
            });
        }
    }

    let state = &mut model.adam;
    state.step += 1;
    let t = state.step as i32;
    let b1 = <T as Real>::from_f64(cfg.beta1);
    let b2 = <T as Real>::from_f64(cfg.beta2);
    let one = T::one();
    let lr = <T as Real>::from_f64(cfg.lr);
    let eps = <T as Real>::from_f64(cfg.epsilon);
    let bias1 = one - b1.powi(t);
    let bias2 = one - b2.powi(t);

    let mut m_all = std::mem::take(&mut model.adam.m);
    let mut v_all = std::mem::take(&mut model.adam.v);
    for (((layer, g), m), v) in model
        .layers_mut()
        .into_iter()
        .zip(grads)
        .zip(&mut m_all)
        .zip(&mut v_all)
    {
        let params = layer.iter_params_mut();
        let gs = g.iter_params();
        let ms = m.iter_params_mut();
        let vs = v.iter_params_mut();
        for (((p, &gi), mi), vi) in params.zip(gs).zip(ms).zip(vs) {
            *mi = b1 * *mi + (one - b1) * gi;
            *vi = b2 * *vi + (one - b2) * gi * gi;
            let m_hat = *mi / bias1;
            let v_hat = *vi / bias2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    model.adam.m = m_all;
    model.adam.v = v_all;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::ModelSpec;

    fn tiny() -> SaenModel<f64> {
        let spec = ModelSpec {
            attribute_dim: 1,
            alphabet_sizes: vec![],
            widths: vec![vec![1]],
            class_count: 1,
            alpha: 0.01,
        };
        SaenModel::new(&spec, 0).unwrap()
    }

    fn grads_with(model: &SaenModel<f64>, value: f64) -> Gradients<f64> {
        let mut g = model.zero_gradients();
        for d in &mut g {
            d.weight.fill(value);
            d.bias.fill(value);
        }
        g
    }

    #[test]
    fn zero_gradient_leaves_params_and_decays_moments() {
        let mut model = tiny();
        let p0 = model.flat_params();
        let zero = model.zero_gradients();
        adam_step(&mut model, &zero, &AdamConfig::default()).unwrap();
        assert_eq!(model.flat_params(), p0);
        assert_eq!(model.adam.step, 1);

        let ones = grads_with(&model, 1.0);
        adam_step(&mut model, &ones, &AdamConfig::default()).unwrap();
        let m1 = model.adam.m[0].weight[[0, 0]];
        let v1 = model.adam.v[0].weight[[0, 0]];
        adam_step(&mut model, &zero, &AdamConfig::default()).unwrap();
        assert_eq!(model.adam.m[0].weight[[0, 0]], 0.9 * m1);
        assert_eq!(model.adam.v[0].weight[[0, 0]], 0.999 * v1);
    }

    #[test]
    fn zero_learning_rate_is_a_no_op() {
        let mut model = tiny();
        let p0 = model.flat_params();
        let cfg = AdamConfig {
            lr: 0.0,
            ..AdamConfig::default()
        };
        let g = grads_with(&model, 0.3);
        adam_step(&mut model, &g, &cfg).unwrap();
        assert_eq!(model.flat_params(), p0);
    }

    #[test]
    fn constant_gradient_matches_scalar_recurrence() {
        let mut model = tiny();
        let cfg = AdamConfig {
            lr: 0.05,
            ..AdamConfig::default()
        };
        let g = 0.7;
        let mut p = model.classifier.weight[[0, 0]];
        let (mut m, mut v) = (0.0f64, 0.0f64);
        for t in 1..=3 {
            let grads = grads_with(&model, g);
            adam_step(&mut model, &grads, &cfg).unwrap();
            m = 0.9 * m + 0.1 * g;
            v = 0.999 * v + 0.001 * g * g;
            let m_hat = m / (1.0 - 0.9f64.powi(t));
            let v_hat = v / (1.0 - 0.999f64.powi(t));
            p -= 0.05 * m_hat / (v_hat.sqrt() + 1e-8);
        }
        assert!((model.classifier.weight[[0, 0]] - p).abs() < 1e-15);
    }

    #[test]
    fn non_finite_gradient_names_parameter() {
        let mut model = tiny();
        let mut g = model.zero_gradients();
        g[1].bias[0] = f64::NAN;
        match adam_step(&mut model, &g, &AdamConfig::default()) {
            Err(Error::NonFiniteGradient { path }) => assert_eq!(path, "classifier[1]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
