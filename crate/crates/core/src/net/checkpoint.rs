//! `SAEN1` model checkpoints: a magic line followed by JSON holding the
//! layer dimensions, flattened parameters, Adam moments and the seed.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::adam::AdamState;
use super::layer::{Dense, LevelNet};
use super::model::SaenModel;
use crate::error::{Error, Result};
use crate::hdecomp::io::{expect_magic, write_magic};
use crate::scalar::Real;

pub const SAEN_MAGIC: &str = "SAEN1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointRecord {
    version: u32,
    seed: u64,
    alpha: f64,
    /// `[input, hidden.., output]` per level.
    layer_dims: Vec<Vec<usize>>,
    classifier_dims: (usize, usize),
    params: Vec<f64>,
    adam_step: u64,
    adam_m: Vec<f64>,
    adam_v: Vec<f64>,
}

fn flatten<T: Real>(layers: &[Dense<T>]) -> Vec<f64> {
    layers
        .iter()
        .flat_map(|l| l.iter_params().map(|v| v.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

pub fn write_checkpoint<T: Real, W: Write>(model: &SaenModel<T>, mut w: W) -> Result<()> {
    let record = CheckpointRecord {
        version: 1,
        seed: model.seed,
        alpha: model.nets[0].alpha.to_f64().unwrap_or(f64::NAN),
        layer_dims: model.nets.iter().map(LevelNet::layer_dims).collect(),
        classifier_dims: (model.classifier.inputs(), model.classifier.outputs()),
        params: model
            .flat_params()
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect(),
        adam_step: model.adam.step,
        adam_m: flatten(&model.adam.m),
        adam_v: flatten(&model.adam.v),
    };
    write_magic(&mut w, SAEN_MAGIC)?;
    serde_json::to_writer(&mut w, &record).map_err(|e| Error::Serialization(e.to_string()))?;
    w.flush().map_err(|e| Error::Serialization(e.to_string()))
}

fn fill<T: Real>(layers: &mut [Dense<T>], values: &[f64]) -> Result<()> {
    let needed: usize = layers.iter().map(Dense::param_count).sum();
    if values.len() != needed {
        return Err(Error::Serialization(format!(
            "expected {needed} values, found {}",
            values.len()
        )));
    }
    let mut it = values.iter();
    for l in layers {
        for p in l.iter_params_mut() {
            *p = <T as Real>::from_f64(*it.next().unwrap());
        }
    }
    Ok(())
}

pub fn read_checkpoint<T: Real, R: Read>(r: R) -> Result<SaenModel<T>> {
    let reader = expect_magic(r, SAEN_MAGIC)?;
    let rec: CheckpointRecord = serde_json::from_reader(reader).map_err(|e| Error::Serialization(e.to_string()))?;
    if rec.version != 1 {
        return Err(Error::Serialization(format!("unsupported version {}", rec.version)));
    }
    let alpha = <T as Real>::from_f64(rec.alpha);
    let nets = rec
        .layer_dims
        .iter()
        .enumerate()
        .map(|(level, dims)| {
            if dims.len() < 2 {
                return Err(Error::Serialization(format!("level {level} has no layers")));
            }
            Ok(LevelNet {
                level,
                layers: dims.windows(2).map(|w| Dense::zeros(w[0], w[1])).collect(),
                alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let classifier = Dense::zeros(rec.classifier_dims.0, rec.classifier_dims.1);
    let mut model = SaenModel {
        nets,
        classifier,
        adam: AdamState::default(),
        seed: rec.seed,
    };
    let params: Vec<T> = rec.params.iter().map(|&v| <T as Real>::from_f64(v)).collect();
    model
        .set_flat_params(&params)
        .map_err(|e| Error::Serialization(e.to_string()))?;
    let mut adam = AdamState::for_layers(&model.layers());
    fill(&mut adam.m, &rec.adam_m)?;
    fill(&mut adam.v, &rec.adam_v)?;
    adam.step = rec.adam_step;
    model.adam = adam;
    Ok(model)
}
