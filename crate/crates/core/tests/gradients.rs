mod common;

use common::*;
use saen::compression::domain_compress;
use saen::graph::{Graph, GraphDataset};
use saen::net::logits;
use saen::{Input, Model, Model32};

fn fixture() -> (GraphDataset, saen::Decomposition) {
    let ds = GraphDataset::new(
        "g",
        vec![
            Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap(),
            Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
            Graph::new(6, (1..6).map(|v| (v - 1, v))).unwrap(),
        ],
        &[0, 1, 2],
    )
    .unwrap();
    let h = decompose(&ds, &[0, 1, 2]);
    (ds, h)
}

/// Central differences over every parameter.
fn finite_differences(model: &Model, input: &Input, labels: &[usize], step: f64) -> Vec<f64> {
    let base = model.flat_params();
    let mut probe = model.clone();
    (0..base.len())
        .map(|i| {
            let mut p = base.clone();
            p[i] = base[i] + step;
            probe.set_flat_params(&p).unwrap();
            let up = loss_only(&probe, input, labels);
            p[i] = base[i] - step;
            probe.set_flat_params(&p).unwrap();
            let down = loss_only(&probe, input, labels);
            (up - down) / (2.0 * step)
        })
        .collect()
}

#[test]
fn backprop_matches_central_differences() {
    let (ds, h) = fixture();
    for compressed in [false, true] {
        let input = if compressed {
            Input::compressed(&domain_compress(&h).unwrap())
        } else {
            Input::uncompressed(&h)
        };
        let model = Model::new(&spec_for(&h, vec![vec![4], vec![4, 3], vec![3, 2]], 3), 21).unwrap();
        assert!(model.param_count() <= 1000);
        let (_, analytic) = loss_and_gradient(&model, &input, ds.labels());
        let numeric = finite_differences(&model, &input, ds.labels(), 1e-4);
        for (i, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
            assert!(
                rel_close(*a, *n, 1e-4, 1e-6),
                "param {i}: backprop {a}, differences {n}"
            );
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let (_, h) = fixture();
    let spec = spec_for(&h, vec![vec![4], vec![4, 3], vec![3, 2]], 3);
    let z64 = logits(&Model::new(&spec, 5).unwrap(), &Input::uncompressed(&h)).unwrap();
    let z32 = logits(
        &Model32::new(&spec, 5).unwrap(),
        &saen::net::NetInput::<f32>::uncompressed(&h),
    )
    .unwrap();
    for (a, b) in z64.iter().zip(z32.iter()) {
        assert!((a - *b as f64).abs() <= 1e-4 * a.abs().max(1.0));
    }
}
