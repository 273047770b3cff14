//! End-to-end acceptance checks. Runs with a custom harness and prints one
//! `PASS`/`FAIL` line per criterion; exits non-zero if any fails.
//!
//! Criteria needing IMDB-BINARY read it from `$SAEN_DATA_DIR/IMDB-BINARY`
//! or `data/IMDB-BINARY`, and fail when it is absent.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use ndarray::array;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saen::compression::{compute_cd, domain_compress};
use saen::graph::{build_attributes, AttributeMode, Graph, GraphDataset};
use saen::harness::{benchmark_compression, load_config, run_cross_validation, ExperimentConfig, RunOutcome};
use saen::hdecomp::egnn_decompose;
use saen::net::{evaluate, logits, train, TrainConfig};
use saen::sparse::CsrMatrix;
use saen::{Decomposition, Input, Model, Rational};

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check {
        pass,
        detail: detail.into(),
    }
}

type Criterion = fn() -> Check;

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed <= Duration::from_secs(budget_secs)
}

fn golden_compression() -> Check {
    let t = Instant::now();
    let q = |n: i64, d: i64| Rational::new(n, d);
    let m = CsrMatrix::from_dense(
        array![[0, 0, 0], [1, 0, 1], [1, 1, 0], [0, 0, 0], [1, 1, 0]]
            .mapv(Rational::from)
            .view(),
    );
    let m_comp_expected = CsrMatrix::from_dense(array![[0, 0, 0], [1, 0, 1], [1, 1, 0]].mapv(Rational::from).view());
    let (z, h, o) = (q(0, 1), q(1, 2), q(1, 1));
    let c_expected = array![[h, z, z, h, z], [z, o, z, z, z], [z, z, h, z, h]];
    let d_expected = array![[o, z, z], [z, o, z], [z, z, o], [o, z, z], [z, z, o]];

    let cd = compute_cd(&m);
    let m_comp = cd.c().matmul(&m).unwrap();
    let ok = cd.c().to_dense() == c_expected
        && cd.d().to_dense() == d_expected
        && m_comp == m_comp_expected
        && cd.d().matmul(&m_comp).unwrap() == m
        && cd.c().matmul(cd.d()).unwrap() == CsrMatrix::identity(3);
    let elapsed = t.elapsed();
    check(
        ok && elapsed < Duration::from_secs(1),
        format!("exact C, D, M_comp and identities; {elapsed:?}"),
    )
}

fn compression_invariance() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (cases, draws) = (60, 5);
    let mut worst_logit = 0.0f64;
    let mut worst_grad = 0.0f64;
    let mut ok = true;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-12);
    for _ in 0..cases {
        let g = random_graph(&mut rng, 20);
        // The second graph is a relabelled copy half the time, so graph-level
        // classes merge too.
        let other = if rng.gen_bool(0.5) {
            let p = random_permutation(&mut rng, g.num_vertices());
            g.permuted(&p).unwrap()
        } else {
            random_graph(&mut rng, 20)
        };
        let labels = [rng.gen_range(0..2), rng.gen_range(0..2)];
        let ds = GraphDataset::new("c2", vec![g, other], &labels).unwrap();
        let radii = random_radii(&mut rng);
        let h = decompose(&ds, &radii);
        let full = Input::uncompressed(&h);
        let comp = Input::compressed(&domain_compress(&h).unwrap());
        for _ in 0..draws {
            let spec = spec_for(&h, vec![vec![4], vec![4, 3], vec![3, 2]], 2);
            let model = Model::new(&spec, rng.gen()).unwrap();
            let (zf, zc) = (logits(&model, &full).unwrap(), logits(&model, &comp).unwrap());
            for (a, b) in zf.iter().zip(zc.iter()) {
                worst_logit = worst_logit.max(rel(*a, *b));
                ok &= rel_close(*a, *b, 1e-5, 1e-12);
            }
            let (_, gf) = loss_and_gradient(&model, &full, ds.labels());
            let (_, gc) = loss_and_gradient(&model, &comp, ds.labels());
            for (a, b) in gf.iter().zip(&gc) {
                worst_grad = worst_grad.max(rel(*a, *b));
                ok &= rel_close(*a, *b, 1e-5, 1e-12);
            }
        }
    }
    let elapsed = t.elapsed();
    check(
        ok && within(elapsed, 120),
        format!(
            "{cases} cases x {draws} draws; worst relative logit {worst_logit:.2e}, gradient {worst_grad:.2e}; {elapsed:?}"
        ),
    )
}

fn gradient_correctness() -> Check {
    let t = Instant::now();
    let ds = GraphDataset::new(
        "fd",
        vec![
            Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap(),
            Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
            Graph::new(6, (1..6).map(|v| (v - 1, v))).unwrap(),
            Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap(),
        ],
        &[0, 1, 2, 1],
    )
    .unwrap();
    let h = decompose(&ds, &[0, 1, 2]);
    let input = Input::uncompressed(&h);
    let model = Model::new(&spec_for(&h, vec![vec![5], vec![5, 4], vec![4, 3]], 3), 77).unwrap();
    let n = model.param_count();
    let (_, analytic) = loss_and_gradient(&model, &input, ds.labels());
    let base = model.flat_params();
    let mut probe = model.clone();
    let step = 1e-4;
    let mut worst = 0.0f64;
    let mut ok = n <= 1000;
    for i in 0..n {
        let mut p = base.clone();
        p[i] += step;
        probe.set_flat_params(&p).unwrap();
        let up = loss_only(&probe, &input, ds.labels());
        p[i] = base[i] - step;
        probe.set_flat_params(&p).unwrap();
        let down = loss_only(&probe, &input, ds.labels());
        let numeric = (up - down) / (2.0 * step);
        let a = analytic[i];
        worst = worst.max((a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6));
        ok &= rel_close(a, numeric, 1e-4, 1e-6);
    }
    let elapsed = t.elapsed();
    check(
        ok && within(elapsed, 60),
        format!("{n} parameters; worst relative error {worst:.2e}; {elapsed:?}"),
    )
}

fn permutation_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(2..=20);
        let g = random_graph(&mut rng, n);
        let labels = (0..g.num_vertices()).map(|_| rng.gen_range(0..4)).collect();
        let g = g.with_node_labels(labels).unwrap();
        let radii = random_radii(&mut rng);
        let build = |g: Graph| -> Decomposition {
            let ds = GraphDataset::new("p", vec![g], &[0]).unwrap();
            egnn_decompose(&ds, &build_attributes(&ds, AttributeMode::Both).unwrap(), &radii).unwrap()
        };
        let h = build(g.clone());
        let model = Model::new(&spec_for(&h, vec![vec![4], vec![4, 3], vec![3]], 2), rng.gen()).unwrap();
        let z = logits(&model, &Input::uncompressed(&h)).unwrap();
        for _ in 0..5 {
            let p = random_permutation(&mut rng, g.num_vertices());
            let hp = build(g.permuted(&p).unwrap());
            let zp = logits(&model, &Input::uncompressed(&hp)).unwrap();
            for (a, b) in z.iter().zip(zp.iter()) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    check(
        worst <= 1e-6,
        format!("20 graphs x 5 permutations; worst logit difference {worst:.2e}"),
    )
}

fn repo_config(name: &str) -> ExperimentConfig {
    load_config(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../configs")
            .join(name),
    )
    .unwrap()
}

fn imdb_config() -> Result<ExperimentConfig, String> {
    let mut cfg = repo_config("imdb-binary.toml");
    cfg.dataset.path = dataset_dir("IMDB-BINARY");
    if !cfg.dataset.path.join("IMDB-BINARY_A.txt").is_file() {
        return Err(format!("IMDB-BINARY not found at {}", cfg.dataset.path.display()));
    }
    Ok(cfg)
}

fn imdb_ratio() -> Check {
    let cfg = match imdb_config() {
        Ok(c) => c,
        Err(e) => return check(false, e),
    };
    let t = Instant::now();
    let ds = saen::graph::parse_tu_dataset(&cfg.dataset.path, &cfg.dataset.name).unwrap();
    let x = build_attributes(&ds, cfg.dataset.attributes).unwrap();
    let h: Decomposition = egnn_decompose(&ds, &x, &[0, 1, 2]).unwrap();
    let c = domain_compress(&h).unwrap();
    let r = saen::compression::compression_report(&h, &c);
    let elapsed = t.elapsed();
    check(
        r.stored_entry_ratio <= 0.6 && within(elapsed, 300),
        format!(
            "stored-entry ratio {:.3} (bytes {:.3}); {elapsed:?}",
            r.stored_entry_ratio, r.serialized_byte_ratio
        ),
    )
}

fn imdb_speedup() -> Check {
    let mut cfg = match imdb_config() {
        Ok(c) => c,
        Err(e) => return check(false, e),
    };
    cfg.bench.epochs = 1;
    let t = Instant::now();
    let r = benchmark_compression(&cfg, Some(600.0), None).unwrap();
    let elapsed = t.elapsed();
    let detail = format!(
        "epoch uncompressed {}, compressed {}; {elapsed:?}",
        r.uncompressed.cell(),
        r.compressed.cell()
    );
    match (&r.uncompressed, &r.compressed, r.speedup) {
        (RunOutcome::Completed { .. }, RunOutcome::Completed { .. }, Some(s)) => {
            check(s >= 2.0 && within(elapsed, 600), format!("speedup {s:.2}x; {detail}"))
        }
        _ => check(false, detail),
    }
}

fn single_cv(mut cfg: ExperimentConfig, threshold: f64) -> Check {
    cfg.cv.repeats = 1;
    cfg.cv.folds = 10;
    let t = Instant::now();
    let r = run_cross_validation(&cfg).unwrap();
    let elapsed = t.elapsed();
    let mean = r.summary.mean_accuracy;
    check(
        mean >= threshold && within(elapsed, 3600),
        format!(
            "{} mean accuracy {:.2}% ± {:.2}; {elapsed:?}",
            r.dataset.name,
            100.0 * mean,
            100.0 * r.summary.std_accuracy
        ),
    )
}

fn imdb_accuracy() -> Check {
    match imdb_config() {
        Ok(cfg) => single_cv(cfg, 0.66),
        Err(e) => check(false, e),
    }
}

fn mutag_accuracy() -> Check {
    single_cv(repo_config("mutag.toml"), 0.78)
}

fn toy_end_to_end() -> Check {
    let t = Instant::now();
    let ds = triangles_vs_paths();
    let h = decompose(&ds, &[0, 1]);
    let input = Input::compressed(&domain_compress(&h).unwrap());
    let spec = spec_for(&h, toy_widths(), 2);
    let mut cfg = TrainConfig {
        epochs: 50,
        ..TrainConfig::default()
    };
    cfg.adam.lr = TOY_LR;
    let run = || {
        let mut model = Model::new(&spec, 1).unwrap();
        let curve = train(&mut model, &input, ds.labels(), None, &cfg).unwrap();
        let acc = evaluate(&model, &input, ds.labels(), None).unwrap().accuracy;
        (curve, model.flat_params(), acc)
    };
    let (c1, p1, acc) = run();
    let (c2, p2, _) = run();
    let elapsed = t.elapsed();
    let deterministic = c1 == c2 && p1 == p2;
    check(
        acc == 1.0 && deterministic && within(elapsed, 30),
        format!(
            "accuracy {:.2}% after 50 epochs, deterministic {deterministic}; {elapsed:?}",
            100.0 * acc
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("1  worked compression example", golden_compression),
        ("2  compression invariance", compression_invariance),
        ("3  gradient correctness", gradient_correctness),
        ("4  permutation invariance", permutation_invariance),
        ("5  IMDB-BINARY stored-entry ratio <= 0.6", imdb_ratio),
        ("6  IMDB-BINARY epoch speedup >= 2x", imdb_speedup),
        ("7a IMDB-BINARY 10-fold accuracy >= 66%", imdb_accuracy),
        ("7b MUTAG 10-fold accuracy >= 78%", mutag_accuracy),
        ("8  toy end-to-end", toy_end_to_end),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            check(false, format!("panicked: {msg}"))
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
