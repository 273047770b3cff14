use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use saen::compression::{compression_report, domain_compress, write_compressed};
use saen::graph::{build_attributes, parse_tu_dataset, AttributeMode};
use saen::harness::{
    benchmark_compression, cross_validate, emit_report, load_config, load_dataset, run_training, Tabular, Timings,
};
use saen::hdecomp::{decomposition_stats, egnn_decompose, read_decomposition, write_decomposition};
use saen::net::write_checkpoint;
use saen::{Decomposition, Error, Rational};

#[derive(Parser)]
#[command(name = "saen", version, about = "Shift-aggregate-extract networks on graph datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the ego-graph decomposition of a dataset.
    Decompose {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        name: String,
        /// Comma-separated ascending radii.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<usize>,
        #[arg(long, value_enum, default_value = "both")]
        attributes: AttributeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compress a stored decomposition.
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Train one model on the whole dataset.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_compress: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the trained model here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Repeated stratified cross-validation.
    Cv {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time training epochs with and without compression.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        memory_cap_mb: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AttributeArg {
    Degree,
    NodeLabels,
    Both,
}

impl From<AttributeArg> for AttributeMode {
    fn from(a: AttributeArg) -> Self {
        match a {
            AttributeArg::Degree => AttributeMode::Degree,
            AttributeArg::NodeLabels => AttributeMode::NodeLabels,
            AttributeArg::Both => AttributeMode::Both,
        }
    }
}

enum Outcome {
    Done,
    Sentinel,
}

fn create(path: &Path) -> saen::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn open(path: &Path) -> saen::Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn run(cli: Cli) -> saen::Result<Outcome> {
    match cli.command {
        Command::Decompose {
            dataset,
            name,
            radii,
            attributes,
            out,
        } => {
            let ds = parse_tu_dataset(&dataset, &name)?;
            let x = build_attributes(&ds, attributes.into())?;
            let h: Decomposition = egnn_decompose(&ds, &x, &radii)?;
            write_decomposition(&h, create(&out)?)?;
            let stats = decomposition_stats(&h);
            println!(
                "{}: {} graphs, level sizes {:?}, {} stored entries",
                ds.name,
                ds.len(),
                stats.level_sizes,
                stats.stored_entries
            );
        }
        Command::Compress { input, out, report } => {
            let h: Decomposition = read_decomposition::<Rational, _>(open(&input)?)?;
            let c = domain_compress(&h)?;
            write_compressed(&c, create(&out)?)?;
            let r = compression_report(&h, &c);
            emit_report(&r, &report)?;
            print!("{}", r.table());
        }
        Command::Train {
            config,
            seed,
            no_compress,
            out,
            checkpoint,
        } => {
            let cfg = load_config(&config)?;
            let (model, report) = run_training(&cfg, seed, !no_compress)?;
            emit_report(&report, &out)?;
            if let Some(path) = checkpoint {
                write_checkpoint(&model, create(&path)?)?;
            }
            print!("{}", report.table());
        }
        Command::Cv { config, out } => {
            let cfg = load_config(&config)?;
            let mut timings = Timings::default();
            let ds = load_dataset(&cfg, &mut timings)?;
            let total = cfg.cv.folds * cfg.cv.repeats;
            let report = cross_validate(&cfg, ds, timings, |partial| {
                let last = partial.folds.last().expect("called after a fold");
                eprintln!(
                    "[{}/{}] repeat {} fold {}: {:.4}",
                    partial.folds.len(),
                    total,
                    last.repeat,
                    last.fold,
                    last.accuracy
                );
                emit_report(partial, &out)
            })?;
            emit_report(&report, &out)?;
            print!("{}", report.table());
        }
        Command::Bench {
            config,
            timeout,
            memory_cap_mb,
            out,
        } => {
            let cfg = load_config(&config)?;
            let report = benchmark_compression(&cfg, timeout, memory_cap_mb)?;
            emit_report(&report, &out)?;
            print!("{}", report.table());
            if report.has_sentinel() {
                return Ok(Outcome::Sentinel);
            }
        }
    }
    Ok(Outcome::Done)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. }
        | Error::Argument(_)
        | Error::Format { .. }
        | Error::MissingFile(_)
        | Error::NonCategorical { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Sentinel) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
