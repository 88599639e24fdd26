//! Subcommand implementations. Each one reads files, calls the library
//! crates, and writes files; nothing here holds state between runs.

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use magic_core::codec;
use magic_core::features::{assemble, read_csv, write_csv, Encoding, LAYOUT_VERSION};
use magic_core::generators::{gen_dataset, GeneratorConfig, RqcConfig, TimConfig};
use magic_core::shadows::ShadowMode;
use magic_core::sre::{clamp_for_report, label_dataset, sre, SreParams};
use magic_harness::report::{emit_report, Report};
use magic_harness::runtime::{run_runtime_analysis, RuntimeSpec};
use magic_harness::specfile;
use magic_ml::cv::{grid_search_cv, ModelGrid};
use magic_ml::model::{save_model, TrainedModel};
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a seeded circuit dataset as JSONL.
    Generate(GenerateArgs),
    /// Label circuits with their exact stabilizer Rényi entropy.
    Label(LabelArgs),
    /// Extract feature matrices from labeled circuits into CSV.
    Features(FeaturesArgs),
    /// Grid-search, cross-validate, and fit a regressor on a feature CSV.
    Train(TrainArgs),
    /// Run an experiment spec file and emit a report directory.
    Experiment(ExperimentArgs),
    /// Runtime scaling analysis: exact labeling vs model prediction.
    Runtime(RuntimeArgs),
    /// Print the exact entropy of one serialized circuit line.
    Sre(SreArgs),
    /// Print version information.
    Version,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Circuit family: rqc or tim.
    #[arg(long)]
    family: String,
    /// Number of qubits (2–6 for the standard datasets).
    #[arg(long)]
    qubits: usize,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// RQC gate-count range override.
    #[arg(long, default_value_t = 0)]
    gate_min: usize,
    #[arg(long, default_value_t = 100)]
    gate_max: usize,
    /// TIM Trotter-step range override.
    #[arg(long, default_value_t = 1)]
    trotter_min: usize,
    #[arg(long, default_value_t = 5)]
    trotter_max: usize,
    /// TIM angle range overrides (radians); defaults span [0, 2π).
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    phi_min: Option<f64>,
    #[arg(long)]
    phi_max: Option<f64>,
}

#[derive(Args, Debug)]
pub struct LabelArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FeaturesArgs {
    /// circuit_level, shadow, or combined.
    #[arg(long)]
    encoding: String,
    /// exact or sampled.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Snapshots per circuit in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    shots: usize,
    /// Required in sampled mode.
    #[arg(long)]
    seed: Option<u64>,
    /// Embed shadow features into the 6-qubit layout (required for
    /// mixed-width datasets).
    #[arg(long)]
    pad: bool,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// rfr or svr.
    #[arg(long)]
    model: String,
    /// Grid TOML with [rfr] / [svr] tables; defaults used when absent.
    #[arg(long)]
    grid: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Where to write the cross-validation report.
    #[arg(long)]
    cv_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RuntimeArgs {
    #[arg(long, default_value_t = 2)]
    qubits_min: usize,
    #[arg(long, default_value_t = 6)]
    qubits_max: usize,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 40)]
    gate_min: usize,
    #[arg(long, default_value_t = 59)]
    gate_max: usize,
    /// Training circuits per qubit count for the timed models.
    #[arg(long, default_value_t = 400)]
    train_count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SreArgs {
    /// One circuit in the JSONL line format.
    #[arg(long)]
    circuit: String,
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(args) => generate(args),
        Command::Label(args) => label(args),
        Command::Features(args) => features(args),
        Command::Train(args) => train(args),
        Command::Experiment(args) => experiment(args),
        Command::Runtime(args) => runtime(args),
        Command::Sre(args) => sre_one(args),
        Command::Version => {
            println!("magic-meter {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let config = match args.family.as_str() {
        "rqc" => {
            let mut cfg = RqcConfig::new(args.qubits, args.seed, args.count);
            cfg.gate_count_range = (args.gate_min, args.gate_max);
            GeneratorConfig::Rqc(cfg)
        }
        "tim" => {
            let mut cfg = TimConfig::new(args.qubits, args.seed, args.count);
            cfg.trotter_step_range = (args.trotter_min, args.trotter_max);
            cfg.theta_range = (
                args.theta_min.unwrap_or(0.0),
                args.theta_max.unwrap_or(TAU),
            );
            cfg.phi_range = (args.phi_min.unwrap_or(0.0), args.phi_max.unwrap_or(TAU));
            GeneratorConfig::Tim(cfg)
        }
        other => bail!("unknown family `{other}` (expected rqc or tim)"),
    };
    let circuits = gen_dataset(&config)?;
    codec::write_circuits(&args.out, &circuits)?;
    log::info!("wrote {} circuits to {}", circuits.len(), args.out.display());
    Ok(())
}

fn label(args: LabelArgs) -> Result<()> {
    let circuits = codec::read_circuits(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let total = circuits.len();
    let results = label_dataset(circuits, &SreParams::default());
    let mut labeled = Vec::with_capacity(results.len());
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok(l) => labeled.push(l),
            Err(e) => log::warn!("skipping circuit {i}: {e}"),
        }
    }
    codec::write_labeled(&args.out, &labeled)?;
    log::info!(
        "labeled {}/{} circuits into {}",
        labeled.len(),
        total,
        args.out.display()
    );
    Ok(())
}

fn parse_encoding(name: &str) -> Result<Encoding> {
    Encoding::from_name(name).with_context(|| format!("unknown encoding `{name}`"))
}

fn features(args: FeaturesArgs) -> Result<()> {
    let encoding = parse_encoding(&args.encoding)?;
    let mode = match args.mode.as_str() {
        "exact" => ShadowMode::Exact,
        "sampled" => {
            let seed = args
                .seed
                .context("--seed is required in sampled mode (no silent entropy)")?;
            ShadowMode::Sampled {
                shots: args.shots,
                seed,
            }
        }
        other => bail!("unknown mode `{other}` (expected exact or sampled)"),
    };
    let labeled = codec::read_labeled(&args.input)?;
    let dataset = assemble(&labeled, encoding, mode, args.pad)?;
    write_csv(&dataset, &args.out)?;
    log::info!(
        "wrote {}x{} feature matrix to {}",
        dataset.rows.len(),
        dataset.width(),
        args.out.display()
    );
    Ok(())
}

fn train(args: TrainArgs) -> Result<()> {
    let dataset = read_csv(&args.input)?;
    let grid_section = match &args.grid {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<specfile::GridSection>(&text)?
        }
        None => specfile::GridSection::default(),
    };
    let grid: ModelGrid = match args.model.as_str() {
        "rfr" => specfile::rfr_grid_from(&grid_section),
        "svr" => specfile::svr_grid_from(&grid_section).map_err(anyhow::Error::from)?,
        other => bail!("unknown model `{other}` (expected rfr or svr)"),
    };
    let x: Vec<Vec<f64>> = dataset.rows.iter().map(|r| r.features.clone()).collect();
    let y: Vec<f64> = dataset.rows.iter().map(|r| r.label).collect();
    let (payload, cv) = grid_search_cv(&x, &y, &grid, args.folds, args.seed)?;
    let model = TrainedModel {
        layout_version: LAYOUT_VERSION,
        feature_names: dataset.feature_names.clone(),
        payload,
    };
    save_model(&model, &args.out)?;
    if let Some(cv_path) = &args.cv_out {
        std::fs::write(cv_path, serde_json::to_string_pretty(&cv)?)?;
    }
    println!(
        "selected {} (cv mse {:.6}) over {} cells; model written to {}",
        cv.cells[cv.best_index].label,
        cv.cells[cv.best_index].mean_mse,
        cv.cells.len(),
        args.out.display()
    );
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.spec)
        .with_context(|| format!("reading {}", args.spec.display()))?;
    let spec = specfile::parse_spec(&text)?;
    let base = args
        .spec
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let labeled = specfile::load_datasets(&spec, &base)?;
    let report = specfile::run_spec(&spec, &labeled)?;
    let written = emit_report(&report, &args.out)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn runtime(args: RuntimeArgs) -> Result<()> {
    let spec = RuntimeSpec {
        qubit_range: (args.qubits_min, args.qubits_max),
        samples: args.samples,
        gate_range: (args.gate_min, args.gate_max),
        train_count: args.train_count,
        seed: args.seed,
        warmup: 3,
    };
    let runtime = run_runtime_analysis(&spec)?;
    let mut report = Report::new("runtime", vec![]);
    report.runtime = Some(runtime);
    let written = emit_report(&report, &args.out)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn sre_one(args: SreArgs) -> Result<()> {
    let circuit = codec::deserialize(&args.circuit)?;
    let state = magic_core::sim::simulate(&circuit)?;
    let value = clamp_for_report(sre(&state, &SreParams::default())?);
    println!("{value:?}");
    Ok(())
}
