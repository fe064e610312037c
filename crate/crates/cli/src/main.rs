//! Command-line front end: train models, evaluate them, run benchmark
//! sweeps, and dump planes, all driven by flat key=value config files.
//!
//! Exit codes: 0 success, 2 input/config error, 3 runtime failure.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::RngCore;

use fast_ids::alm::{fit, AlmModel, Backend};
use fast_ids::bench::{fmt_sig, run_benchmark, BenchSpec, DatasetSpec};
use fast_ids::datasets::SpiralParams;
use fast_ids::error::Error;
use fast_ids::metrics::{accuracy, fvu};
use fast_ids::persist::{load_model, plane_rows, save_model};
use fast_ids::quant::Sample;

use config::RunConfig;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn runtime(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Config(_) | Error::Parse(_) | Error::Io(_) => {
                CliError { code: 2, message: e.to_string() }
            }
            Error::Metric(_) | Error::Generation(_) => {
                CliError { code: 3, message: e.to_string() }
            }
        }
    }
}

#[derive(Parser)]
#[command(name = "fastids", version, about = "Adaptive fuzzy approximation: train, evaluate, benchmark, and inspect plane models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from a config file and persist it
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed
        #[arg(long)]
        seed: Option<u64>,
        /// Output model directory (overrides config out_dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config backend
        #[arg(long)]
        backend: Option<Backend>,
    },
    /// Evaluate a persisted model; prints metrics JSON to stdout
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// Model directory (overrides config model_dir)
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a benchmark sweep; writes report CSV and summary JSON
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict to one backend
        #[arg(long)]
        backend: Option<Backend>,
        /// Force sequential runs (timing fidelity)
        #[arg(long)]
        serial: bool,
    },
    /// Print one plane as CSV rows to stdout
    DumpPlane {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        /// 1-based input index (overrides config)
        #[arg(long)]
        input: Option<usize>,
        /// 1-based partition cell (overrides config)
        #[arg(long)]
        cell: Option<usize>,
        /// Append the fuzzy-output width row (fast/crossbar)
        #[arg(long)]
        fuzzy: bool,
    },
}

fn generate_samples(
    cfg: &RunConfig,
    spec: &DatasetSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<Sample>, CliError> {
    let samples = match spec {
        DatasetSpec::TwoSpiral => {
            let p: SpiralParams = cfg.spiral_params()?;
            fast_ids::datasets::gen_two_spiral(n.div_ceil(2), &p, seed)?
        }
        DatasetSpec::ThreeRing => {
            let r1 = cfg.raw("ring_r1").map(str::parse).transpose().map_err(|e| CliError::input(format!("ring_r1: {e}")))?.unwrap_or(1.0);
            let r2 = cfg.raw("ring_r2").map(str::parse).transpose().map_err(|e| CliError::input(format!("ring_r2: {e}")))?.unwrap_or(4.0);
            let half = cfg.raw("ring_box").map(str::parse).transpose().map_err(|e| CliError::input(format!("ring_box: {e}")))?.unwrap_or(3.0);
            fast_ids::datasets::gen_three_ring(n.div_ceil(3), r1, r2, half, seed)?
        }
        other => other.generate(n, seed)?,
    };
    Ok(samples)
}

fn resolve_seed(cfg: &RunConfig, flag: Option<u64>) -> Result<(u64, bool), CliError> {
    if let Some(s) = flag {
        return Ok((s, false));
    }
    if let Some(s) = cfg.seed()? {
        return Ok((s, false));
    }
    Ok((rand::thread_rng().next_u64(), true))
}

fn cap_workers() {
    if let Ok(v) = std::env::var("FASTIDS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn cmd_train(
    config: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    backend: Option<Backend>,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let dataset = cfg.dataset()?;
    let (seed, generated) = resolve_seed(&cfg, seed)?;
    let mut alm = cfg.alm_config()?;
    alm.seed = seed;
    if let Some(b) = backend {
        alm.backend = b;
    }
    let out_dir = out
        .or_else(|| cfg.out_dir())
        .ok_or_else(|| CliError::input("no output directory (use --out or out_dir)"))?;

    let train = generate_samples(&cfg, &dataset, cfg.train_n()?, seed)?;
    let started = Instant::now();
    let model = fit(&train, &alm).map_err(|e| CliError::runtime(format!("training failed: {e}")))?;
    let fit_seconds = started.elapsed().as_secs_f64();

    save_model(&model, &out_dir)?;
    if cfg.pulse_trace()? && alm.backend == Backend::Crossbar {
        // re-train one traced plane per input to audit the pulse schedule
        write_pulse_trace(&model, &train, &out_dir)?;
    }

    let train_pred: Result<Vec<f64>, _> = train.iter().map(|s| model.predict(&s.x)).collect();
    let train_fvu = train_pred
        .ok()
        .and_then(|p| fvu(&p, &train.iter().map(|s| s.y).collect::<Vec<_>>()).ok());
    let summary = serde_json::json!({
        "backend": model.config.backend.to_string(),
        "dataset": dataset.name(),
        "train_n": train.len(),
        "dims": model.dims(),
        "partitions": model.scheme.counts(),
        "epochs": model.config.epochs,
        "seed": seed,
        "seed_generated": generated,
        "fit_seconds": fit_seconds,
        "plane_count": model.plane_count(),
        "stored_cells": model.stored_cells(),
        "train_fvu": train_fvu,
        // wide mean spread marks an input the output depends on only weakly
        "mean_spread_per_input": model.mean_spread_per_input().ok(),
        "model_dir": out_dir.display().to_string(),
    });
    std::fs::write(
        out_dir.join("training_summary.json"),
        serde_json::to_string_pretty(&summary).expect("json encodes"),
    )
    .map_err(|e| CliError::runtime(e.to_string()))?;
    println!("{summary}");
    Ok(())
}

fn write_pulse_trace(model: &AlmModel, train: &[Sample], out_dir: &Path) -> Result<(), CliError> {
    use fast_ids::crossbar::CrossbarPlane;
    use fast_ids::quant::quantize;
    let alm = &model.config;
    let mut text = String::from("input,row,col,amplitude_v,duration_s\n");
    for i in 0..model.dims() {
        let mut plane = CrossbarPlane::new(
            alm.resolution,
            alm.device,
            alm.circuit
                .unwrap_or_else(|| fast_ids::crossbar::CircuitParams::standard(&alm.device, alm.fast.alpha1, alm.fast.alpha2)),
            model.input_domains[i],
            model.output_domain,
        )?;
        plane.enable_trace();
        for s in train {
            if fast_ids::alm::route(&model.scheme, i, &s.x) != 0 {
                continue; // trace the first cell's plane only
            }
            let xq = quantize(s.x[i], &model.input_domains[i], alm.resolution.rsn_x)?;
            let yq = quantize(s.y, &model.output_domain, alm.resolution.rsn_y)?;
            plane.write_sample(xq, yq as f64)?;
        }
        for e in plane.take_trace() {
            text.push_str(&format!(
                "{},{:?},{},{},{}\n",
                i + 1,
                e.row,
                e.col,
                fmt_sig(e.amplitude),
                fmt_sig(e.duration)
            ));
        }
    }
    std::fs::write(out_dir.join("pulse_trace.csv"), text).map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(())
}

fn cmd_eval(config: &Path, model_dir: Option<PathBuf>, seed: Option<u64>) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let dir = model_dir
        .or_else(|| cfg.model_dir())
        .ok_or_else(|| CliError::input("no model directory (use --model or model_dir)"))?;
    if !dir.join("model.json").exists() {
        return Err(CliError::input(format!("{} is not a model directory", dir.display())));
    }
    let model = load_model(&dir)?;
    let dataset = cfg.dataset()?;
    let (seed, _) = resolve_seed(&cfg, seed)?;
    let test = generate_samples(&cfg, &dataset, cfg.test_n()?, seed)?;
    if test.first().map(|s| s.dim()) != Some(model.dims()) {
        return Err(CliError::input(format!(
            "model expects {} inputs but the dataset has {}",
            model.dims(),
            test.first().map(|s| s.dim()).unwrap_or(0)
        )));
    }
    let labels = cfg.labels()?.or_else(|| dataset.labels());
    let truths: Vec<f64> = test.iter().map(|s| s.y).collect();
    let started = Instant::now();
    let metrics = match labels {
        Some(labels) => {
            let pred: Result<Vec<f64>, _> =
                test.iter().map(|s| model.classify(&s.x, &labels)).collect();
            let acc = accuracy(&pred.map_err(|e| CliError::runtime(e.to_string()))?, &truths)
                .map_err(|e| CliError::runtime(e.to_string()))?;
            serde_json::json!({
                "accuracy": format!("{acc:.4}").parse::<f64>().expect("numeric"),
                "n": test.len(),
                "predict_seconds": started.elapsed().as_secs_f64(),
            })
        }
        None => {
            let pred: Result<Vec<f64>, _> = test.iter().map(|s| model.predict(&s.x)).collect();
            let value = fvu(&pred.map_err(|e| CliError::runtime(e.to_string()))?, &truths)
                .map_err(|e| CliError::runtime(e.to_string()))?;
            serde_json::json!({
                "fvu": format!("{value:.4}").parse::<f64>().expect("numeric"),
                "n": test.len(),
                "predict_seconds": started.elapsed().as_secs_f64(),
            })
        }
    };
    println!("{metrics}");
    Ok(())
}

fn cmd_bench(
    config: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    backend: Option<Backend>,
    serial_flag: bool,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let out_dir = out
        .or_else(|| cfg.out_dir())
        .ok_or_else(|| CliError::input("no output directory (use --out or out_dir)"))?;
    let (seed, _) = resolve_seed(&cfg, seed)?;
    let mut alm = cfg.alm_config()?;
    alm.seed = seed;
    let backends = match backend {
        Some(b) => vec![b],
        None => cfg.backends()?.unwrap_or_else(|| vec![alm.backend]),
    };
    let spec = BenchSpec {
        dataset: cfg.dataset()?,
        backends,
        train_sizes: cfg.train_sizes()?.unwrap_or_else(|| vec![cfg.train_n().unwrap_or(1000)]),
        test_n: cfg.test_n()?,
        runs: cfg.runs()?,
        seed,
        config: alm,
        serial: serial_flag || cfg.serial()?,
    };
    let report = run_benchmark(&spec).map_err(|e| CliError::runtime(format!("benchmark failed: {e}")))?;
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::runtime(e.to_string()))?;
    report.write_csv(&out_dir.join("report.csv"))?;
    report.write_json(&out_dir.join("summary.json"))?;
    for s in &report.summaries {
        println!(
            "{} {} n={} runs={}: {} {} (holdout {}), fit {}s",
            s.backend,
            s.dataset,
            s.train_n,
            s.runs,
            s.metric,
            fmt_sig(s.mean),
            fmt_sig(s.mean_holdout),
            fmt_sig(s.mean_fit_seconds)
        );
    }
    for (n, ratio) in &report.speedup {
        println!("speedup n={n}: classic/fast = {}", fmt_sig(*ratio));
    }
    Ok(())
}

fn cmd_dump_plane(
    config: &Path,
    model_dir: Option<PathBuf>,
    input: Option<usize>,
    cell: Option<usize>,
    fuzzy: bool,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let dir = model_dir
        .or_else(|| cfg.model_dir())
        .ok_or_else(|| CliError::input("no model directory (use --model or model_dir)"))?;
    let model = load_model(&dir)?;
    let input = input.unwrap_or(cfg.plane_input()?);
    let cell = cell.unwrap_or(cfg.plane_cell()?);
    let fuzzy = fuzzy || cfg.fuzzy_row()?;
    if input < 1 || cell < 1 {
        return Err(CliError::input("input and cell indices are 1-based"));
    }
    let plane = model
        .plane(input - 1, cell - 1)
        .ok_or_else(|| CliError::input(format!("no plane for input {input}, cell {cell}")))?;
    // crossbar planes dump as levels through the vector bridge
    let rows = match plane {
        fast_ids::alm::Plane::Crossbar(c) => {
            let v = c.read_vectors()?;
            vec![v.lower().to_vec(), v.upper().to_vec(), v.narrow().to_vec()]
        }
        other => plane_rows(other),
    };
    let mut out = String::new();
    for row in &rows {
        let fields: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    if fuzzy {
        let widths: Option<Vec<f64>> = match plane {
            fast_ids::alm::Plane::Fast(v) => Some(
                (1..=v.resolution().rsn_x)
                    .map(|x| v.fuzzy_output(x).expect("column in range").1)
                    .collect(),
            ),
            fast_ids::alm::Plane::Crossbar(c) => {
                let v = c.read_vectors()?;
                Some(
                    (1..=v.resolution().rsn_x)
                        .map(|x| v.fuzzy_output(x).expect("column in range").1)
                        .collect(),
                )
            }
            fast_ids::alm::Plane::Classic(_) => None,
        };
        if let Some(widths) = widths {
            let fields: Vec<String> = widths.iter().map(|v| fmt_sig(*v)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    cap_workers();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train { config, seed, out, backend } => cmd_train(&config, seed, out, backend),
        Command::Eval { config, model, seed } => cmd_eval(&config, model, seed),
        Command::Bench { config, seed, out, backend, serial } => {
            cmd_bench(&config, seed, out, backend, serial)
        }
        Command::DumpPlane { config, model, input, cell, fuzzy } => {
            cmd_dump_plane(&config, model, input, cell, fuzzy)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
