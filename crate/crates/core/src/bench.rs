//! Benchmark harness: seeded train/evaluate cycles over datasets, backends,
//! and training sizes, with wall-clock and stored-cell accounting.
//!
//! Regression runs report the FVU over the training samples (the metric's
//! defining sum runs over the training set) next to a held-out FVU;
//! classification runs report held-out accuracy. Each run's RNG streams
//! derive from (seed, run index), so runs can execute in any order or in
//! parallel without changing results.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alm::{fit, AlmConfig, Backend};
use crate::datasets::{gen_f1, gen_f2, gen_three_ring, gen_two_spiral, read_csv, SpiralParams};
use crate::error::{Error, Result};
use crate::metrics::{accuracy, fvu};
use crate::quant::Sample;

/// Which benchmark dataset a run draws from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSpec {
    F1,
    F2,
    TwoSpiral,
    ThreeRing,
    Csv(std::path::PathBuf),
}

impl DatasetSpec {
    pub fn name(&self) -> String {
        match self {
            DatasetSpec::F1 => "f1".into(),
            DatasetSpec::F2 => "f2".into(),
            DatasetSpec::TwoSpiral => "two_spiral".into(),
            DatasetSpec::ThreeRing => "three_ring".into(),
            DatasetSpec::Csv(p) => p.display().to_string(),
        }
    }

    /// Label values for classification datasets.
    pub fn labels(&self) -> Option<Vec<f64>> {
        match self {
            DatasetSpec::TwoSpiral => Some(vec![0.0, 1.0]),
            DatasetSpec::ThreeRing => Some(vec![0.0, 1.0, 2.0]),
            _ => None,
        }
    }

    /// Generate `n` samples (for the per-class generators, `n` is split
    /// evenly over the classes, rounded up).
    pub fn generate(&self, n: usize, seed: u64) -> Result<Vec<Sample>> {
        match self {
            DatasetSpec::F1 => Ok(gen_f1(n, seed)),
            DatasetSpec::F2 => Ok(gen_f2(n, seed)),
            DatasetSpec::TwoSpiral => {
                gen_two_spiral(n.div_ceil(2), &SpiralParams::default(), seed)
            }
            DatasetSpec::ThreeRing => gen_three_ring(n.div_ceil(3), 1.0, 4.0, 3.0, seed),
            DatasetSpec::Csv(path) => read_csv(path),
        }
    }
}

impl std::str::FromStr for DatasetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(DatasetSpec::F1),
            "f2" => Ok(DatasetSpec::F2),
            "two_spiral" => Ok(DatasetSpec::TwoSpiral),
            "three_ring" => Ok(DatasetSpec::ThreeRing),
            other => {
                if let Some(path) = other.strip_prefix("csv:") {
                    Ok(DatasetSpec::Csv(path.into()))
                } else {
                    Err(Error::input(format!(
                        "unknown dataset '{other}' (expected f1, f2, two_spiral, three_ring, or csv:<path>)"
                    )))
                }
            }
        }
    }
}

/// One benchmark request: every backend and training size in the spec runs
/// `runs` times with derived seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchSpec {
    pub dataset: DatasetSpec,
    pub backends: Vec<Backend>,
    pub train_sizes: Vec<usize>,
    /// Held-out evaluation size (total points; per-class generators round up).
    pub test_n: usize,
    pub runs: u32,
    pub seed: u64,
    /// Template config; backend, seed, and domains are set per run.
    pub config: AlmConfig,
    /// Run cycles sequentially (required for timing comparisons).
    pub serial: bool,
}

/// Metrics of one train/evaluate cycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub backend: Backend,
    pub dataset: String,
    pub partitions: String,
    pub train_n: usize,
    pub epochs: u32,
    pub seed: u64,
    pub metric: String,
    /// Headline metric: train-set FVU for regression, held-out accuracy for
    /// classification.
    pub value: f64,
    /// Held-out FVU for regression runs (equals `value` for classification).
    pub holdout: f64,
    pub fit_seconds: f64,
    pub predict_seconds: f64,
    pub stored_cells: usize,
}

/// Per-(backend, size) aggregate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub backend: Backend,
    pub dataset: String,
    pub train_n: usize,
    pub runs: u32,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub mean_holdout: f64,
    pub mean_fit_seconds: f64,
    pub mean_predict_seconds: f64,
    pub stored_cells: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<Summary>,
    /// classic/fast mean fit-time ratios per training size, when both ran.
    pub speedup: Vec<(usize, f64)>,
}

/// Seed for run number `run` of a spec seeded with `seed`.
pub fn run_seed(seed: u64, run: u32) -> u64 {
    seed.wrapping_add((run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Seed for the held-out set of the run seeded with `run_seed`.
pub fn test_seed(run_seed: u64) -> u64 {
    run_seed.wrapping_add(0xD1B5_4A32_D192_ED03)
}

fn one_run(spec: &BenchSpec, backend: Backend, train_n: usize, run: u32) -> Result<RunRecord> {
    let seed = run_seed(spec.seed, run);
    let train = spec.dataset.generate(train_n, seed)?;
    let test = spec.dataset.generate(spec.test_n, test_seed(seed))?;
    let mut config = spec.config.clone();
    config.backend = backend;
    config.seed = seed;

    let fit_start = Instant::now();
    let model = fit(&train, &config)?;
    let fit_seconds = fit_start.elapsed().as_secs_f64();

    let labels = spec.dataset.labels();
    let predict_start = Instant::now();
    let (metric, value, holdout) = match &labels {
        Some(labels) => {
            let predicted: Vec<f64> = test
                .iter()
                .map(|s| model.classify(&s.x, labels))
                .collect::<Result<_>>()?;
            let truths: Vec<f64> = test.iter().map(|s| s.y).collect();
            let acc = accuracy(&predicted, &truths)?;
            ("accuracy", acc, acc)
        }
        None => {
            let train_pred: Vec<f64> =
                train.iter().map(|s| model.predict(&s.x)).collect::<Result<_>>()?;
            let train_truth: Vec<f64> = train.iter().map(|s| s.y).collect();
            let test_pred: Vec<f64> =
                test.iter().map(|s| model.predict(&s.x)).collect::<Result<_>>()?;
            let test_truth: Vec<f64> = test.iter().map(|s| s.y).collect();
            (
                "fvu",
                fvu(&train_pred, &train_truth)?,
                fvu(&test_pred, &test_truth)?,
            )
        }
    };
    let predict_seconds = predict_start.elapsed().as_secs_f64();

    Ok(RunRecord {
        backend,
        dataset: spec.dataset.name(),
        partitions: config
            .partitions
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("x"),
        train_n,
        epochs: config.epochs,
        seed,
        metric: metric.into(),
        value,
        holdout,
        fit_seconds,
        predict_seconds,
        stored_cells: model.stored_cells(),
    })
}

/// Execute the whole spec.
pub fn run_benchmark(spec: &BenchSpec) -> Result<BenchReport> {
    if spec.runs == 0 {
        return Err(Error::config("runs must be at least 1"));
    }
    if spec.backends.is_empty() || spec.train_sizes.is_empty() {
        return Err(Error::config("at least one backend and one training size required"));
    }
    let mut records = Vec::new();
    for &backend in &spec.backends {
        for &train_n in &spec.train_sizes {
            let runs: Vec<Result<RunRecord>> = if spec.serial {
                (0..spec.runs)
                    .map(|run| one_run(spec, backend, train_n, run))
                    .collect()
            } else {
                (0..spec.runs)
                    .into_par_iter()
                    .map(|run| one_run(spec, backend, train_n, run))
                    .collect()
            };
            for r in runs {
                records.push(r?);
            }
        }
    }

    let mut summaries = Vec::new();
    for &backend in &spec.backends {
        for &train_n in &spec.train_sizes {
            let group: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.backend == backend && r.train_n == train_n)
                .collect();
            let n = group.len() as f64;
            let mean = group.iter().map(|r| r.value).sum::<f64>() / n;
            let var = group.iter().map(|r| (r.value - mean).powi(2)).sum::<f64>() / n;
            summaries.push(Summary {
                backend,
                dataset: spec.dataset.name(),
                train_n,
                runs: group.len() as u32,
                metric: group[0].metric.clone(),
                mean,
                std: var.sqrt(),
                mean_holdout: group.iter().map(|r| r.holdout).sum::<f64>() / n,
                mean_fit_seconds: group.iter().map(|r| r.fit_seconds).sum::<f64>() / n,
                mean_predict_seconds: group.iter().map(|r| r.predict_seconds).sum::<f64>() / n,
                stored_cells: group[0].stored_cells,
            });
        }
    }

    let mut speedup = Vec::new();
    for &train_n in &spec.train_sizes {
        let classic = summaries
            .iter()
            .find(|s| s.backend == Backend::Classic && s.train_n == train_n);
        let fast = summaries
            .iter()
            .find(|s| s.backend == Backend::Fast && s.train_n == train_n);
        if let (Some(c), Some(f)) = (classic, fast) {
            if f.mean_fit_seconds > 0.0 {
                speedup.push((train_n, c.mean_fit_seconds / f.mean_fit_seconds));
            }
        }
    }

    Ok(BenchReport { records, summaries, speedup })
}

/// Round to 6 significant digits for report CSVs.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = 6i32 - 1 - v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    let rounded = (v * scale).round() / scale;
    if digits <= 0 {
        format!("{rounded:.0}")
    } else {
        format!("{rounded:.*}", digits as usize)
    }
}

impl BenchReport {
    /// One row per run, 6-significant-digit numerics.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from(
            "backend,dataset,partitions,train_n,epochs,seed,metric,value,holdout,fit_seconds,predict_seconds,stored_cells\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.backend,
                r.dataset,
                r.partitions,
                r.train_n,
                r.epochs,
                r.seed,
                r.metric,
                fmt_sig(r.value),
                fmt_sig(r.holdout),
                fmt_sig(r.fit_seconds),
                fmt_sig(r.predict_seconds),
                r.stored_cells
            ));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        #[derive(Serialize)]
        struct JsonReport<'a> {
            summaries: &'a [Summary],
            speedup: &'a [(usize, f64)],
        }
        let json = serde_json::to_string_pretty(&JsonReport {
            summaries: &self.summaries,
            speedup: &self.speedup,
        })
        .map_err(|e| Error::Parse(format!("report encode: {e}")))?;
        std::fs::write(path, json)?;
        Ok(())
    }
}
