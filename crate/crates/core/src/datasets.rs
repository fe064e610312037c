//! Benchmark dataset generators and CSV dataset IO.
//!
//! All generators are pure functions of their parameters and seed.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::quant::Sample;

/// `F1(x1, x2) = (1 + x1^-2 + x2^-1.5)^2` on `[1, 10]^2`.
pub fn f1(x1: f64, x2: f64) -> f64 {
    (1.0 + x1.powf(-2.0) + x2.powf(-1.5)).powi(2)
}

/// `F2(x1, x2) = sqrt(2 (sin x1 / x1)^2 + 3 (sin x2 / x2)^2)` on `[1, 10]^2`.
pub fn f2(x1: f64, x2: f64) -> f64 {
    (2.0 * (x1.sin() / x1).powi(2) + 3.0 * (x2.sin() / x2).powi(2)).sqrt()
}

fn gen_function(n: usize, seed: u64, f: impl Fn(f64, f64) -> f64) -> Vec<Sample> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x1 = rng.gen_range(1.0..10.0);
            let x2 = rng.gen_range(1.0..10.0);
            Sample { x: vec![x1, x2], y: f(x1, x2) }
        })
        .collect()
}

/// `n` samples of F1, inputs uniform on `[1, 10]`.
pub fn gen_f1(n: usize, seed: u64) -> Vec<Sample> {
    gen_function(n, seed, f1)
}

/// `n` samples of F2, inputs uniform on `[1, 10]`.
pub fn gen_f2(n: usize, seed: u64) -> Vec<Sample> {
    gen_function(n, seed, f2)
}

/// Two-spiral geometry: radius growth per radian, number of turns, and
/// starting radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralParams {
    pub pitch: f64,
    pub turns: f64,
    pub r0: f64,
}

impl Default for SpiralParams {
    fn default() -> Self {
        SpiralParams { pitch: 1.0 / std::f64::consts::PI, turns: 3.0, r0: 0.5 }
    }
}

/// Two interleaved spirals labeled 0 and 1, `n_per_class` points each.
///
/// Class 0 follows `r = pitch * (theta + 2 pi turns) + r0` with theta
/// stratified over `[-2 pi turns, 0]` (one jittered draw per stratum);
/// class 1 is the point reflection of the matched class-0 point.
pub fn gen_two_spiral(n_per_class: usize, params: &SpiralParams, seed: u64) -> Result<Vec<Sample>> {
    if n_per_class == 0 {
        return Err(Error::input("n_per_class must be at least 1"));
    }
    if !(params.pitch > 0.0 && params.turns > 0.0 && params.r0 >= 0.0) {
        return Err(Error::config("spiral parameters must be positive"));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let full = 2.0 * std::f64::consts::PI * params.turns;
    let mut samples = Vec::with_capacity(2 * n_per_class);
    for k in 0..n_per_class {
        let jitter: f64 = rng.gen_range(0.0..1.0);
        let theta = -full * (k as f64 + jitter) / n_per_class as f64;
        let r = params.pitch * (theta + full) + params.r0;
        let (x, y) = (r * theta.cos(), r * theta.sin());
        samples.push(Sample { x: vec![x, y], y: 0.0 });
        samples.push(Sample { x: vec![-x, -y], y: 1.0 });
    }
    Ok(samples)
}

/// Three concentric classes by squared radius: class 0 below `r1`, class 1
/// between `r1` and `r2`, class 2 above `r2`. Points are rejection-sampled
/// uniformly from the square `[-box_half, box_half]^2` until every class
/// holds `n_per_class` points.
pub fn gen_three_ring(
    n_per_class: usize,
    r1: f64,
    r2: f64,
    box_half: f64,
    seed: u64,
) -> Result<Vec<Sample>> {
    if n_per_class == 0 {
        return Err(Error::input("n_per_class must be at least 1"));
    }
    if !(r1 > 0.0 && r2 > r1) {
        return Err(Error::config(format!("need 0 < r1 < r2, got r1={r1} r2={r2}")));
    }
    if !(box_half > 0.0) {
        return Err(Error::config("box half-width must be positive"));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut counts = [0usize; 3];
    let mut samples = Vec::with_capacity(3 * n_per_class);
    let budget = 20_000usize.saturating_mul(n_per_class).saturating_mul(3);
    for _ in 0..budget {
        if counts.iter().all(|&c| c >= n_per_class) {
            return Ok(samples);
        }
        let x1 = rng.gen_range(-box_half..box_half);
        let x2 = rng.gen_range(-box_half..box_half);
        let rr = x1 * x1 + x2 * x2;
        let class = if rr < r1 { 0 } else if rr < r2 { 1 } else { 2 };
        if counts[class] < n_per_class {
            counts[class] += 1;
            samples.push(Sample { x: vec![x1, x2], y: class as f64 });
        }
    }
    Err(Error::Generation(format!(
        "box [-{box_half}, {box_half}]^2 cannot fill all classes (reached {counts:?})"
    )))
}

/// Write samples as `x1,...,xD,y` rows with a header line.
pub fn write_csv(samples: &[Sample], path: &Path) -> Result<()> {
    let mut file = File::create(path)?;
    let dims = samples.first().map(|s| s.dim()).unwrap_or(0);
    let header: Vec<String> = (1..=dims).map(|j| format!("x{j}")).collect();
    writeln!(file, "{},y", header.join(","))?;
    for s in samples {
        let xs: Vec<String> = s.x.iter().map(|v| v.to_string()).collect();
        writeln!(file, "{},{}", xs.join(","), s.y)?;
    }
    Ok(())
}

/// Read a `x1,...,xD,y` CSV (header optional).
pub fn read_csv(path: &Path) -> Result<Vec<Sample>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut samples = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() < 2 {
            return Err(Error::Parse(format!(
                "{}:{}: need at least one input column and one output column",
                path.display(),
                lineno + 1
            )));
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                let (y, x) = values.split_last().unwrap();
                samples.push(Sample::new(x.to_vec(), *y)?);
            }
            Err(_) if lineno == 0 => continue, // header
            Err(e) => {
                return Err(Error::Parse(format!(
                    "{}:{}: {e}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::Parse(format!("{}: no samples", path.display())));
    }
    Ok(samples)
}
