//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS/FAIL line with the measured value next to its threshold.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads=1`
//! to see every line and keep the timing comparison undisturbed.

use std::time::Instant;

use fast_ids::alm::{fit, AlmConfig, Backend};
use fast_ids::bench::{run_benchmark, run_seed, test_seed, BenchSpec, DatasetSpec};
use fast_ids::classic::IdsPlane;
use fast_ids::crossbar::{CircuitParams, CrossbarPlane, VectorRow};
use fast_ids::datasets::{gen_f1, gen_f2, gen_three_ring, gen_two_spiral, SpiralParams};
use fast_ids::fast::{DescribingVectors, FastParams};
use fast_ids::kernel::KernelShape;
use fast_ids::memristor::DeviceParams;
use fast_ids::metrics::{accuracy, fvu};
use fast_ids::quant::{quantize, Domain, Resolution, Sample};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn report(criterion: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} — {detail}");
    assert!(pass, "criterion {criterion}: {detail}");
}

fn train_fvu(model: &fast_ids::AlmModel, samples: &[Sample]) -> f64 {
    let pred: Vec<f64> = samples.iter().map(|s| model.predict(&s.x).unwrap()).collect();
    let truth: Vec<f64> = samples.iter().map(|s| s.y).collect();
    fvu(&pred, &truth).unwrap()
}

fn classify_accuracy(model: &fast_ids::AlmModel, samples: &[Sample], labels: &[f64]) -> f64 {
    let pred: Vec<f64> = samples.iter().map(|s| model.classify(&s.x, labels).unwrap()).collect();
    let truth: Vec<f64> = samples.iter().map(|s| s.y).collect();
    accuracy(&pred, &truth).unwrap()
}

/// F2, 4x4 partitions, 1000 training samples, fast backend with
/// alpha1 = 0.01, alpha2 = 0.95, sigma = 15: mean FVU over 20 seeded runs
/// at most 0.08, total runtime under two minutes.
#[test]
fn criterion_01_fast_f2_4x4() {
    let started = Instant::now();
    let config = AlmConfig {
        backend: Backend::Fast,
        partitions: vec![4, 4],
        fast: FastParams::new(0.01, 0.95, 15.0).unwrap(),
        ..AlmConfig::default()
    };
    let mut fvus = Vec::new();
    for run in 0..20u32 {
        let seed = run_seed(0xF2_4411, run);
        let train = gen_f2(1000, seed);
        let model = fit(&train, &AlmConfig { seed, ..config.clone() }).unwrap();
        fvus.push(train_fvu(&model, &train));
    }
    let mean = fvus.iter().sum::<f64>() / fvus.len() as f64;
    let elapsed = started.elapsed().as_secs_f64();
    // the equal-weight combination of per-input estimates floors near FVU
    // 0.14 on this configuration, so the 0.08 reference target stays red
    report(
        "1",
        mean <= 0.08 && elapsed < 120.0,
        format!("fast F2 4x4/1000: mean FVU {mean:.4} (<= 0.08 required), {elapsed:.1}s (< 120s)"),
    );
}

/// F2, 4x4, 1000 samples, classic backend: mean FVU over 10 runs at most 0.12.
#[test]
fn criterion_02_classic_f2_4x4() {
    let config = AlmConfig {
        backend: Backend::Classic,
        partitions: vec![4, 4],
        fast: FastParams::new(0.01, 0.95, 15.0).unwrap(),
        kernel: Some(KernelShape::gaussian(15.0f64.sqrt()).unwrap()),
        spread_threshold: 1.0,
        ..AlmConfig::default()
    };
    let mut fvus = Vec::new();
    for run in 0..10u32 {
        let seed = run_seed(0xF2_4411, run);
        let train = gen_f2(1000, seed);
        let model = fit(&train, &AlmConfig { seed, ..config.clone() }).unwrap();
        fvus.push(train_fvu(&model, &train));
    }
    let mean = fvus.iter().sum::<f64>() / fvus.len() as f64;
    report(
        "2",
        mean <= 0.12,
        format!("classic F2 4x4/1000: mean FVU {mean:.4} (<= 0.12 required)"),
    );
}

/// F1, 2500 samples, 11 partitions per input, sigma = 12, alpha1 = 0.02,
/// alpha2 = 0.92: single seeded run FVU at most 0.09.
#[test]
fn criterion_03_fast_f1_11x11() {
    let seed = 8;
    let train = gen_f1(2500, seed);
    let config = AlmConfig {
        backend: Backend::Fast,
        partitions: vec![11, 11],
        fast: FastParams::new(0.02, 0.92, 12.0).unwrap(),
        seed,
        ..AlmConfig::default()
    };
    let model = fit(&train, &config).unwrap();
    let value = train_fvu(&model, &train);
    report(
        "3",
        value <= 0.09,
        format!("fast F1 11x11/2500: FVU {value:.4} (<= 0.09 required)"),
    );
}

/// Two-spiral, 400 train / 600 test, 6x6 partitions, sigma = 4,
/// alpha1 = 0.027, alpha2 = 0.23: mean accuracy over 20 runs at least 0.85.
#[test]
fn criterion_04_two_spiral() {
    let params = SpiralParams::default();
    let config = AlmConfig {
        backend: Backend::Fast,
        partitions: vec![6, 6],
        fast: FastParams::new(0.027, 0.23, 4.0).unwrap(),
        ..AlmConfig::default()
    };
    let labels = [0.0, 1.0];
    let mut accs = Vec::new();
    for run in 0..20u32 {
        let seed = run_seed(0x5B11A1, run);
        let train = gen_two_spiral(200, &params, seed).unwrap();
        let test = gen_two_spiral(300, &params, test_seed(seed)).unwrap();
        let model = fit(&train, &AlmConfig { seed, ..config.clone() }).unwrap();
        accs.push(classify_accuracy(&model, &test, &labels));
    }
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    report(
        "4",
        mean >= 0.85,
        format!("two-spiral 6x6: mean accuracy {mean:.4} (>= 0.85 required)"),
    );
}

/// Three-ring, 300 train per class, 3000 test points, 5x5 partitions,
/// sigma = 2, alpha1 = 0.09, alpha2 = 0.27: mean accuracy over 10 runs at
/// least 0.92.
#[test]
fn criterion_05_three_ring() {
    let config = AlmConfig {
        backend: Backend::Fast,
        partitions: vec![5, 5],
        fast: FastParams::new(0.09, 0.27, 2.0).unwrap(),
        epochs: 20,
        ..AlmConfig::default()
    };
    let labels = [0.0, 1.0, 2.0];
    let mut accs = Vec::new();
    for run in 0..10u32 {
        let seed = run_seed(0x3B1965, run);
        let train = gen_three_ring(300, 1.0, 4.0, 3.0, seed).unwrap();
        let test = gen_three_ring(1000, 1.0, 4.0, 3.0, test_seed(seed)).unwrap();
        let model = fit(&train, &AlmConfig { seed, ..config.clone() }).unwrap();
        accs.push(classify_accuracy(&model, &test, &labels));
    }
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    // the equal-weight combination caps near 0.89 on this dataset, so the
    // 0.92 reference target stays red
    report(
        "5",
        mean >= 0.92,
        format!("three-ring 5x5: mean accuracy {mean:.4} (>= 0.92 required)"),
    );
}

/// F2, 2500 samples, 2x2 partitions, shared sigma = 12, serial timing:
/// classic/fast fit wall-clock ratio at least 5.
#[test]
fn criterion_06_fit_speedup() {
    let spec = BenchSpec {
        dataset: DatasetSpec::F2,
        backends: vec![Backend::Classic, Backend::Fast],
        train_sizes: vec![2500],
        test_n: 500,
        runs: 1,
        seed: 0x5EED21,
        config: AlmConfig {
            partitions: vec![2, 2],
            fast: FastParams::new(0.01, 0.9, 12.0).unwrap(),
            kernel: Some(KernelShape::gaussian(12.0).unwrap()),
            ..AlmConfig::default()
        },
        serial: true,
    };
    let bench_report = run_benchmark(&spec).unwrap();
    let (_, ratio) = bench_report.speedup[0];
    report(
        "6",
        ratio >= 5.0,
        format!("classic/fast fit-time ratio {ratio:.1} (>= 5 required, serial)"),
    );
}

/// Stored-cell accounting: 3 * rsn_x per fast or crossbar plane,
/// rsn_x * rsn_y per classic plane, exact, at resolutions 64 and 256.
#[test]
fn criterion_07_memory_law() {
    let mut all_ok = true;
    let mut details = Vec::new();
    for rsn in [64u32, 256] {
        let train = gen_f2(60, 7);
        for backend in [Backend::Fast, Backend::Classic, Backend::Crossbar] {
            let config = AlmConfig {
                backend,
                resolution: Resolution::square(rsn).unwrap(),
                partitions: vec![2, 2],
                fast: FastParams::new(0.5, 0.5, 2.0).unwrap(),
                ..AlmConfig::default()
            };
            let model = fit(&train, &config).unwrap();
            let per_plane = match backend {
                Backend::Classic => (rsn * rsn) as usize,
                _ => 3 * rsn as usize,
            };
            let expect = 4 * per_plane; // 2 + 2 planes at 2x2 partitions
            let got = model.stored_cells();
            if got != expect {
                all_ok = false;
            }
            details.push(format!("{backend}@{rsn}: {got}"));
        }
    }
    report("7", all_ok, format!("stored cells exact ({})", details.join(", ")));
}

/// Classic and fast trained on the same noiseless 1-D sine: narrow paths
/// agree within 0.08 * rsn_y on at least 90% of columns hit by 3+ samples.
#[test]
fn criterion_08_backend_agreement() {
    let res = Resolution::default();
    let x_dom = Domain::new(0.0, 1.0).unwrap();
    let mut rng = StdRng::seed_from_u64(0x51E11);
    let xs: Vec<f64> = (0..2000).map(|_| rng.gen_range(0.0..1.0)).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 0.5 + 0.4 * (2.0 * std::f64::consts::PI * x).sin()).collect();
    let y_lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let y_dom = Domain::new(y_lo, y_hi).unwrap();

    let mut classic = IdsPlane::new(res, x_dom, y_dom, KernelShape::gaussian(10.0).unwrap(), 0.0).unwrap();
    let mut fast = DescribingVectors::new(res, FastParams::new(0.65, 0.95, 10.0).unwrap(), x_dom, y_dom);
    let mut hits = vec![0u32; res.rsn_x as usize];
    for (x, y) in xs.iter().zip(&ys) {
        let xq = quantize(*x, &x_dom, res.rsn_x).unwrap();
        let yq = quantize(*y, &y_dom, res.rsn_y).unwrap();
        hits[(xq - 1) as usize] += 1;
        classic.ink_drop(xq, yq).unwrap();
        fast.update(xq, yq as f64).unwrap();
    }
    let tolerance = 0.08 * res.rsn_y as f64;
    let mut tested = 0usize;
    let mut within = 0usize;
    for col in 1..=res.rsn_x {
        if hits[(col - 1) as usize] >= 3 {
            tested += 1;
            let diff =
                (classic.narrow_path(col).unwrap() as f64 - fast.narrow_path(col).unwrap()).abs();
            if diff <= tolerance {
                within += 1;
            }
        }
    }
    let frac = within as f64 / tested as f64;
    report(
        "8",
        frac >= 0.90,
        format!("1-D sine agreement: {within}/{tested} columns within {tolerance:.1} levels ({frac:.3} >= 0.90)"),
    );
}

/// Crossbar vs software describing vectors on an identical 100-write
/// sequence (alpha1 = 0.6, alpha2 = 0.5, software sigma = 15): narrow paths
/// within 0.10 * rsn_y on at least 95% of hardware-touched columns, and
/// sub-threshold reads leave the device state bitwise intact.
#[test]
fn criterion_09_crossbar_equivalence() {
    let res = Resolution::default();
    let dom = Domain::new(0.0, 1.0).unwrap();
    let device = DeviceParams::default();
    let circuit = CircuitParams::standard(&device, 0.6, 0.5);
    let mut hw = CrossbarPlane::new(res, device, circuit, dom, dom).unwrap();
    let mut sw = DescribingVectors::new(res, FastParams::new(0.6, 0.5, 15.0).unwrap(), dom, dom);

    // four passes over 25 centers spaced 4 columns apart, sine target
    let centers: Vec<u32> = (0..25).map(|k| 60 + 4 * k).collect();
    let span = 100.0;
    let mut touched = vec![false; res.rsn_x as usize];
    for _ in 0..4 {
        for &c in &centers {
            let target =
                128.0 + 32.0 * (2.0 * std::f64::consts::PI * (c as f64 - 60.0) / span).sin();
            hw.write_sample(c, target).unwrap();
            sw.update(c, target).unwrap();
            for u in -2i64..=2 {
                let col = c as i64 + u;
                if col >= 1 && col <= res.rsn_x as i64 {
                    touched[(col - 1) as usize] = true;
                }
            }
        }
    }

    let tolerance = 0.10 * res.rsn_y as f64;
    let mut tested = 0usize;
    let mut within = 0usize;
    let mut worst = 0.0f64;
    for col in 1..=res.rsn_x {
        if touched[(col - 1) as usize] {
            tested += 1;
            let diff = (hw.read_level(VectorRow::Narrow, col).unwrap()
                - sw.narrow_path(col).unwrap())
            .abs();
            worst = worst.max(diff);
            if diff <= tolerance {
                within += 1;
            }
        }
    }
    let frac = within as f64 / tested as f64;

    // reads must not disturb any device
    let before: Vec<Vec<f64>> = VectorRow::ALL.iter().map(|&r| hw.widths(r)).collect();
    for col in 1..=res.rsn_x {
        for row in VectorRow::ALL {
            hw.read_cell(row, col).unwrap();
        }
        hw.read_spread(col).unwrap();
    }
    hw.read_vectors().unwrap();
    let after: Vec<Vec<f64>> = VectorRow::ALL.iter().map(|&r| hw.widths(r)).collect();
    let reads_clean = before == after;

    report(
        "9",
        frac >= 0.95 && reads_clean,
        format!(
            "crossbar equivalence: {within}/{tested} touched columns within {tolerance:.1} levels \
             (worst {worst:.1}); sub-threshold reads bitwise clean: {reads_clean}"
        ),
    );
}

/// Invariant bundle: exact quantizer triple, zero describing-vector
/// invariant violations over 1e4 random updates, the geometric convergence
/// law to 1e-9, weight normalization to 1e-12 over 1e4 predicts, and
/// narrow-path agreement with brute force on every resolution up to 32.
#[test]
fn criterion_10_invariant_suite() {
    let mut failures: Vec<String> = Vec::new();

    // quantizer triple
    let dom = Domain::new(1.0, 10.0).unwrap();
    for (v, expect) in [(8.0, 200), (4.0, 86), (3.0, 57)] {
        let got = quantize(v, &dom, 256).unwrap();
        if got != expect {
            failures.push(format!("quantize({v}) = {got} != {expect}"));
        }
    }

    // 1e4 random updates, zero invariant violations
    let res = Resolution::default();
    let io = Domain::new(0.0, 1.0).unwrap();
    let params = FastParams::new(0.6, 0.5, 15.0).unwrap();
    let mut v = DescribingVectors::new(res, params, io, io);
    let mut rng = StdRng::seed_from_u64(0x1E4);
    let radius = params.radius as i64;
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let xq = rng.gen_range(1..=res.rsn_x);
        let yq = rng.gen_range(0.0..=res.rsn_y as f64);
        let before = v.clone();
        v.update(xq, yq).unwrap();
        let spread_before = before.spread(xq).unwrap();
        if v.spread(xq).unwrap() > spread_before + 1e-12 {
            violations += 1;
        }
        for col in 0..res.rsn_x as usize {
            let ok_range = v.lower()[col] >= 0.0
                && v.upper()[col] <= res.rsn_y as f64
                && v.narrow()[col] >= 0.0
                && v.narrow()[col] <= res.rsn_y as f64;
            let ok_order = v.lower()[col] <= v.upper()[col];
            let far = (col as i64 - (xq as i64 - 1)).abs() > radius;
            let ok_local = !far
                || (v.lower()[col] == before.lower()[col]
                    && v.upper()[col] == before.upper()[col]
                    && v.narrow()[col] == before.narrow()[col]);
            if !(ok_range && ok_order && ok_local) {
                violations += 1;
            }
        }
    }
    if violations != 0 {
        failures.push(format!("{violations} invariant violations over 1e4 updates"));
    }

    // geometric convergence, pre-clamp exactness
    let mut g = DescribingVectors::new(res, params, io, io);
    let (x0, y0) = (77u32, 203.0);
    for k in 1..=50i32 {
        g.update(x0, y0).unwrap();
        let expect = (128.0f64 - y0).abs() * 0.5f64.powi(k);
        let got = (g.narrow_path(x0).unwrap() - y0).abs();
        if (got - expect).abs() >= 1e-9 {
            failures.push(format!("geometric law broke at k={k}: {got} vs {expect}"));
            break;
        }
    }

    // weight normalization over 1e4 random predicts
    let train: Vec<Sample> = (0..200)
        .map(|k| {
            let t = k as f64 / 199.0;
            Sample::new(vec![t, (1.3 * t).cos()], (3.0 * t).sin()).unwrap()
        })
        .collect();
    let config = AlmConfig {
        backend: Backend::Fast,
        partitions: vec![3, 3],
        fast: FastParams::new(0.3, 0.6, 5.0).unwrap(),
        ..AlmConfig::default()
    };
    let model = fit(&train, &config).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x = [rng.gen_range(-0.2..1.2), rng.gen_range(-1.2..1.2)];
        let features = model.features(&x).unwrap();
        let inv_sum: f64 = features.iter().map(|&(_, s)| 1.0 / s).sum();
        let beta_sum: f64 = features.iter().map(|&(_, s)| (1.0 / s) / inv_sum).sum();
        worst = worst.max((beta_sum - 1.0).abs());
        model.predict(&x).unwrap();
    }
    if worst >= 1e-12 {
        failures.push(format!("beta normalization off by {worst:e}"));
    }

    // exhaustive brute-force narrow path, every resolution up to 32
    for rsn in 2u32..=32 {
        let r = Resolution::square(rsn).unwrap();
        let mut plane =
            IdsPlane::new(r, io, io, KernelShape::pyramid(1).unwrap(), 0.0).unwrap();
        let drops: Vec<(u32, u32)> = (0..3 * rsn)
            .map(|_| (rng.gen_range(1..=rsn), rng.gen_range(1..=rsn)))
            .collect();
        plane.train(&drops).unwrap();
        for xq in 1..=rsn {
            let column = plane.column(xq).unwrap();
            let total: f64 = column.iter().sum();
            let expect = if total <= 0.0 {
                rsn.div_ceil(2)
            } else {
                let half = total / 2.0;
                let mut acc = 0.0;
                let mut b = rsn;
                for (i, d) in column.iter().enumerate() {
                    acc += d;
                    if acc >= half {
                        b = i as u32 + 1;
                        break;
                    }
                }
                b
            };
            if plane.narrow_path(xq).unwrap() != expect {
                failures.push(format!("narrow path mismatch at rsn={rsn} col={xq}"));
            }
        }
    }

    report(
        "10",
        failures.is_empty(),
        if failures.is_empty() {
            "quantizer triple exact; 1e4 updates clean; geometric law 1e-9; beta sum 1e-12; brute-force median exact to rsn 32".into()
        } else {
            failures.join("; ")
        },
    );
}
