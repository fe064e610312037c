//! The inference engine: splits a multi-input system into per-input planes
//! over a partition of the other inputs, trains each plane on its routed
//! samples, and predicts with a normalized inverse-spread weighted sum of
//! the per-input narrow paths.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::classic::IdsPlane;
use crate::crossbar::{CircuitParams, CrossbarPlane};
use crate::error::{Error, Result};
use crate::fast::{DescribingVectors, FastParams};
use crate::kernel::KernelShape;
use crate::memristor::DeviceParams;
use crate::metrics::fvu;
use crate::quant::{quantize, Domain, Resolution, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Classic,
    Fast,
    Crossbar,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Backend::Classic => "classic",
            Backend::Fast => "fast",
            Backend::Crossbar => "crossbar",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(Backend::Classic),
            "fast" => Ok(Backend::Fast),
            "crossbar" => Ok(Backend::Crossbar),
            other => Err(Error::input(format!("unknown backend '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionMode {
    Uniform,
    Random,
}

/// Interior cut points per input dimension; `cuts[j].len() + 1` cells on
/// dimension `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionScheme {
    cuts: Vec<Vec<f64>>,
}

impl PartitionScheme {
    /// Evenly spaced interior cut points.
    pub fn uniform(domains: &[Domain], counts: &[usize]) -> Result<Self> {
        Self::check_counts(domains, counts)?;
        let cuts = domains
            .iter()
            .zip(counts)
            .map(|(d, &p)| {
                (1..p)
                    .map(|k| d.min + k as f64 * d.span() / p as f64)
                    .collect()
            })
            .collect();
        Ok(PartitionScheme { cuts })
    }

    /// Cut points drawn uniformly inside each domain, sorted.
    pub fn random(domains: &[Domain], counts: &[usize], seed: u64) -> Result<Self> {
        Self::check_counts(domains, counts)?;
        let mut rng = StdRng::seed_from_u64(seed);
        let mut cuts = Vec::with_capacity(domains.len());
        for (d, &p) in domains.iter().zip(counts) {
            loop {
                let mut c: Vec<f64> = (1..p).map(|_| rng.gen_range(d.min..d.max)).collect();
                c.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if c.windows(2).all(|w| w[0] < w[1]) {
                    cuts.push(c);
                    break;
                }
            }
        }
        Ok(PartitionScheme { cuts })
    }

    pub fn from_cuts(cuts: Vec<Vec<f64>>) -> Result<Self> {
        for c in &cuts {
            if !c.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::config("cut points must be strictly increasing"));
            }
        }
        Ok(PartitionScheme { cuts })
    }

    fn check_counts(domains: &[Domain], counts: &[usize]) -> Result<()> {
        if domains.len() != counts.len() {
            return Err(Error::config("one partition count per input dimension required"));
        }
        if counts.iter().any(|&p| p == 0) {
            return Err(Error::config("partition counts must be at least 1"));
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self) -> &[Vec<f64>] {
        &self.cuts
    }

    /// Cells on dimension `j`.
    pub fn count(&self, j: usize) -> usize {
        self.cuts[j].len() + 1
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..self.dims()).map(|j| self.count(j)).collect()
    }

    /// 0-based cell of `value` on dimension `j`; out-of-domain values clamp
    /// to the nearest cell.
    pub fn cell_on_dim(&self, j: usize, value: f64) -> usize {
        self.cuts[j].iter().take_while(|&&c| value >= c).count()
    }

    /// Planes required for input `i`: the joint cells of the other inputs.
    pub fn cells_for_input(&self, i: usize) -> usize {
        (0..self.dims()).filter(|&j| j != i).map(|j| self.count(j)).product()
    }
}

/// Joint cell of the *other* inputs for input `i` under `scheme`
/// (mixed-radix over dimensions `j != i` in ascending order).
pub fn route(scheme: &PartitionScheme, i: usize, x: &[f64]) -> usize {
    let mut cell = 0;
    for j in 0..scheme.dims() {
        if j == i {
            continue;
        }
        cell = cell * scheme.count(j) + scheme.cell_on_dim(j, x[j]);
    }
    cell
}

/// Full training configuration. Backend-specific fields are ignored by the
/// other backends.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlmConfig {
    pub backend: Backend,
    pub resolution: Resolution,
    /// Cells per input dimension.
    pub partitions: Vec<usize>,
    pub partition_mode: PartitionMode,
    pub epochs: u32,
    pub seed: u64,
    /// Spread floor applied by `predict` before inverting, in levels.
    pub spread_floor: f64,
    /// Describing-vector learning parameters (fast and crossbar gains).
    pub fast: FastParams,
    /// Classic ink-drop shape; `None` means a Gaussian with the fast sigma.
    pub kernel: Option<KernelShape>,
    /// Classic spread threshold T.
    pub spread_threshold: f64,
    pub device: DeviceParams,
    /// Crossbar circuit; `None` derives the standard circuit from the
    /// device and the fast learning rates.
    pub circuit: Option<CircuitParams>,
    /// Input domains; `None` derives them from the training data.
    pub input_domains: Option<Vec<Domain>>,
    pub output_domain: Option<Domain>,
    /// Double partitions until the training FVU reaches `target_fvu`.
    pub auto_partition: bool,
    pub target_fvu: Option<f64>,
    /// Minimum routed samples per plane for a doubling to be accepted.
    pub min_cell_samples: usize,
    pub max_partitions: usize,
}

impl Default for AlmConfig {
    fn default() -> Self {
        AlmConfig {
            backend: Backend::Fast,
            resolution: Resolution::default(),
            partitions: vec![1],
            partition_mode: PartitionMode::Uniform,
            epochs: 1,
            seed: 0,
            spread_floor: 1.0,
            fast: FastParams { alpha1: 0.6, alpha2: 0.5, sigma: 15.0, radius: 45 },
            kernel: None,
            spread_threshold: 0.0,
            device: DeviceParams::default(),
            circuit: None,
            input_domains: None,
            output_domain: None,
            auto_partition: false,
            target_fvu: None,
            min_cell_samples: 5,
            max_partitions: 64,
        }
    }
}

impl AlmConfig {
    fn kernel_shape(&self) -> Result<KernelShape> {
        match self.kernel {
            Some(shape) => Ok(shape),
            None => KernelShape::gaussian(self.fast.sigma),
        }
    }

    fn circuit_params(&self) -> CircuitParams {
        self.circuit
            .unwrap_or_else(|| CircuitParams::standard(&self.device, self.fast.alpha1, self.fast.alpha2))
    }
}

/// A trained plane of any backend.
#[derive(Debug, Clone)]
pub enum Plane {
    Classic(IdsPlane),
    Fast(DescribingVectors),
    Crossbar(CrossbarPlane),
}

impl Plane {
    pub fn narrow_path(&self, xq: u32) -> Result<f64> {
        match self {
            Plane::Classic(p) => Ok(p.narrow_path(xq)? as f64),
            Plane::Fast(v) => v.narrow_path(xq),
            Plane::Crossbar(c) => c.read_level(crate::crossbar::VectorRow::Narrow, xq),
        }
    }

    pub fn spread(&self, xq: u32) -> Result<f64> {
        match self {
            Plane::Classic(p) => Ok(p.spread(xq)? as f64),
            Plane::Fast(v) => v.spread(xq),
            Plane::Crossbar(c) => c.read_spread_level(xq),
        }
    }

    pub fn cell_count(&self) -> usize {
        match self {
            Plane::Classic(p) => p.cell_count(),
            Plane::Fast(v) => v.cell_count(),
            Plane::Crossbar(c) => c.cell_count(),
        }
    }
}

/// A fitted model: one plane per (input, joint cell of the other inputs).
#[derive(Debug, Clone)]
pub struct AlmModel {
    pub config: AlmConfig,
    pub scheme: PartitionScheme,
    pub input_domains: Vec<Domain>,
    pub output_domain: Domain,
    /// `planes[i][cell]`.
    planes: Vec<Vec<Plane>>,
}

fn derive_domains(samples: &[Sample], config: &AlmConfig, dims: usize) -> Result<(Vec<Domain>, Domain)> {
    let input_domains = match &config.input_domains {
        Some(doms) => {
            if doms.len() != dims {
                return Err(Error::config(format!(
                    "expected {dims} input domains, got {}",
                    doms.len()
                )));
            }
            doms.clone()
        }
        None => (0..dims)
            .map(|j| {
                let lo = samples.iter().map(|s| s.x[j]).fold(f64::INFINITY, f64::min);
                let hi = samples.iter().map(|s| s.x[j]).fold(f64::NEG_INFINITY, f64::max);
                Domain::new(lo, hi).map_err(|_| {
                    Error::input(format!("input {j} is constant; supply an explicit domain"))
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let output_domain = match config.output_domain {
        Some(d) => d,
        None => {
            let lo = samples.iter().map(|s| s.y).fold(f64::INFINITY, f64::min);
            let hi = samples.iter().map(|s| s.y).fold(f64::NEG_INFINITY, f64::max);
            Domain::new(lo, hi).map_err(|_| {
                Error::input("training outputs are constant; supply an explicit output domain")
            })?
        }
    };
    Ok((input_domains, output_domain))
}

fn build_scheme(
    domains: &[Domain],
    counts: &[usize],
    mode: PartitionMode,
    seed: u64,
) -> Result<PartitionScheme> {
    match mode {
        PartitionMode::Uniform => PartitionScheme::uniform(domains, counts),
        PartitionMode::Random => PartitionScheme::random(domains, counts, seed),
    }
}

/// Route every sample to its per-input plane and return the quantized
/// training sequences, preserving dataset order.
fn route_samples(
    samples: &[Sample],
    scheme: &PartitionScheme,
    input_domains: &[Domain],
    output_domain: &Domain,
    resolution: Resolution,
) -> Result<Vec<Vec<Vec<(u32, u32)>>>> {
    let dims = scheme.dims();
    let mut routed: Vec<Vec<Vec<(u32, u32)>>> = (0..dims)
        .map(|i| vec![Vec::new(); scheme.cells_for_input(i)])
        .collect();
    for s in samples {
        let yq = quantize(s.y, output_domain, resolution.rsn_y)?;
        for i in 0..dims {
            let xq = quantize(s.x[i], &input_domains[i], resolution.rsn_x)?;
            routed[i][route(scheme, i, &s.x)].push((xq, yq));
        }
    }
    Ok(routed)
}

fn fit_with_scheme(
    samples: &[Sample],
    config: &AlmConfig,
    scheme: PartitionScheme,
    input_domains: &[Domain],
    output_domain: Domain,
) -> Result<AlmModel> {
    let routed = route_samples(samples, &scheme, input_domains, &output_domain, config.resolution)?;
    let dims = scheme.dims();
    let mut planes = Vec::with_capacity(dims);
    for (i, cells) in routed.into_iter().enumerate() {
        let mut row = Vec::with_capacity(cells.len());
        for cell_samples in cells {
            let plane = match config.backend {
                Backend::Classic => {
                    let mut p = IdsPlane::new(
                        config.resolution,
                        input_domains[i],
                        output_domain,
                        config.kernel_shape()?,
                        config.spread_threshold,
                    )?;
                    for _ in 0..config.epochs {
                        p.train(&cell_samples)?;
                    }
                    Plane::Classic(p)
                }
                Backend::Fast => {
                    let mut v = DescribingVectors::new(
                        config.resolution,
                        config.fast,
                        input_domains[i],
                        output_domain,
                    );
                    let seq: Vec<(u32, f64)> =
                        cell_samples.iter().map(|&(x, y)| (x, y as f64)).collect();
                    v.train(&seq, config.epochs)?;
                    Plane::Fast(v)
                }
                Backend::Crossbar => {
                    let mut c = CrossbarPlane::new(
                        config.resolution,
                        config.device,
                        config.circuit_params(),
                        input_domains[i],
                        output_domain,
                    )?;
                    for _ in 0..config.epochs {
                        for &(xq, yq) in &cell_samples {
                            c.write_sample(xq, yq as f64)?;
                        }
                    }
                    Plane::Crossbar(c)
                }
            };
            row.push(plane);
        }
        planes.push(row);
    }
    Ok(AlmModel {
        config: config.clone(),
        scheme,
        input_domains: input_domains.to_vec(),
        output_domain,
        planes,
    })
}

/// Train a model on `samples` under `config`.
///
/// With `auto_partition`, partitioning starts at one cell per input and all
/// counts double until the training-set FVU reaches `target_fvu`, a plane
/// would fall under `min_cell_samples` routed samples, or a count would
/// exceed `max_partitions`.
pub fn fit(samples: &[Sample], config: &AlmConfig) -> Result<AlmModel> {
    if samples.is_empty() {
        return Err(Error::input("training set is empty"));
    }
    let dims = samples[0].dim();
    if samples.iter().any(|s| s.dim() != dims) {
        return Err(Error::input("samples have inconsistent dimensionality"));
    }
    if config.epochs == 0 {
        return Err(Error::config("epochs must be at least 1"));
    }
    if !(config.spread_floor > 0.0) {
        return Err(Error::config("spread floor must be positive"));
    }
    let (input_domains, output_domain) = derive_domains(samples, config, dims)?;

    if !config.auto_partition {
        if config.partitions.len() != dims {
            return Err(Error::config(format!(
                "expected {dims} partition counts, got {}",
                config.partitions.len()
            )));
        }
        let scheme = build_scheme(&input_domains, &config.partitions, config.partition_mode, config.seed)?;
        return fit_with_scheme(samples, config, scheme, &input_domains, output_domain);
    }

    let target = config.target_fvu.unwrap_or(f64::INFINITY);
    let mut counts = vec![1usize; dims];
    loop {
        let scheme = build_scheme(&input_domains, &counts, config.partition_mode, config.seed)?;
        let model = fit_with_scheme(samples, config, scheme, &input_domains, output_domain)?;
        let predictions: Vec<f64> =
            samples.iter().map(|s| model.predict(&s.x)).collect::<Result<_>>()?;
        let truths: Vec<f64> = samples.iter().map(|s| s.y).collect();
        let train_fvu = fvu(&predictions, &truths)?;
        if train_fvu <= target {
            return Ok(model);
        }
        let doubled: Vec<usize> = counts.iter().map(|&p| p * 2).collect();
        if doubled.iter().any(|&p| p > config.max_partitions) {
            return Ok(model);
        }
        let next_scheme =
            build_scheme(&input_domains, &doubled, config.partition_mode, config.seed)?;
        let routed = route_samples(
            samples,
            &next_scheme,
            &input_domains,
            &output_domain,
            config.resolution,
        )?;
        let sparse = routed
            .iter()
            .any(|cells| cells.iter().any(|c| c.len() < config.min_cell_samples));
        if sparse {
            return Ok(model);
        }
        counts = doubled;
    }
}

impl AlmModel {
    pub fn dims(&self) -> usize {
        self.scheme.dims()
    }

    pub fn plane(&self, i: usize, cell: usize) -> Option<&Plane> {
        self.planes.get(i).and_then(|row| row.get(cell))
    }

    pub fn planes_for_input(&self, i: usize) -> &[Plane] {
        &self.planes[i]
    }

    pub fn plane_count(&self) -> usize {
        self.planes.iter().map(|row| row.len()).sum()
    }

    /// Total stored cells over all planes.
    pub fn stored_cells(&self) -> usize {
        self.planes
            .iter()
            .flat_map(|row| row.iter())
            .map(|p| p.cell_count())
            .sum()
    }

    pub(crate) fn from_parts(
        config: AlmConfig,
        scheme: PartitionScheme,
        input_domains: Vec<Domain>,
        output_domain: Domain,
        planes: Vec<Vec<Plane>>,
    ) -> Self {
        AlmModel { config, scheme, input_domains, output_domain, planes }
    }

    /// Per-input narrow path and spread at `x`, after routing and the
    /// spread floor. Exposed for diagnostics.
    pub fn features(&self, x: &[f64]) -> Result<Vec<(f64, f64)>> {
        if x.len() != self.dims() {
            return Err(Error::input(format!(
                "expected {} inputs, got {}",
                self.dims(),
                x.len()
            )));
        }
        let mut features = Vec::with_capacity(self.dims());
        for i in 0..self.dims() {
            let cell = route(&self.scheme, i, x);
            let xq = quantize(x[i], &self.input_domains[i], self.config.resolution.rsn_x)?;
            let plane = &self.planes[i][cell];
            let psi = plane.narrow_path(xq)?;
            let spread = plane.spread(xq)?.max(self.config.spread_floor);
            features.push((psi, spread));
        }
        Ok(features)
    }

    /// Weighted sum of narrow paths: `beta_i = (1/S_i) / sum_j (1/S_j)`,
    /// mapped to output units linearly.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let features = self.features(x)?;
        let inv_sum: f64 = features.iter().map(|&(_, s)| 1.0 / s).sum();
        let level: f64 = features.iter().map(|&(psi, s)| (1.0 / s) / inv_sum * psi).sum();
        Ok(self.output_domain.min + level * self.output_domain.span() / self.config.resolution.rsn_y as f64)
    }

    /// Label whose value is nearest to `predict(x)`; ties go to the smaller
    /// label.
    pub fn classify(&self, x: &[f64], labels: &[f64]) -> Result<f64> {
        if labels.is_empty() {
            return Err(Error::input("label set is empty"));
        }
        let y = self.predict(x)?;
        let mut best = labels[0];
        let mut best_dist = (y - labels[0]).abs();
        for &label in &labels[1..] {
            let d = (y - label).abs();
            if d < best_dist || (d == best_dist && label < best) {
                best = label;
                best_dist = d;
            }
        }
        Ok(best)
    }

    /// Mean spread per input over all planes and columns — a diagnostic for
    /// how informative each input is.
    pub fn mean_spread_per_input(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.dims());
        for row in &self.planes {
            let mut sum = 0.0;
            let mut count = 0usize;
            for plane in row {
                for xq in 1..=self.config.resolution.rsn_x {
                    sum += plane.spread(xq)?;
                    count += 1;
                }
            }
            out.push(sum / count as f64);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples_2d(pairs: &[(f64, f64, f64)]) -> Vec<Sample> {
        pairs
            .iter()
            .map(|&(a, b, y)| Sample::new(vec![a, b], y).unwrap())
            .collect()
    }

    fn fast_config(partitions: Vec<usize>) -> AlmConfig {
        AlmConfig {
            partitions,
            fast: FastParams::new(0.6, 0.5, 5.0).unwrap(),
            input_domains: Some(vec![
                Domain::new(0.0, 1.0).unwrap(),
                Domain::new(0.0, 1.0).unwrap(),
            ]),
            output_domain: Some(Domain::new(0.0, 1.0).unwrap()),
            ..AlmConfig::default()
        }
    }

    #[test]
    fn route_single_cut() {
        let domains = [Domain::new(0.0, 1.0).unwrap(), Domain::new(0.0, 1.0).unwrap()];
        let scheme = PartitionScheme::uniform(&domains, &[2, 2]).unwrap();
        // input-1 planes are keyed by x2's cell
        assert_eq!(route(&scheme, 0, &[0.9, 0.2]), 0);
        assert_eq!(route(&scheme, 0, &[0.9, 0.7]), 1);
        assert_eq!(route(&scheme, 1, &[0.2, 0.9]), 0);
        assert_eq!(route(&scheme, 1, &[0.7, 0.9]), 1);
        // out-of-domain clamps to the nearest cell
        assert_eq!(route(&scheme, 0, &[0.5, -3.0]), 0);
        assert_eq!(route(&scheme, 0, &[0.5, 42.0]), 1);
    }

    #[test]
    fn route_no_partitioning_is_cell_zero() {
        let domains = [Domain::new(0.0, 1.0).unwrap(), Domain::new(0.0, 1.0).unwrap()];
        let scheme = PartitionScheme::uniform(&domains, &[1, 1]).unwrap();
        assert_eq!(route(&scheme, 0, &[0.3, 0.8]), 0);
        assert_eq!(scheme.cells_for_input(0), 1);
    }

    #[test]
    fn plane_count_law_three_inputs() {
        let domains = vec![Domain::new(0.0, 1.0).unwrap(); 3];
        let scheme = PartitionScheme::uniform(&domains, &[2, 3, 2]).unwrap();
        assert_eq!(scheme.cells_for_input(0), 6);
        assert_eq!(scheme.cells_for_input(1), 4);
        assert_eq!(scheme.cells_for_input(2), 6);
    }

    #[test]
    fn fit_structural_counts() {
        let samples = samples_2d(&[
            (0.1, 0.1, 0.2),
            (0.3, 0.8, 0.4),
            (0.7, 0.2, 0.6),
            (0.9, 0.9, 0.8),
        ]);
        let model = fit(&samples, &fast_config(vec![2, 2])).unwrap();
        assert_eq!(model.plane_count(), 4);
        assert_eq!(model.stored_cells(), 4 * 3 * 256);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit(&[], &fast_config(vec![2, 2])).is_err());
        let mixed = vec![
            Sample::new(vec![0.0, 0.0], 0.5).unwrap(),
            Sample::new(vec![0.0], 0.5).unwrap(),
        ];
        assert!(fit(&mixed, &fast_config(vec![2, 2])).is_err());
        let samples = samples_2d(&[(0.1, 0.1, 0.2)]);
        assert!(fit(&samples, &fast_config(vec![2])).is_err());
    }

    #[test]
    fn predict_weighted_sum_example() {
        // psi = (100, 200), S = (10, 30) -> beta = (0.75, 0.25), level 125
        let samples = samples_2d(&[(0.1, 0.1, 0.2), (0.9, 0.9, 0.8)]);
        let mut model = fit(&samples, &fast_config(vec![1, 1])).unwrap();
        // overwrite the planes with hand-built vectors holding the target features
        let res = model.config.resolution;
        let dom = Domain::new(0.0, 1.0).unwrap();
        let params = model.config.fast;
        let mk = |psi: f64, spread: f64| {
            let n = res.rsn_x as usize;
            DescribingVectors::from_parts(
                res,
                params,
                dom,
                dom,
                vec![100.0 - spread / 2.0; n],
                vec![100.0 + spread / 2.0; n],
                vec![psi; n],
            )
            .unwrap()
        };
        model.planes[0][0] = Plane::Fast(mk(100.0, 10.0));
        model.planes[1][0] = Plane::Fast(mk(200.0, 30.0));
        let y = model.predict(&[0.5, 0.5]).unwrap();
        assert!((y - 125.0 / 256.0).abs() < 1e-12);
        let f = model.features(&[0.5, 0.5]).unwrap();
        assert_eq!(f[0], (100.0, 10.0));
        assert_eq!(f[1], (200.0, 30.0));
        // equal spreads reduce the weighted sum to the arithmetic mean
        model.planes[1][0] = Plane::Fast(mk(200.0, 10.0));
        let y = model.predict(&[0.5, 0.5]).unwrap();
        assert!((y - 150.0 / 256.0).abs() < 1e-12);
    }

    #[test]
    fn predict_is_scale_free_in_spreads() {
        let samples = samples_2d(&[(0.1, 0.2, 0.3), (0.8, 0.7, 0.9), (0.4, 0.5, 0.5)]);
        let model = fit(&samples, &fast_config(vec![2, 2])).unwrap();
        let x = [0.42, 0.61];
        let features = model.features(&x).unwrap();
        for scale in [3.0, 17.0] {
            let inv: f64 = features.iter().map(|&(_, s)| 1.0 / (s * scale)).sum();
            let level: f64 = features
                .iter()
                .map(|&(p, s)| (1.0 / (s * scale)) / inv * p)
                .sum();
            let direct = model.output_domain.min
                + level * model.output_domain.span() / model.config.resolution.rsn_y as f64;
            assert!((direct - model.predict(&x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_input_prediction_ignores_spread() {
        let samples: Vec<Sample> = (0..20)
            .map(|k| Sample::new(vec![k as f64 / 19.0], 0.5).unwrap())
            .collect();
        let mut config = fast_config(vec![1]);
        config.input_domains = Some(vec![Domain::new(0.0, 1.0).unwrap()]);
        config.output_domain = Some(Domain::new(0.0, 1.0).unwrap());
        let model = fit(&samples, &config).unwrap();
        let features = model.features(&[0.5]).unwrap();
        let level = features[0].0;
        let expect = 0.0 + level * 1.0 / 256.0;
        assert_eq!(model.predict(&[0.5]).unwrap(), expect);
    }

    #[test]
    fn classify_nearest_with_tie_to_smaller() {
        let samples = samples_2d(&[(0.1, 0.1, 0.0), (0.9, 0.9, 1.0)]);
        let model = fit(&samples, &fast_config(vec![1, 1])).unwrap();
        // the model's actual prediction is irrelevant; probe the rule directly
        let labels = [0.0, 1.0];
        let y = model.predict(&[0.1, 0.1]).unwrap();
        let expect = if (y - 0.0).abs() < (y - 1.0).abs() { 0.0 } else { 1.0 };
        assert_eq!(model.classify(&[0.1, 0.1], &labels).unwrap(), expect);
    }

    #[test]
    fn classify_exact_tie_takes_the_smaller_label() {
        // a single-input model whose narrow path sits at exactly half scale
        // predicts exactly 0.5 on the unit output domain
        let samples: Vec<Sample> = (0..8)
            .map(|k| Sample::new(vec![k as f64 / 7.0], 0.5).unwrap())
            .collect();
        let mut config = fast_config(vec![1]);
        config.input_domains = Some(vec![Domain::new(0.0, 1.0).unwrap()]);
        config.output_domain = Some(Domain::new(0.0, 1.0).unwrap());
        let mut model = fit(&samples, &config).unwrap();
        let res = model.config.resolution;
        let dom = Domain::new(0.0, 1.0).unwrap();
        let n = res.rsn_x as usize;
        model.planes[0][0] = Plane::Fast(
            DescribingVectors::from_parts(
                res,
                model.config.fast,
                dom,
                dom,
                vec![0.0; n],
                vec![256.0; n],
                vec![128.0; n],
            )
            .unwrap(),
        );
        let y = model.predict(&[0.4]).unwrap();
        assert_eq!(y, 0.5);
        assert_eq!(model.classify(&[0.4], &[0.0, 1.0]).unwrap(), 0.0);
        // in the irregular order too, distance ties still pick the smaller value
        assert_eq!(model.classify(&[0.4], &[1.0, 0.0]).unwrap(), 0.0);
        // a prediction past the last label snaps to it: 0.5 against {0, 0.2}
        assert_eq!(model.classify(&[0.4], &[0.0, 0.2]).unwrap(), 0.2);
    }

    #[test]
    fn derived_domains_cover_the_data() {
        let samples = samples_2d(&[(1.0, -2.0, 3.0), (5.0, 7.0, 11.0), (2.0, 0.0, 6.0)]);
        let mut config = fast_config(vec![1, 1]);
        config.input_domains = None;
        config.output_domain = None;
        let model = fit(&samples, &config).unwrap();
        assert_eq!(model.input_domains[0], Domain::new(1.0, 5.0).unwrap());
        assert_eq!(model.input_domains[1], Domain::new(-2.0, 7.0).unwrap());
        assert_eq!(model.output_domain, Domain::new(3.0, 11.0).unwrap());
    }

    #[test]
    fn auto_partition_with_infinite_target_stays_at_one() {
        let samples: Vec<Sample> = (0..50)
            .map(|k| {
                let t = k as f64 / 49.0;
                Sample::new(vec![t, 1.0 - t], t * t).unwrap()
            })
            .collect();
        let mut config = fast_config(vec![1, 1]);
        config.auto_partition = true;
        config.target_fvu = None;
        let model = fit(&samples, &config).unwrap();
        assert_eq!(model.scheme.counts(), vec![1, 1]);
    }

    #[test]
    fn auto_partition_doubles_until_sparse() {
        let samples: Vec<Sample> = (0..64)
            .map(|k| {
                let t = k as f64 / 63.0;
                Sample::new(vec![t, (1.0 - t).powi(2)], (6.0 * t).sin()).unwrap()
            })
            .collect();
        let mut config = fast_config(vec![1, 1]);
        config.auto_partition = true;
        config.target_fvu = Some(0.0); // unreachable: double until a guard stops it
        config.min_cell_samples = 5;
        config.max_partitions = 64;
        let model = fit(&samples, &config).unwrap();
        let counts = model.scheme.counts();
        assert!(counts[0] >= 2, "should have doubled at least once, got {counts:?}");
        // the accepted scheme keeps every plane at or above the density guard
        let mut routed_min = usize::MAX;
        for i in 0..model.dims() {
            for c in 0..model.planes_for_input(i).len() {
                let n = samples
                    .iter()
                    .filter(|s| route(&model.scheme, i, &s.x) == c)
                    .count();
                routed_min = routed_min.min(n);
            }
        }
        assert!(routed_min >= config.min_cell_samples);
    }

    #[test]
    fn random_partitions_are_seeded_and_interior() {
        let domains = [Domain::new(0.0, 1.0).unwrap(), Domain::new(2.0, 3.0).unwrap()];
        let a = PartitionScheme::random(&domains, &[4, 3], 7).unwrap();
        let b = PartitionScheme::random(&domains, &[4, 3], 7).unwrap();
        assert_eq!(a, b);
        for (j, d) in domains.iter().enumerate() {
            for &c in &a.cuts()[j] {
                assert!(d.contains(c));
            }
            assert!(a.cuts()[j].windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn mean_spread_shrinks_for_the_informative_input() {
        // y depends on x1 only: the x1 planes collapse their bounds while
        // the x2 planes keep seeing scattered outputs per column
        let samples: Vec<Sample> = (0..400)
            .map(|k| {
                let t = (k % 97) as f64 / 96.0;
                let noise = (k as f64 * 0.7919).fract();
                Sample::new(vec![t, noise], t).unwrap()
            })
            .collect();
        let mut config = fast_config(vec![1, 1]);
        config.fast = FastParams::new(0.3, 0.5, 5.0).unwrap();
        let model = fit(&samples, &config).unwrap();
        let spreads = model.mean_spread_per_input().unwrap();
        assert!(
            spreads[0] < spreads[1],
            "informative input should have the smaller mean spread: {spreads:?}"
        );
    }

    #[test]
    fn beta_weights_sum_to_one() {
        let samples = samples_2d(&[(0.1, 0.2, 0.3), (0.8, 0.7, 0.9), (0.4, 0.5, 0.5)]);
        let model = fit(&samples, &fast_config(vec![2, 2])).unwrap();
        for x in [[0.0, 0.0], [0.37, 0.91], [1.0, 1.0]] {
            let features = model.features(&x).unwrap();
            let inv: f64 = features.iter().map(|&(_, s)| 1.0 / s).sum();
            let total: f64 = features.iter().map(|&(_, s)| (1.0 / s) / inv).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
