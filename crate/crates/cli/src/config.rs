//! Flat `key = value` run configuration ('#' starts a comment).

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use fast_ids::alm::{AlmConfig, Backend, PartitionMode};
use fast_ids::bench::DatasetSpec;
use fast_ids::crossbar::{CircuitParams, PwmParams};
use fast_ids::datasets::SpiralParams;
use fast_ids::fast::FastParams;
use fast_ids::kernel::KernelShape;
use fast_ids::memristor::DeviceParams;
use fast_ids::quant::{Domain, Resolution};

use crate::CliError;

pub struct RunConfig {
    values: HashMap<String, String>,
    path: PathBuf,
}

fn bad(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::input(format!("{}: {msg}", path.display()))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad(path, format!("line {}: expected 'key = value'", lineno + 1)));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(RunConfig { values, path: path.to_path_buf() })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| bad(&self.path, format!("key '{key}': {e}"))),
        }
    }

    fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    fn parse_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|f| f.trim().parse::<T>())
                .collect::<Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|e| bad(&self.path, format!("key '{key}': {e}"))),
        }
    }

    fn parse_domains(&self, key: &str) -> Result<Option<Vec<Domain>>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => {
                let mut out = Vec::new();
                for part in v.split(',') {
                    let Some((lo, hi)) = part.split_once(':') else {
                        return Err(bad(&self.path, format!("key '{key}': expected min:max pairs")));
                    };
                    let lo: f64 = lo
                        .trim()
                        .parse()
                        .map_err(|e| bad(&self.path, format!("key '{key}': {e}")))?;
                    let hi: f64 = hi
                        .trim()
                        .parse()
                        .map_err(|e| bad(&self.path, format!("key '{key}': {e}")))?;
                    out.push(Domain::new(lo, hi).map_err(|e| bad(&self.path, e))?);
                }
                Ok(Some(out))
            }
        }
    }

    pub fn dataset(&self) -> Result<DatasetSpec, CliError> {
        let name = self
            .raw("dataset")
            .ok_or_else(|| bad(&self.path, "missing 'dataset' key"))?;
        let spec: DatasetSpec = name.parse().map_err(|e| bad(&self.path, e))?;
        if let DatasetSpec::Csv(p) = &spec {
            if !p.exists() {
                return Err(CliError::input(format!("dataset file {} does not exist", p.display())));
            }
        }
        Ok(spec)
    }

    pub fn spiral_params(&self) -> Result<SpiralParams, CliError> {
        let d = SpiralParams::default();
        Ok(SpiralParams {
            pitch: self.parse_or("spiral_pitch", d.pitch)?,
            turns: self.parse_or("spiral_turns", d.turns)?,
            r0: self.parse_or("spiral_r0", d.r0)?,
        })
    }

    pub fn train_n(&self) -> Result<usize, CliError> {
        self.parse_or("train_n", 1000)
    }

    pub fn test_n(&self) -> Result<usize, CliError> {
        self.parse_or("test_n", 1000)
    }

    pub fn seed(&self) -> Result<Option<u64>, CliError> {
        self.parse("seed")
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        self.raw("out_dir").map(PathBuf::from)
    }

    pub fn model_dir(&self) -> Option<PathBuf> {
        self.raw("model_dir").map(PathBuf::from)
    }

    pub fn runs(&self) -> Result<u32, CliError> {
        self.parse_or("runs", 1)
    }

    pub fn serial(&self) -> Result<bool, CliError> {
        self.parse_or("serial", false)
    }

    pub fn pulse_trace(&self) -> Result<bool, CliError> {
        self.parse_or("pulse_trace", false)
    }

    pub fn labels(&self) -> Result<Option<Vec<f64>>, CliError> {
        self.parse_list("labels")
    }

    pub fn backends(&self) -> Result<Option<Vec<Backend>>, CliError> {
        match self.values.get("backends") {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|f| f.trim().parse::<Backend>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| bad(&self.path, e)),
        }
    }

    pub fn train_sizes(&self) -> Result<Option<Vec<usize>>, CliError> {
        self.parse_list("train_sizes")
    }

    pub fn plane_input(&self) -> Result<usize, CliError> {
        self.parse_or("input", 1)
    }

    pub fn plane_cell(&self) -> Result<usize, CliError> {
        self.parse_or("cell", 1)
    }

    pub fn fuzzy_row(&self) -> Result<bool, CliError> {
        self.parse_or("fuzzy_row", false)
    }

    fn resolution(&self) -> Result<Resolution, CliError> {
        let square: Option<u32> = self.parse("rsn")?;
        let rsn_x = self.parse_or("rsn_x", square.unwrap_or(256))?;
        let rsn_y = self.parse_or("rsn_y", square.unwrap_or(256))?;
        Resolution::new(rsn_x, rsn_y).map_err(|e| bad(&self.path, e))
    }

    fn fast_params(&self) -> Result<FastParams, CliError> {
        let alpha1 = self.parse_or("alpha1", 0.6)?;
        let alpha2 = self.parse_or("alpha2", 0.5)?;
        let sigma = self.parse_or("sigma", 15.0)?;
        let params = match self.parse::<u32>("radius")? {
            Some(r) => FastParams::with_radius(alpha1, alpha2, sigma, r),
            None => FastParams::new(alpha1, alpha2, sigma),
        };
        params.map_err(|e| bad(&self.path, e))
    }

    fn kernel(&self, sigma: f64) -> Result<Option<KernelShape>, CliError> {
        let kind = self.raw("kernel").unwrap_or("gaussian");
        let kernel_sigma = self.parse_or("kernel_sigma", sigma)?;
        let radius: Option<u32> = self.parse("kernel_radius")?;
        let shape = match kind {
            "gaussian" => match radius {
                Some(r) => KernelShape::gaussian_with_radius(kernel_sigma, r),
                None => KernelShape::gaussian(kernel_sigma),
            },
            "pyramid" => KernelShape::pyramid(radius.unwrap_or((3.0 * kernel_sigma).ceil() as u32)),
            "cone" => KernelShape::cone(radius.unwrap_or((3.0 * kernel_sigma).ceil() as u32)),
            other => return Err(bad(&self.path, format!("unknown kernel '{other}'"))),
        };
        shape.map(Some).map_err(|e| bad(&self.path, e))
    }

    fn device(&self) -> Result<DeviceParams, CliError> {
        let d = DeviceParams::default();
        let params = DeviceParams {
            thickness: self.parse_or("device_thickness", d.thickness)?,
            mobility: self.parse_or("device_mobility", d.mobility)?,
            r_on: self.parse_or("device_r_on", d.r_on)?,
            r_off: self.parse_or("device_r_off", d.r_off)?,
            write_threshold: self.parse_or("device_write_threshold", d.write_threshold)?,
            dt: self.parse_or("device_dt", d.dt)?,
        };
        params.validate().map_err(|e| bad(&self.path, e))?;
        Ok(params)
    }

    fn circuit(&self, device: &DeviceParams, fast: &FastParams) -> Result<CircuitParams, CliError> {
        let mut circuit = CircuitParams::standard(device, fast.alpha1, fast.alpha2);
        if let Some(v) = self.parse("v_read")? {
            circuit.v_read = v;
            circuit.v_bias = v;
        }
        circuit.neighbor_count = self.parse_or("neighbor_count", circuit.neighbor_count)?;
        circuit.pwm = PwmParams {
            period: self.parse_or("pwm_period", circuit.pwm.period)?,
            amplitude: self.parse_or("pwm_amplitude", circuit.pwm.amplitude)?,
            duty: self.parse_or("pwm_duty", circuit.pwm.duty)?,
        };
        circuit.write_scale = self.parse("write_scale")?;
        Ok(circuit)
    }

    /// Assemble the model configuration, with CLI-level overrides applied
    /// afterwards by the caller.
    pub fn alm_config(&self) -> Result<AlmConfig, CliError> {
        let fast = self.fast_params()?;
        let device = self.device()?;
        let circuit = self.circuit(&device, &fast)?;
        let backend = match self.raw("backend") {
            None => Backend::Fast,
            Some(b) => b.parse().map_err(|e| bad(&self.path, e))?,
        };
        let partition_mode = match self.raw("partition_mode").unwrap_or("uniform") {
            "uniform" => PartitionMode::Uniform,
            "random" => PartitionMode::Random,
            other => return Err(bad(&self.path, format!("unknown partition mode '{other}'"))),
        };
        Ok(AlmConfig {
            backend,
            resolution: self.resolution()?,
            partitions: self.parse_list("partitions")?.unwrap_or_else(|| vec![1, 1]),
            partition_mode,
            epochs: self.parse_or("epochs", 1)?,
            seed: 0, // set by the command from --seed / config / entropy
            spread_floor: self.parse_or("spread_floor", 1.0)?,
            fast,
            kernel: self.kernel(fast.sigma)?,
            spread_threshold: self.parse_or("spread_threshold", 0.0)?,
            device,
            circuit: Some(circuit),
            input_domains: self.parse_domains("input_domains")?,
            output_domain: self
                .parse_domains("output_domain")?
                .map(|mut v| v.remove(0)),
            auto_partition: self.parse_or("auto_partition", false)?,
            target_fvu: self.parse("target_fvu")?,
            min_cell_samples: self.parse_or("min_cell_samples", 5)?,
            max_partitions: self.parse_or("max_partitions", 64)?,
        })
    }
}
