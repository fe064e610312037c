//! Describing vectors: three length-`rsn_x` sequences (output lower bound,
//! upper bound, narrow path) that replace a full ink-drop plane.
//!
//! A training sample moves each vector toward the observed output level by a
//! learning-rate fraction of the *center-column* distance, faded over the
//! neighborhood by a 1-D Gaussian. Updates are local and sequential: unlike
//! the classic plane, the result depends on sample order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quant::{Domain, Resolution};

/// Smallest spread reported by [`DescribingVectors::spread`]; keeps the
/// inverse-spread inference weights finite after heavy training.
pub const SPREAD_FLOOR: f64 = 1.0;

/// Learning parameters for one describing-vector plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FastParams {
    /// Learning rate of the bound vectors, in (0, 1].
    pub alpha1: f64,
    /// Learning rate of the narrow-path vector, in (0, 1].
    pub alpha2: f64,
    /// Gaussian neighborhood scale, in grid cells.
    pub sigma: f64,
    /// Neighborhood radius in columns; defaults to `ceil(3 sigma)`.
    pub radius: u32,
}

impl FastParams {
    pub fn new(alpha1: f64, alpha2: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::config(format!("sigma must be positive, got {sigma}")));
        }
        Self::with_radius(alpha1, alpha2, sigma, (3.0 * sigma).ceil() as u32)
    }

    pub fn with_radius(alpha1: f64, alpha2: f64, sigma: f64, radius: u32) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::config(format!("{name} must lie in (0, 1], got {a}")));
            }
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::config(format!("sigma must be positive, got {sigma}")));
        }
        if radius == 0 {
            return Err(Error::config("neighborhood radius must be positive"));
        }
        Ok(FastParams { alpha1, alpha2, sigma, radius })
    }
}

/// One describing-vector plane.
#[derive(Debug, Clone)]
pub struct DescribingVectors {
    lower: Vec<f64>,
    upper: Vec<f64>,
    narrow: Vec<f64>,
    /// Gaussian weights for offsets `-radius..=radius`.
    weights: Vec<f64>,
    params: FastParams,
    resolution: Resolution,
    input_domain: Domain,
    output_domain: Domain,
}

impl DescribingVectors {
    /// Fresh vectors: lower bound 0, upper bound `rsn_y`, narrow path `rsn_y / 2`.
    pub fn new(
        resolution: Resolution,
        params: FastParams,
        input_domain: Domain,
        output_domain: Domain,
    ) -> Self {
        let n = resolution.rsn_x as usize;
        let r = params.radius as i64;
        let weights = (-r..=r)
            .map(|u| (-((u * u) as f64) / (2.0 * params.sigma * params.sigma)).exp())
            .collect();
        DescribingVectors {
            lower: vec![0.0; n],
            upper: vec![resolution.rsn_y as f64; n],
            narrow: vec![resolution.rsn_y as f64 / 2.0; n],
            weights,
            params,
            resolution,
            input_domain,
            output_domain,
        }
    }

    pub fn params(&self) -> FastParams {
        self.params
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn input_domain(&self) -> Domain {
        self.input_domain
    }

    pub fn output_domain(&self) -> Domain {
        self.output_domain
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn narrow(&self) -> &[f64] {
        &self.narrow
    }

    /// Restore a plane from persisted vectors.
    pub fn from_parts(
        resolution: Resolution,
        params: FastParams,
        input_domain: Domain,
        output_domain: Domain,
        lower: Vec<f64>,
        upper: Vec<f64>,
        narrow: Vec<f64>,
    ) -> Result<Self> {
        let n = resolution.rsn_x as usize;
        if lower.len() != n || upper.len() != n || narrow.len() != n {
            return Err(Error::input(format!("vector length must equal rsn_x = {n}")));
        }
        let mut v = Self::new(resolution, params, input_domain, output_domain);
        v.lower = lower;
        v.upper = upper;
        v.narrow = narrow;
        Ok(v)
    }

    fn check_col(&self, xq: u32) -> Result<usize> {
        if xq < 1 || xq > self.resolution.rsn_x {
            return Err(Error::input(format!(
                "input level {xq} outside 1..={}",
                self.resolution.rsn_x
            )));
        }
        Ok((xq - 1) as usize)
    }

    /// Apply one sample at column `xq` with output level `yq` (a real in
    /// `[0, rsn_y]`, so analog replay is possible).
    ///
    /// Distances are read at the center column before any write; every
    /// written cell is clamped to `[0, rsn_y]`, and a column whose bounds
    /// would cross is collapsed to their midpoint so `lower <= upper`
    /// holds everywhere.
    pub fn update(&mut self, xq: u32, yq: f64) -> Result<()> {
        let c = self.check_col(xq)?;
        let top = self.resolution.rsn_y as f64;
        if !yq.is_finite() || yq < 0.0 || yq > top {
            return Err(Error::input(format!("output level {yq} outside [0, {top}]")));
        }
        let d_lower = yq - self.lower[c];
        let d_upper = yq - self.upper[c];
        let d_narrow = yq - self.narrow[c];
        let (a1, a2) = (self.params.alpha1, self.params.alpha2);
        let r = self.params.radius as i64;
        let n = self.resolution.rsn_x as i64;
        let c = c as i64;
        for u in (-r).max(-c)..=r.min(n - 1 - c) {
            let g = self.weights[(u + r) as usize];
            let i = (c + u) as usize;
            let lo = (self.lower[i] + a1 * d_lower * g).clamp(0.0, top);
            let hi = (self.upper[i] + a1 * d_upper * g).clamp(0.0, top);
            if lo > hi {
                let mid = 0.5 * (lo + hi);
                self.lower[i] = mid;
                self.upper[i] = mid;
            } else {
                self.lower[i] = lo;
                self.upper[i] = hi;
            }
            self.narrow[i] = (self.narrow[i] + a2 * d_narrow * g).clamp(0.0, top);
        }
        Ok(())
    }

    /// Fold [`DescribingVectors::update`] over the samples, `epochs` times.
    /// Sequential: sample order matters, unlike the classic plane.
    pub fn train(&mut self, samples: &[(u32, f64)], epochs: u32) -> Result<()> {
        if epochs == 0 {
            return Err(Error::config("epochs must be at least 1"));
        }
        for _ in 0..epochs {
            for &(xq, yq) in samples {
                self.update(xq, yq)?;
            }
        }
        Ok(())
    }

    /// The narrow-path level at `xq`.
    pub fn narrow_path(&self, xq: u32) -> Result<f64> {
        Ok(self.narrow[self.check_col(xq)?])
    }

    /// Upper minus lower bound at `xq`, floored at [`SPREAD_FLOOR`].
    pub fn spread(&self, xq: u32) -> Result<f64> {
        let c = self.check_col(xq)?;
        Ok((self.upper[c] - self.lower[c]).max(SPREAD_FLOOR))
    }

    /// Fuzzy output at `xq`: membership center on the narrow path, width
    /// proportional to the spread (unit proportionality).
    pub fn fuzzy_output(&self, xq: u32) -> Result<(f64, f64)> {
        Ok((self.narrow_path(xq)?, self.spread(xq)?))
    }

    /// Stored cells: three vectors of `rsn_x`.
    pub fn cell_count(&self) -> usize {
        3 * self.resolution.rsn_x as usize
    }
}
