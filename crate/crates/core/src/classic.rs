//! The original ink-drop-spread plane: a dense darkness matrix with per-column
//! narrow-path (weighted median) and spread (ink width) extraction.
//!
//! This is the reference backend and the memory/runtime baseline the
//! describing-vector backend is compared against. Deliberately the
//! straightforward dense implementation.

use crate::error::{Error, Result};
use crate::kernel::{make_kernel, Kernel, KernelShape};
use crate::quant::{Domain, Resolution};

#[derive(Debug, Clone)]
pub struct IdsPlane {
    /// Column-major accumulated membership: index `(x-1) * rsn_y + (y-1)`.
    darkness: Vec<f64>,
    resolution: Resolution,
    input_domain: Domain,
    output_domain: Domain,
    shape: KernelShape,
    kernel: Kernel,
    /// Minimum darkness for a cell to count toward the spread.
    spread_threshold: f64,
}

impl IdsPlane {
    pub fn new(
        resolution: Resolution,
        input_domain: Domain,
        output_domain: Domain,
        shape: KernelShape,
        spread_threshold: f64,
    ) -> Result<Self> {
        if !(spread_threshold >= 0.0) {
            return Err(Error::config(format!(
                "spread threshold must be non-negative, got {spread_threshold}"
            )));
        }
        Ok(IdsPlane {
            darkness: vec![0.0; resolution.rsn_x as usize * resolution.rsn_y as usize],
            resolution,
            input_domain,
            output_domain,
            shape,
            kernel: make_kernel(&shape),
            spread_threshold,
        })
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

    pub fn kernel_shape(&self) -> KernelShape {
        self.shape
    }

    pub fn spread_threshold(&self) -> f64 {
        self.spread_threshold
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

    /// Darkness at 1-based grid cell `(xq, yq)`.
    pub fn darkness(&self, xq: u32, yq: u32) -> Result<f64> {
        let col = self.check_col(xq)?;
        if yq < 1 || yq > self.resolution.rsn_y {
            return Err(Error::input(format!(
                "output level {yq} outside 1..={}",
                self.resolution.rsn_y
            )));
        }
        Ok(self.darkness[col * self.resolution.rsn_y as usize + (yq - 1) as usize])
    }

    /// Overwrite one cell; used when restoring a persisted plane.
    pub fn set_darkness(&mut self, xq: u32, yq: u32, value: f64) -> Result<()> {
        let col = self.check_col(xq)?;
        if yq < 1 || yq > self.resolution.rsn_y {
            return Err(Error::input(format!(
                "output level {yq} outside 1..={}",
                self.resolution.rsn_y
            )));
        }
        if !value.is_finite() || value < 0.0 {
            return Err(Error::input(format!("darkness must be finite and non-negative, got {value}")));
        }
        self.darkness[col * self.resolution.rsn_y as usize + (yq - 1) as usize] = value;
        Ok(())
    }

    /// The darkness column for input level `xq` (output level 1 first).
    pub fn column(&self, xq: u32) -> Result<&[f64]> {
        let col = self.check_col(xq)?;
        let h = self.resolution.rsn_y as usize;
        Ok(&self.darkness[col * h..(col + 1) * h])
    }

    pub fn total_darkness(&self) -> f64 {
        self.darkness.iter().sum()
    }

    /// Stamp one drop at grid cell `(xq, yq)`; cells falling outside the grid
    /// are skipped, so drops truncate at the borders.
    pub fn ink_drop(&mut self, xq: u32, yq: u32) -> Result<()> {
        self.check_col(xq)?;
        if yq < 1 || yq > self.resolution.rsn_y {
            return Err(Error::input(format!(
                "output level {yq} outside 1..={}",
                self.resolution.rsn_y
            )));
        }
        let r = self.kernel.radius() as i64;
        let (cx, cy) = (xq as i64 - 1, yq as i64 - 1);
        let (w, h) = (self.resolution.rsn_x as i64, self.resolution.rsn_y as i64);
        let u_lo = (-r).max(-cx);
        let u_hi = r.min(w - 1 - cx);
        let v_lo = (-r).max(-cy);
        let v_hi = r.min(h - 1 - cy);
        for u in u_lo..=u_hi {
            let base = ((cx + u) * h) as usize;
            for v in v_lo..=v_hi {
                self.darkness[base + (cy + v) as usize] += self.kernel.weight(u, v);
            }
        }
        Ok(())
    }

    /// Fold [`IdsPlane::ink_drop`] over quantized `(xq, yq)` pairs. The darkness sum
    /// is order-independent up to floating-point accumulation.
    pub fn train(&mut self, samples: &[(u32, u32)]) -> Result<()> {
        for &(xq, yq) in samples {
            self.ink_drop(xq, yq)?;
        }
        Ok(())
    }

    /// Weighted median of the column: the smallest output level `b` whose
    /// cumulative darkness reaches half the column total. A white column
    /// falls back to `ceil(rsn_y / 2)`.
    pub fn narrow_path(&self, xq: u32) -> Result<u32> {
        let column = self.column(xq)?;
        let total: f64 = column.iter().sum();
        if total <= 0.0 {
            return Ok(self.resolution.rsn_y.div_ceil(2));
        }
        let half = total / 2.0;
        let mut acc = 0.0;
        for (i, d) in column.iter().enumerate() {
            acc += d;
            if acc >= half {
                return Ok(i as u32 + 1);
            }
        }
        Ok(self.resolution.rsn_y)
    }

    /// Width of the inked band: `max{y : d > T} - min{y : d > T}`. When no
    /// cell exceeds the threshold the white-column convention `rsn_y / 2`
    /// applies.
    pub fn spread(&self, xq: u32) -> Result<u32> {
        let column = self.column(xq)?;
        let t = self.spread_threshold;
        let first = column.iter().position(|&d| d > t);
        match first {
            Some(lo) => {
                let hi = column.iter().rposition(|&d| d > t).unwrap();
                Ok((hi - lo) as u32)
            }
            None => Ok(self.resolution.rsn_y / 2),
        }
    }

    /// Stored cells: the full `rsn_x * rsn_y` matrix.
    pub fn cell_count(&self) -> usize {
        self.resolution.rsn_x as usize * self.resolution.rsn_y as usize
    }
}
