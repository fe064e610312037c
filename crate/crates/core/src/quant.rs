//! Domains, uniform quantization, and the sample type shared by every backend.
//!
//! Inputs and outputs live on real intervals; every plane works on 1-based
//! quantization levels. `quantize` maps a real value to its level,
//! `dequantize` maps a level back to the cell-center value, so that
//! `quantize(dequantize(i)) == i` for every level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed real interval `[min, max]` with `min < max`, in input or output units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::config(format!("domain bounds must be finite, got [{min}, {max}]")));
        }
        if max - min <= 0.0 {
            return Err(Error::config(format!("domain must satisfy min < max, got [{min}, {max}]")));
        }
        Ok(Domain { min, max })
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

/// Quantization levels per axis of a plane. Both axes default to 256 levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub rsn_x: u32,
    pub rsn_y: u32,
}

impl Resolution {
    pub fn new(rsn_x: u32, rsn_y: u32) -> Result<Self> {
        if rsn_x < 2 || rsn_y < 2 {
            return Err(Error::config(format!(
                "resolution requires at least 2 levels per axis, got {rsn_x}x{rsn_y}"
            )));
        }
        Ok(Resolution { rsn_x, rsn_y })
    }

    pub fn square(levels: u32) -> Result<Self> {
        Self::new(levels, levels)
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { rsn_x: 256, rsn_y: 256 }
    }
}

/// One observation: a D-dimensional input vector and a scalar output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: Vec<f64>,
    pub y: f64,
}

impl Sample {
    pub fn new(x: Vec<f64>, y: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::input("sample input must have at least one dimension"));
        }
        if !y.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("sample components must be finite"));
        }
        Ok(Sample { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Map a real value to its 1-based quantization level on `domain`.
///
/// Values at or below `min` map to 1, at or above `max` to `levels`;
/// interior values use `floor((v - min) * levels / span) + 1`, clamped.
/// Monotone non-decreasing in `value`.
pub fn quantize(value: f64, domain: &Domain, levels: u32) -> Result<u32> {
    if !value.is_finite() {
        return Err(Error::input(format!("cannot quantize non-finite value {value}")));
    }
    if levels < 2 {
        return Err(Error::config(format!("quantization needs at least 2 levels, got {levels}")));
    }
    if value <= domain.min {
        return Ok(1);
    }
    if value >= domain.max {
        return Ok(levels);
    }
    let idx = ((value - domain.min) * levels as f64 / domain.span()).floor() as i64 + 1;
    Ok(idx.clamp(1, levels as i64) as u32)
}

/// Map a 1-based level back to the center value of its cell.
pub fn dequantize(index: u32, domain: &Domain, levels: u32) -> Result<f64> {
    if index < 1 || index > levels {
        return Err(Error::input(format!("level {index} outside 1..={levels}")));
    }
    Ok(domain.min + (index as f64 - 0.5) * domain.span() / levels as f64)
}
