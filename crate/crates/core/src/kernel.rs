//! Ink-drop membership shapes: the 1-D Gaussian neighborhood weight used by
//! describing vectors and the 2-D stamp tables used by classic planes.
//!
//! Every kernel has weight 1 at its center, values in [0, 1], and is
//! non-increasing with distance from the center.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-D neighborhood weight `exp(-u^2 / (2 sigma^2))`, symmetric in `u`.
pub fn gaussian_weight(u: i64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::config(format!("gaussian weight needs sigma > 0, got {sigma}")));
    }
    let u = u as f64;
    Ok((-(u * u) / (2.0 * sigma * sigma)).exp())
}

/// Shape of a 2-D ink drop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum KernelShape {
    /// `exp(-(u^2 + v^2) / (2 sigma^2))`
    Gaussian { radius: u32, sigma: f64 },
    /// `1 - max(|u|, |v|) / (R + 1)`
    Pyramid { radius: u32 },
    /// `max(0, 1 - sqrt(u^2 + v^2) / (R + 1))`
    Cone { radius: u32 },
}

impl KernelShape {
    /// Gaussian drop with radius `ceil(3 sigma)`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::config(format!("gaussian kernel needs sigma > 0, got {sigma}")));
        }
        Ok(KernelShape::Gaussian { radius: (3.0 * sigma).ceil() as u32, sigma })
    }

    pub fn gaussian_with_radius(sigma: f64, radius: u32) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::config(format!("gaussian kernel needs sigma > 0, got {sigma}")));
        }
        Self::check_radius(radius)?;
        Ok(KernelShape::Gaussian { radius, sigma })
    }

    pub fn pyramid(radius: u32) -> Result<Self> {
        Self::check_radius(radius)?;
        Ok(KernelShape::Pyramid { radius })
    }

    pub fn cone(radius: u32) -> Result<Self> {
        Self::check_radius(radius)?;
        Ok(KernelShape::Cone { radius })
    }

    fn check_radius(radius: u32) -> Result<()> {
        if radius == 0 {
            return Err(Error::config("kernel radius must be positive"));
        }
        Ok(())
    }

    pub fn radius(&self) -> u32 {
        match *self {
            KernelShape::Gaussian { radius, .. }
            | KernelShape::Pyramid { radius }
            | KernelShape::Cone { radius } => radius,
        }
    }
}

/// Precomputed `(2R+1) x (2R+1)` weight table for a [`KernelShape`].
#[derive(Debug, Clone)]
pub struct Kernel {
    radius: u32,
    weights: Vec<f64>,
}

/// Build the weight table for `shape`.
pub fn make_kernel(shape: &KernelShape) -> Kernel {
    let r = shape.radius() as i64;
    let side = (2 * r + 1) as usize;
    let mut weights = Vec::with_capacity(side * side);
    for u in -r..=r {
        for v in -r..=r {
            let w = match *shape {
                KernelShape::Gaussian { sigma, .. } => {
                    (-((u * u + v * v) as f64) / (2.0 * sigma * sigma)).exp()
                }
                KernelShape::Pyramid { radius } => {
                    1.0 - u.abs().max(v.abs()) as f64 / (radius as f64 + 1.0)
                }
                KernelShape::Cone { radius } => {
                    (1.0 - ((u * u + v * v) as f64).sqrt() / (radius as f64 + 1.0)).max(0.0)
                }
            };
            weights.push(w);
        }
    }
    Kernel { radius: shape.radius(), weights }
}

impl Kernel {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Weight at offset `(u, v)` from the center, `|u|, |v| <= radius`.
    pub fn weight(&self, u: i64, v: i64) -> f64 {
        let r = self.radius as i64;
        debug_assert!(u.abs() <= r && v.abs() <= r);
        self.weights[((u + r) * (2 * r + 1) + (v + r)) as usize]
    }

    /// Sum of all table weights (the mass of one untruncated drop).
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}
