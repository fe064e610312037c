//! Behavioral model of a TiO2 memristive device: linear dopant drift with a
//! hard boundary, plus a programming threshold below which pulses are
//! non-destructive reads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Device constants. Defaults follow the HP device: D = 10 nm,
/// mobility 1e-14 m^2/(sV), R_on 2 kOhm, R_off 200 kOhm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Film thickness D, meters.
    pub thickness: f64,
    /// Average ion mobility, m^2 s^-1 V^-1.
    pub mobility: f64,
    /// Fully doped resistance, ohms.
    pub r_on: f64,
    /// Fully undoped resistance, ohms.
    pub r_off: f64,
    /// Programming threshold, volts; pulses below it leave the state intact.
    pub write_threshold: f64,
    /// Integration step, seconds.
    pub dt: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            thickness: 10e-9,
            mobility: 1e-14,
            r_on: 2e3,
            r_off: 200e3,
            write_threshold: 1.0,
            dt: 1e-7,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_on > 0.0 && self.r_off > self.r_on) {
            return Err(Error::config(format!(
                "device requires 0 < r_on < r_off, got r_on={} r_off={}",
                self.r_on, self.r_off
            )));
        }
        if !(self.thickness > 0.0) || !(self.mobility > 0.0) || !(self.dt > 0.0) {
            return Err(Error::config("thickness, mobility, and dt must be positive"));
        }
        if !(self.write_threshold > 0.0) {
            return Err(Error::config("write threshold must be positive"));
        }
        Ok(())
    }
}

/// Doped-region width `w` in meters, `0 <= w <= thickness`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemristorState {
    w: f64,
}

impl MemristorState {
    pub fn new(w: f64, params: &DeviceParams) -> Result<Self> {
        if !w.is_finite() || w < 0.0 || w > params.thickness {
            return Err(Error::input(format!(
                "doped width {w} outside [0, {}]",
                params.thickness
            )));
        }
        Ok(MemristorState { w })
    }

    /// State whose memristance equals `r` (inverse of the resistance map).
    pub fn with_resistance(r: f64, params: &DeviceParams) -> Result<Self> {
        if r < params.r_on || r > params.r_off {
            return Err(Error::input(format!(
                "target resistance {r} outside [{}, {}]",
                params.r_on, params.r_off
            )));
        }
        let w = params.thickness * (params.r_off - r) / (params.r_off - params.r_on);
        Ok(MemristorState { w })
    }

    pub fn width(&self) -> f64 {
        self.w
    }
}

/// Memristance `R_on * w/D + R_off * (1 - w/D)`.
pub fn memristance(state: &MemristorState, params: &DeviceParams) -> f64 {
    let frac = state.w / params.thickness;
    params.r_on * frac + params.r_off * (1.0 - frac)
}

/// Drive the device with a constant-voltage pulse.
///
/// Below the programming threshold the state is returned unchanged (the
/// non-destructive read regime). Otherwise dopant drift
/// `dw/dt = mobility * r_on / D * V / R(w)` is integrated with explicit
/// fixed steps of `params.dt`, clamping `w` to `[0, D]`. Positive voltage
/// widens the doped region (drives the memristance toward `r_on`).
pub fn apply_pulse(
    state: MemristorState,
    volts: f64,
    duration: f64,
    params: &DeviceParams,
) -> Result<MemristorState> {
    if !volts.is_finite() {
        return Err(Error::input(format!("pulse voltage must be finite, got {volts}")));
    }
    if !(duration >= 0.0) {
        return Err(Error::input(format!("pulse duration must be non-negative, got {duration}")));
    }
    if volts.abs() < params.write_threshold || duration == 0.0 {
        return Ok(state);
    }
    let gain = params.mobility * params.r_on / params.thickness;
    let mut w = state.w;
    let mut remaining = duration;
    while remaining > 0.0 {
        let step = remaining.min(params.dt);
        let current = volts / (params.r_on * (w / params.thickness)
            + params.r_off * (1.0 - w / params.thickness));
        w = (w + gain * current * step).clamp(0.0, params.thickness);
        remaining -= step;
    }
    Ok(MemristorState { w })
}
