//! Behavioral crossbar backend: a 3 x `rsn_x` memristor array holding the
//! describing vectors of one plane, with op-amp read chains and
//! PWM-style distance-proportional writes.
//!
//! Row reads follow `z = v_bias - v_read * R_F1 / R_M`; with `R_F1 = r_on`
//! and `v_bias = v_read` that maps resistances `[r_on, r_off]` onto read
//! voltages `[0, ~v_read]`, which convert linearly to output levels. A write
//! stores the gain-scaled distance between the target level's voltage and
//! the current read on a capacitor, then drives the device column with a
//! fixed-amplitude pulse whose *duration* encodes the capacitor voltage;
//! neighbor columns receive the same pulse with duration halved per step,
//! the connector circuit's dyadic approximation of the Gaussian fade.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fast::{DescribingVectors, FastParams};
use crate::memristor::{apply_pulse, memristance, DeviceParams, MemristorState};
use crate::quant::{Domain, Resolution};

/// The three physical rows of the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VectorRow {
    Upper,
    Lower,
    Narrow,
}

impl VectorRow {
    pub const ALL: [VectorRow; 3] = [VectorRow::Upper, VectorRow::Lower, VectorRow::Narrow];

    fn index(self) -> usize {
        match self {
            VectorRow::Upper => 0,
            VectorRow::Lower => 1,
            VectorRow::Narrow => 2,
        }
    }
}

/// Write-pulse generator settings: triangular-carrier period, pulse
/// amplitude, and maximum duty fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PwmParams {
    pub period: f64,
    pub amplitude: f64,
    pub duty: f64,
}

impl Default for PwmParams {
    fn default() -> Self {
        PwmParams { period: 10e-3, amplitude: 3.0, duty: 0.8 }
    }
}

/// Read/write chain constants of one crossbar plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// First-stage feedback resistance R_F1; must equal the device `r_on`.
    pub feedback_r: f64,
    pub v_read: f64,
    /// Must equal `v_read`; kept separate because it is a distinct node.
    pub v_bias: f64,
    /// Bound-row learning gain (feedback ratio of the distance stage).
    pub alpha1_gain: f64,
    /// Narrow-row learning gain.
    pub alpha2_gain: f64,
    /// Total columns driven per write (center plus neighbors); odd.
    pub neighbor_count: u32,
    pub pwm: PwmParams,
    /// Full-scale write duration override, seconds; `None` calibrates from
    /// the device model at the narrow row's initial operating point.
    pub write_scale: Option<f64>,
}

impl CircuitParams {
    /// Conventional setup: half-scale reads, unit feedback at `r_on`.
    pub fn standard(device: &DeviceParams, alpha1_gain: f64, alpha2_gain: f64) -> Self {
        CircuitParams {
            feedback_r: device.r_on,
            v_read: 0.5,
            v_bias: 0.5,
            alpha1_gain,
            alpha2_gain,
            neighbor_count: 5,
            pwm: PwmParams::default(),
            write_scale: None,
        }
    }
}

/// One pulse applied to a device, for audit traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub row: VectorRow,
    pub col: u32,
    pub amplitude: f64,
    pub duration: f64,
}

/// A 3 x `rsn_x` crossbar plane, behaviorally equivalent to one
/// [`DescribingVectors`] plane.
#[derive(Debug, Clone)]
pub struct CrossbarPlane {
    /// Row-major device states: `rows[row][col]`.
    rows: [Vec<MemristorState>; 3],
    device: DeviceParams,
    circuit: CircuitParams,
    resolution: Resolution,
    input_domain: Domain,
    output_domain: Domain,
    /// Seconds of pulse per volt-of-full-scale capacitor voltage.
    write_seconds_full_scale: f64,
    trace: Option<Vec<PulseEvent>>,
}

impl CrossbarPlane {
    /// Initialize the array: upper row at `r_off`, lower row at `r_on`,
    /// narrow row at `2 r_on` (which reads exactly `v_read / 2`).
    pub fn new(
        resolution: Resolution,
        device: DeviceParams,
        circuit: CircuitParams,
        input_domain: Domain,
        output_domain: Domain,
    ) -> Result<Self> {
        device.validate()?;
        if 2.0 * device.r_on > device.r_off {
            return Err(Error::config(format!(
                "narrow-row init needs 2 r_on <= r_off, got r_on={} r_off={}",
                device.r_on, device.r_off
            )));
        }
        if circuit.v_bias != circuit.v_read {
            return Err(Error::config("the bias node must be tied to v_read"));
        }
        if circuit.feedback_r != device.r_on {
            return Err(Error::config("the first-stage feedback resistance must equal r_on"));
        }
        if !(circuit.v_read > 0.0) {
            return Err(Error::config("v_read must be positive"));
        }
        if circuit.v_read >= device.write_threshold {
            return Err(Error::config("reads must stay below the programming threshold"));
        }
        if circuit.neighbor_count % 2 == 0 || circuit.neighbor_count == 0 {
            return Err(Error::config("neighbor count must be odd"));
        }
        if !(circuit.pwm.duty > 0.0 && circuit.pwm.duty <= 1.0) {
            return Err(Error::config("pwm duty must lie in (0, 1]"));
        }
        if circuit.pwm.amplitude < device.write_threshold {
            return Err(Error::config("pwm amplitude must reach the programming threshold"));
        }
        for (name, g) in [("alpha1_gain", circuit.alpha1_gain), ("alpha2_gain", circuit.alpha2_gain)] {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::config(format!("{name} must lie in (0, 1], got {g}")));
            }
        }
        let n = resolution.rsn_x as usize;
        let upper = vec![MemristorState::with_resistance(device.r_off, &device)?; n];
        let lower = vec![MemristorState::with_resistance(device.r_on, &device)?; n];
        let narrow = vec![MemristorState::with_resistance(2.0 * device.r_on, &device)?; n];
        let write_seconds_full_scale = match circuit.write_scale {
            Some(s) if s > 0.0 => s,
            Some(s) => return Err(Error::config(format!("write scale must be positive, got {s}"))),
            None => calibrate_write_scale(&device, &circuit),
        };
        Ok(CrossbarPlane {
            rows: [upper, lower, narrow],
            device,
            circuit,
            resolution,
            input_domain,
            output_domain,
            write_seconds_full_scale,
            trace: None,
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

    pub fn device_params(&self) -> DeviceParams {
        self.device
    }

    pub fn circuit(&self) -> CircuitParams {
        self.circuit
    }

    /// Seconds of pulse corresponding to a full-scale capacitor voltage.
    pub fn write_seconds_full_scale(&self) -> f64 {
        self.write_seconds_full_scale
    }

    /// Start recording pulse events.
    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn take_trace(&mut self) -> Vec<PulseEvent> {
        self.trace.take().unwrap_or_default()
    }

    fn check_col(&self, col: u32) -> Result<usize> {
        if col < 1 || col > self.resolution.rsn_x {
            return Err(Error::input(format!(
                "column {col} outside 1..={}",
                self.resolution.rsn_x
            )));
        }
        Ok((col - 1) as usize)
    }

    /// Device widths of one row, for state-integrity checks and persistence.
    pub fn widths(&self, row: VectorRow) -> Vec<f64> {
        self.rows[row.index()].iter().map(|s| s.width()).collect()
    }

    /// Memristance of one cell, ohms.
    pub fn cell_resistance(&self, row: VectorRow, col: u32) -> Result<f64> {
        let c = self.check_col(col)?;
        Ok(memristance(&self.rows[row.index()][c], &self.device))
    }

    /// Restore a cell from a persisted memristance.
    pub fn set_cell_resistance(&mut self, row: VectorRow, col: u32, ohms: f64) -> Result<()> {
        let c = self.check_col(col)?;
        self.rows[row.index()][c] = MemristorState::with_resistance(ohms, &self.device)?;
        Ok(())
    }

    /// Second-stage read voltage `z = v_bias - v_read * R_F1 / R_M`.
    /// Reads are sub-threshold and never disturb the device.
    pub fn read_cell(&self, row: VectorRow, col: u32) -> Result<f64> {
        let c = self.check_col(col)?;
        let r_m = memristance(&self.rows[row.index()][c], &self.device);
        Ok(self.circuit.v_bias - self.circuit.v_read * self.circuit.feedback_r / r_m)
    }

    /// Differential spread output `SP = z_upper - z_lower`.
    pub fn read_spread(&self, col: u32) -> Result<f64> {
        Ok(self.read_cell(VectorRow::Upper, col)? - self.read_cell(VectorRow::Lower, col)?)
    }

    /// Read voltage converted to an output level via the linear
    /// `level = z / v_read * rsn_y` convention.
    pub fn read_level(&self, row: VectorRow, col: u32) -> Result<f64> {
        Ok(self.read_cell(row, col)? / self.circuit.v_read * self.resolution.rsn_y as f64)
    }

    /// Spread in output levels.
    pub fn read_spread_level(&self, col: u32) -> Result<f64> {
        Ok(self.read_spread(col)? / self.circuit.v_read * self.resolution.rsn_y as f64)
    }

    /// Program one sample: for each row, read the center cell, form the
    /// capacitor voltage `v_C = gain * (v_train - z)`, and drive the center
    /// column plus `(m-1)/2` neighbors each side with fixed-amplitude pulses
    /// whose durations fall off dyadically (x1, x1/2, x1/4, ...). The pulse
    /// polarity is wired so positive `v_C` raises the read level.
    pub fn write_sample(&mut self, xq: u32, y_level: f64) -> Result<()> {
        self.check_col(xq)?;
        let top = self.resolution.rsn_y as f64;
        if !y_level.is_finite() || y_level < 0.0 || y_level > top {
            return Err(Error::input(format!("output level {y_level} outside [0, {top}]")));
        }
        let v_train = self.circuit.v_read * y_level / top;
        let half = ((self.circuit.neighbor_count - 1) / 2) as i64;
        let n = self.resolution.rsn_x as i64;
        for row in VectorRow::ALL {
            let gain = match row {
                VectorRow::Narrow => self.circuit.alpha2_gain,
                _ => self.circuit.alpha1_gain,
            };
            let z = self.read_cell(row, xq)?;
            let v_c = gain * (v_train - z);
            // capacitor voltages below the noise floor schedule no pulse
            if v_c.abs() < 1e-12 * self.circuit.v_read {
                continue;
            }
            let center_duration = v_c.abs() / self.circuit.v_read * self.write_seconds_full_scale;
            // raising z means raising R_M, i.e. shrinking the doped region,
            // so the row wiring inverts the pulse polarity
            let volts = -v_c.signum() * self.circuit.pwm.amplitude;
            let c = xq as i64 - 1;
            for u in (-half).max(-c)..=half.min(n - 1 - c) {
                let duration = center_duration * 0.5f64.powi(u.unsigned_abs() as i32);
                let i = (c + u) as usize;
                self.rows[row.index()][i] =
                    apply_pulse(self.rows[row.index()][i], volts, duration, &self.device)?;
                if let Some(trace) = &mut self.trace {
                    trace.push(PulseEvent {
                        row,
                        col: (c + u) as u32 + 1,
                        amplitude: volts,
                        duration,
                    });
                }
            }
        }
        Ok(())
    }

    /// Snapshot the array as software describing vectors. The synthesized
    /// parameters mirror the circuit gains; the nominal sigma is set so the
    /// 3-sigma radius matches the hardware write window.
    pub fn read_vectors(&self) -> Result<DescribingVectors> {
        let half = (self.circuit.neighbor_count - 1) / 2;
        let sigma = (half as f64 / 3.0).max(1e-3);
        let params = FastParams::with_radius(
            self.circuit.alpha1_gain,
            self.circuit.alpha2_gain,
            sigma,
            half.max(1),
        )?;
        let top = self.resolution.rsn_y as f64;
        let n = self.resolution.rsn_x as usize;
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        let mut narrow = Vec::with_capacity(n);
        for col in 1..=self.resolution.rsn_x {
            lower.push(self.read_level(VectorRow::Lower, col)?.clamp(0.0, top));
            upper.push(self.read_level(VectorRow::Upper, col)?.clamp(0.0, top));
            narrow.push(self.read_level(VectorRow::Narrow, col)?.clamp(0.0, top));
        }
        DescribingVectors::from_parts(
            self.resolution,
            params,
            self.input_domain,
            self.output_domain,
            lower,
            upper,
            narrow,
        )
    }

    /// Stored cells: three device rows of `rsn_x`.
    pub fn cell_count(&self) -> usize {
        3 * self.resolution.rsn_x as usize
    }
}

/// Full-scale write duration from the device model: the sensitivity of the
/// read node to pulse time, evaluated at the narrow row's initial state
/// (`R_M = 2 r_on`) with the configured amplitude. A capacitor voltage of
/// `v_read` then maps to the duration that moves the read by `v_read` at
/// that operating point.
fn calibrate_write_scale(device: &DeviceParams, circuit: &CircuitParams) -> f64 {
    let r_cal = 2.0 * device.r_on;
    let slope = circuit.v_read
        * device.mobility
        * device.r_on
        * device.r_on
        * (device.r_off - device.r_on)
        * circuit.pwm.amplitude
        / (device.thickness * device.thickness * r_cal.powi(3));
    circuit.v_read / slope
}
