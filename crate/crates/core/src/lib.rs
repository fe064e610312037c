//! Adaptive fuzzy function approximation in the Active Learning Method
//! family: a multi-input system is split into single-input planes, each
//! plane learns an input-output relationship, and inference combines the
//! per-input narrow paths weighted by inverse spread.
//!
//! Three interchangeable plane backends:
//! - [`classic::IdsPlane`] — the dense ink-drop-spread grid (reference
//!   implementation and memory/runtime baseline),
//! - [`fast::DescribingVectors`] — three length-`rsn_x` vectors replacing
//!   the grid, trained by local distance-proportional updates,
//! - [`crossbar::CrossbarPlane`] — a behavioral memristor-crossbar holding
//!   the same three vectors in device resistances.
//!
//! [`alm`] hosts the engine (partitioning, routing, fit/predict/classify),
//! `bench` the seeded benchmark harness, [`datasets`] the generators, and
//! [`persist`] the model directory format.

pub mod alm;
pub mod bench;
pub mod classic;
pub mod crossbar;
pub mod datasets;
pub mod error;
pub mod fast;
pub mod kernel;
pub mod memristor;
pub mod metrics;
pub mod persist;
pub mod quant;

pub use alm::{fit, AlmConfig, AlmModel, Backend, PartitionMode, PartitionScheme, Plane};
pub use error::{Error, Result};
pub use quant::{dequantize, quantize, Domain, Resolution, Sample};
