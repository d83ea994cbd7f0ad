//! chanforge: deterministic mmWave MIMO channel construction and comparison.
//!
//! The crate builds narrowband geometric MIMO channel matrices from per-ray
//! propagation data, builds a per-element spherical-wave reference channel
//! from explicit path geometry, and quantifies the error and capacity gap
//! between the two as a function of transmitter-receiver distance.
//!
//! Modules:
//!
//! * [`ray_model`] — per-ray data model, CSV/JSON I/O, top-L selection.
//! * [`array_geom`] — uniform linear arrays and steering vectors.
//! * [`canyon_tracer`] — image-source ray tracer for an urban-canyon scene.
//! * [`channel_synth`] — the two channel constructions and the plane-wave
//!   error bound.
//! * [`analysis`] — phase-aligned Frobenius error, log-det capacity (with a
//!   self-contained Hermitian Jacobi eigensolver), distance sweeps.
//! * [`cli`] — the batch subcommands behind the `chanforge` binary.
//!
//! Everything is a pure function of its inputs: no randomness, no hidden
//! state, byte-identical outputs on re-runs. See the crate examples for
//! runnable walkthroughs of each capability.
//!
//! ```
//! use chanforge::analysis::channel_error;
//! use chanforge::array_geom::ArrayConfig;
//! use chanforge::canyon_tracer::{trace_pair_with_paths, Scene};
//! use chanforge::channel_synth::{full_array_channel, geometric_channel, FullAmplitude};
//!
//! // trace one receiver of the default canyon, then build both channels
//! let scene = Scene::default_scene();
//! let (record, paths) = trace_pair_with_paths(&scene, "RX5")?;
//! let rx_pos = scene.rx_position("RX5")?;
//! let array = ArrayConfig::parse_descriptor("ula:4:0.5:y")?;
//!
//! let geometric = geometric_channel(
//!     &record, &array.at(scene.tx), &array.at(rx_pos), record.rays.len());
//! let full = full_array_channel(
//!     &paths, &array.at(scene.tx), &array.at(rx_pos),
//!     scene.frequency_hz, FullAmplitude::PerElement, ("TX", "RX5"))?;
//!
//! // ~92 m out, the plane-wave model is already close to the reference
//! let report = channel_error(&geometric, &full)?;
//! assert!(report.aligned_error_pct < 1.0);
//! # Ok::<(), chanforge::Error>(())
//! ```

pub mod analysis;
pub mod array_geom;
pub mod canonical;
pub mod canyon_tracer;
pub mod channel_synth;
pub mod cli;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod ray_model;

pub use error::{Error, Result};

/// Speed of light in vacuum, exact.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
