//! Wavetable sonification of soil-moisture readings.
//!
//! Sensor readings are normalized against a per-soil calibration, mapped to
//! an inverted one-octave major triad (dry = high, wet = low) and to a
//! sine/sawtooth crossfade (dry = buzzy, wet = smooth), and rendered as
//! deterministic stereo audio.
//!
//! Module map:
//! - [`dsp`]: wavetables, oscillator, envelope, filter, panning and the
//!   FFT bandlimit check.
//! - [`mapping`]: calibration, pitch and timbre mapping.
//! - [`sensor_io`]: datalog, event-script and profile formats, simulated
//!   sensor streams.
//! - [`engine`]: synthesis configuration, the three operating modes and PCM
//!   quantization.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dsp;
pub mod engine;
mod error;
pub mod kv;
pub mod mapping;
pub mod sensor_io;

pub use error::{Error, Result};
