use std::f64::consts::PI;

use crate::{Error, Result};

/// Single-cycle table length used by the engine.
pub const TABLE_LEN: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Sine,
    /// Sawtooth built from a finite sum of harmonics.
    AdditiveSaw,
    /// Straight falling line with no bandlimiting. Only used to demonstrate
    /// aliasing.
    NaiveRamp,
    Custom,
}

/// One period of a waveform, normalized to [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Wavetable {
    samples: Vec<f64>,
    shape: Shape,
    partials: u32,
}

impl Wavetable {
    /// Wraps caller-provided samples. The table must have at least four
    /// samples, all finite and within [-1, 1].
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        check_len(samples.len())?;
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !s.is_finite() || s.abs() > 1.0)
        {
            return Err(Error::invalid(format!("sample {i} = {s} outside [-1, 1]")));
        }
        Ok(Wavetable {
            samples,
            shape: Shape::Custom,
            partials: 0,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Number of harmonics in the table; 0 for custom tables.
    pub fn partials(&self) -> u32 {
        self.partials
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }
}

fn check_len(length: usize) -> Result<()> {
    if length < 4 {
        return Err(Error::invalid(format!(
            "table length {length} is shorter than 4 samples"
        )));
    }
    Ok(())
}

pub fn gen_sine_table(length: usize) -> Result<Wavetable> {
    check_len(length)?;
    let samples = (0..length)
        .map(|i| (2.0 * PI * i as f64 / length as f64).sin())
        .collect();
    Ok(Wavetable {
        samples,
        shape: Shape::Sine,
        partials: 1,
    })
}

/// Peak amplitude of harmonic `n` before normalization when the saw is built
/// from `n_partials` harmonics.
///
/// The overall amplitude is `1 / n_partials`, so every harmonic stays within
/// `full_scale / n_partials` and the sum cannot exceed full scale.
pub fn saw_partial_amplitude(n: u32, n_partials: u32) -> f64 {
    let a = 1.0 / n_partials as f64;
    2.0 * a / (PI * n as f64)
}

/// Sawtooth from the first `n_partials` harmonics, peak-normalized.
///
/// `x(i) = -(2a/pi) * sum_{n=1..N} (-1)^n sin(2 pi n i / len) / n`
pub fn gen_saw_table(length: usize, n_partials: u32) -> Result<Wavetable> {
    check_len(length)?;
    if n_partials < 1 {
        return Err(Error::invalid("saw table needs at least one partial"));
    }
    let mut samples = vec![0.0; length];
    for n in 1..=n_partials {
        // -(2a/pi) * (-1)^n / n, folded into one signed amplitude
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let amp = sign * saw_partial_amplitude(n, n_partials);
        for (i, s) in samples.iter_mut().enumerate() {
            // reduce n*i mod length first so the phase argument stays small
            let idx = (n as usize * i) % length;
            *s += amp * (2.0 * PI * idx as f64 / length as f64).sin();
        }
    }
    normalize(&mut samples);
    Ok(Wavetable {
        samples,
        shape: Shape::AdditiveSaw,
        partials: n_partials,
    })
}

/// Falling line from +1 towards -1 with no bandlimiting.
pub fn gen_naive_ramp_table(length: usize) -> Result<Wavetable> {
    check_len(length)?;
    let samples = (0..length)
        .map(|i| 1.0 - 2.0 * i as f64 / length as f64)
        .collect();
    Ok(Wavetable {
        samples,
        shape: Shape::NaiveRamp,
        partials: 0,
    })
}

fn normalize(samples: &mut [f64]) {
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        for s in samples.iter_mut() {
            *s /= peak;
        }
    }
}

/// Largest harmonic count whose top partial stays strictly below Nyquist for
/// a fundamental of `f_max_hz`.
pub fn max_safe_partials(f_max_hz: f64, sample_rate: f64) -> Result<u32> {
    let nyquist = sample_rate / 2.0;
    if !(f_max_hz > 0.0 && f_max_hz.is_finite()) || !(sample_rate > 0.0) {
        return Err(Error::invalid(format!(
            "frequency {f_max_hz} Hz / sample rate {sample_rate} Hz must be positive"
        )));
    }
    if f_max_hz >= nyquist {
        return Err(Error::invalid(format!(
            "frequency {f_max_hz} Hz is at or above Nyquist ({nyquist} Hz)"
        )));
    }
    let mut n = (nyquist / f_max_hz).floor() as u32;
    while n as f64 * f_max_hz >= nyquist {
        n -= 1;
    }
    Ok(n)
}
