use std::f64::consts::PI;

use crate::{Error, Result};

/// Resonant low-pass settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub cutoff_hz: f64,
    pub q: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            cutoff_hz: 4000.0,
            q: 0.5,
        }
    }
}

impl FilterSpec {
    pub fn validate(&self, sample_rate: f64) -> Result<()> {
        let nyquist = sample_rate / 2.0;
        if !(self.cutoff_hz > 0.0 && self.cutoff_hz < nyquist) {
            return Err(Error::invalid(format!(
                "cutoff {} Hz must lie in (0, {nyquist}) Hz",
                self.cutoff_hz
            )));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::invalid(format!("Q {} must be > 0", self.q)));
        }
        Ok(())
    }
}

/// Normalized biquad coefficients (`a0 == 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    /// Audio-cookbook second-order low-pass.
    pub fn lowpass(spec: &FilterSpec, sample_rate: f64) -> Result<Self> {
        spec.validate(sample_rate)?;
        let w0 = 2.0 * PI * spec.cutoff_hz / sample_rate;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * spec.q);
        let a0 = 1.0 + alpha;
        Ok(Biquad {
            b0: (1.0 - cos) / 2.0 / a0,
            b1: (1.0 - cos) / a0,
            b2: (1.0 - cos) / 2.0 / a0,
            a1: -2.0 * cos / a0,
            a2: (1.0 - alpha) / a0,
        })
    }
}

/// Transposed direct form II memory.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FilterState {
    s1: f64,
    s2: f64,
}

impl FilterState {
    #[inline]
    pub fn process(&mut self, c: &Biquad, x: f64) -> f64 {
        let y = c.b0 * x + self.s1;
        self.s1 = c.b1 * x - c.a1 * y + self.s2;
        self.s2 = c.b2 * x - c.a2 * y;
        y
    }

    pub fn reset(&mut self) {
        *self = FilterState::default();
    }
}

/// Coefficients plus memory for one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lowpass {
    coeffs: Biquad,
    state: FilterState,
}

impl Lowpass {
    pub fn new(spec: &FilterSpec, sample_rate: f64) -> Result<Self> {
        Ok(Lowpass {
            coeffs: Biquad::lowpass(spec, sample_rate)?,
            state: FilterState::default(),
        })
    }

    #[inline]
    pub fn tick(&mut self, x: f64) -> f64 {
        self.state.process(&self.coeffs, x)
    }
}

/// One sample through the low-pass described by `spec`. Coefficients are
/// derived on every call; use [`Lowpass`] in loops.
pub fn lowpass_tick(
    spec: &FilterSpec,
    state: &mut FilterState,
    x: f64,
    sample_rate: f64,
) -> Result<f64> {
    let c = Biquad::lowpass(spec, sample_rate)?;
    Ok(state.process(&c, x))
}
