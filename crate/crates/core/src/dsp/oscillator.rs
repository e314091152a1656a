use super::wavetable::Wavetable;
use crate::{Error, Result};

/// Read position into a single-cycle table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorState {
    phase: f64,
    increment: f64,
    table_len: usize,
}

impl OscillatorState {
    /// Oscillator at `freq_hz`, starting at phase 0.
    pub fn new(freq_hz: f64, sample_rate: f64, table_len: usize) -> Result<Self> {
        if !(freq_hz > 0.0 && freq_hz.is_finite()) {
            return Err(Error::invalid(format!(
                "frequency {freq_hz} Hz must be positive"
            )));
        }
        if !(sample_rate > 0.0) {
            return Err(Error::invalid(format!(
                "sample rate {sample_rate} must be positive"
            )));
        }
        if table_len < 4 {
            return Err(Error::invalid("table length must be at least 4"));
        }
        Ok(OscillatorState {
            phase: 0.0,
            increment: freq_hz * table_len as f64 / sample_rate,
            table_len,
        })
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Table indices advanced per output sample.
    pub fn increment(&self) -> f64 {
        self.increment
    }

    pub fn table_len(&self) -> usize {
        self.table_len
    }

    fn advance(&mut self) {
        self.phase += self.increment;
        let len = self.table_len as f64;
        while self.phase >= len {
            self.phase -= len;
        }
    }

    /// Crossfaded sample at the current phase, then advance. Table lengths
    /// and `k` are the caller's responsibility.
    #[inline]
    pub(crate) fn tick_unchecked(&mut self, a: &[f64], b: &[f64], k: f64) -> f64 {
        let out = interp(lookup(a, self.phase), lookup(b, self.phase), k);
        self.advance();
        out
    }
}

#[inline]
fn lookup(samples: &[f64], phase: f64) -> f64 {
    let idx = phase as usize;
    let frac = phase - idx as f64;
    let s0 = samples[idx];
    let s1 = samples[if idx + 1 == samples.len() { 0 } else { idx + 1 }];
    s0 + frac * (s1 - s0)
}

#[inline]
fn interp(a: f64, b: f64, k: f64) -> f64 {
    a * (1.0 - k) + b * k
}

/// Linear interpolation inside one table, wrapping from the last sample to
/// the first.
pub fn table_lookup(table: &Wavetable, phase: f64) -> Result<f64> {
    let len = table.len() as f64;
    if !(0.0..len).contains(&phase) {
        return Err(Error::invalid(format!("phase {phase} outside [0, {len})")));
    }
    Ok(lookup(table.samples(), phase))
}

/// Crossfade between two table outputs: `a * (1 - k) + b * k`.
pub fn interp_tables(a: f64, b: f64, k: f64) -> Result<f64> {
    check_unit(k)?;
    Ok(interp(a, b, k))
}

/// One output sample of the two-table oscillator. Reads both tables at the
/// shared phase, crossfades by `k`, then advances the phase.
pub fn osc_tick(
    state: &mut OscillatorState,
    table_a: &Wavetable,
    table_b: &Wavetable,
    k: f64,
) -> Result<f64> {
    if table_a.len() != table_b.len() || table_a.len() != state.table_len {
        return Err(Error::invalid(format!(
            "table lengths {} / {} do not match oscillator length {}",
            table_a.len(),
            table_b.len(),
            state.table_len
        )));
    }
    check_unit(k)?;
    Ok(state.tick_unchecked(table_a.samples(), table_b.samples(), k))
}

fn check_unit(k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::invalid(format!(
            "interpolation weight {k} outside [0, 1]"
        )));
    }
    Ok(())
}
