use crate::{Error, Result};

/// Attack/decay amplitude envelope.
///
/// Linear ramp from 0 to 1 over `attack_s`, then exponential decay that
/// reaches `floor_db` exactly `decay_s` after the decay starts, then silence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSpec {
    pub attack_s: f64,
    pub decay_s: f64,
    pub floor_db: f64,
}

impl Default for EnvelopeSpec {
    fn default() -> Self {
        EnvelopeSpec {
            attack_s: 0.2,
            decay_s: 0.8,
            floor_db: -60.0,
        }
    }
}

impl EnvelopeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.attack_s > 0.0 && self.attack_s.is_finite()) {
            return Err(Error::config(format!(
                "attack {} s must be > 0",
                self.attack_s
            )));
        }
        if !(self.decay_s > 0.0 && self.decay_s.is_finite()) {
            return Err(Error::config(format!(
                "decay {} s must be > 0",
                self.decay_s
            )));
        }
        if !(self.floor_db < 0.0 && self.floor_db.is_finite()) {
            return Err(Error::config(format!(
                "decay floor {} dB must be negative",
                self.floor_db
            )));
        }
        Ok(())
    }

    /// Attack plus decay: the length of one impulse.
    pub fn duration_s(&self) -> f64 {
        self.attack_s + self.decay_s
    }

    /// Decay segment starting from `level`, `since_release` seconds in.
    pub fn decay_gain(&self, level: f64, since_release: f64) -> f64 {
        if since_release > self.decay_s {
            return 0.0;
        }
        level * 10f64.powf(self.floor_db / 20.0 * since_release / self.decay_s)
    }

    /// Gain for a gated note: attack then sustain at 1 while held, decay from
    /// the gain reached at release. `release` is `(release_time_s, level)`.
    pub fn gated_gain(&self, t: f64, release: Option<(f64, f64)>) -> f64 {
        match release {
            Some((t_rel, level)) if t >= t_rel => self.decay_gain(level, t - t_rel),
            _ if t <= 0.0 => 0.0,
            _ if t < self.attack_s => t / self.attack_s,
            _ => 1.0,
        }
    }
}

/// Gain of a single impulse `t` seconds after note-on.
pub fn envelope_gain(spec: &EnvelopeSpec, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t < spec.attack_s {
        t / spec.attack_s
    } else {
        spec.decay_gain(1.0, t - spec.attack_s)
    }
}
