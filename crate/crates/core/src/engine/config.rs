use crate::dsp::{max_safe_partials, EnvelopeSpec, FilterSpec, PanPosition};
use crate::mapping::PitchMapping;
use crate::{Error, Result};

/// Output is always stereo.
pub const CHANNELS: u16 = 2;

/// Every synthesis constant of the sonifier.
#[derive(Debug, Clone, PartialEq)]
pub struct SonifierConfig {
    pub sample_rate: u32,
    pub bit_depth: u16,
    /// Harmonics in the sawtooth table.
    pub n_partials: u32,
    pub pitch: PitchMapping,
    pub envelope: EnvelopeSpec,
    pub filter: FilterSpec,
    pub pan_root: PanPosition,
    pub pan_third: PanPosition,
    pub pan_fifth: PanPosition,
    /// Impulses per second in historical playback.
    pub history_rate_hz: f64,
    /// Readings per second in datalogging mode.
    pub log_rate_hz: f64,
    /// Applied to the sum of all voices.
    pub master_gain: f64,
    /// Frames per block; live-mode timbre updates happen on block boundaries.
    pub block_size: usize,
}

impl Default for SonifierConfig {
    fn default() -> Self {
        SonifierConfig {
            sample_rate: 48_000,
            bit_depth: 16,
            n_partials: 17,
            pitch: PitchMapping::default(),
            envelope: EnvelopeSpec::default(),
            filter: FilterSpec::default(),
            pan_root: PanPosition::CENTER,
            pan_third: PanPosition::LEFT,
            pan_fifth: PanPosition::RIGHT,
            history_rate_hz: 1.0,
            log_rate_hz: 1.0,
            master_gain: 0.3,
            block_size: 256,
        }
    }
}

impl SonifierConfig {
    pub fn sample_rate_f64(&self) -> f64 {
        self.sample_rate as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.sample_rate, 44_100 | 48_000) {
            return Err(Error::config(format!(
                "sample rate {} Hz is not 44100 or 48000",
                self.sample_rate
            )));
        }
        if !matches!(self.bit_depth, 16 | 24) {
            return Err(Error::config(format!(
                "bit depth {} is not 16 or 24",
                self.bit_depth
            )));
        }
        self.pitch.validate()?;
        let highest = self.pitch.highest_hz()?;
        let limit = max_safe_partials(highest, self.sample_rate_f64())
            .map_err(|e| Error::config(e.to_string()))?;
        if self.n_partials < 1 || self.n_partials > limit {
            return Err(Error::config(format!(
                "{} partials on a {highest:.2} Hz fundamental exceeds the alias-free limit of {limit}",
                self.n_partials
            )));
        }
        self.envelope.validate()?;
        self.filter
            .validate(self.sample_rate_f64())
            .map_err(|e| Error::config(e.to_string()))?;
        if !(self.history_rate_hz > 0.0 && self.history_rate_hz.is_finite()) {
            return Err(Error::config("history rate must be positive"));
        }
        if !(self.log_rate_hz > 0.0 && self.log_rate_hz <= 1000.0) {
            return Err(Error::config("log rate must lie in (0, 1000] Hz"));
        }
        if !(0.0..=1.0).contains(&self.master_gain) {
            return Err(Error::config(format!(
                "master gain {} outside [0, 1]",
                self.master_gain
            )));
        }
        if self.block_size == 0 {
            return Err(Error::config("block size must be at least one frame"));
        }
        Ok(())
    }

    pub(crate) fn samples_for(&self, seconds: f64) -> u64 {
        (seconds * self.sample_rate_f64()).round() as u64
    }
}
