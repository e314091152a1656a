//! Sensor calibration and the moisture → (chord, timbre) mapping.
//!
//! Moisture `m` runs from 0 (calibrated dry) to 1 (calibrated wet). Pitch is
//! inverted: a dry soil sounds a G major triad rooted on G4, a wet soil the
//! same triad an octave lower. Timbre follows the same polarity, from a full
//! sawtooth when dry to a pure sine when wet.

use std::fmt;

use crate::kv;
use crate::{Error, Result};

/// Largest 10-bit ADC reading.
pub const ADC_MAX: u16 = 1023;

/// Per-soil raw bounds used to normalize readings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationProfile {
    raw_min: u16,
    raw_max: u16,
    pub soil_label: String,
    /// Set when the sensor reads lower counts for wetter soil.
    pub inverted: bool,
}

impl Default for CalibrationProfile {
    fn default() -> Self {
        CalibrationProfile {
            raw_min: 0,
            raw_max: ADC_MAX,
            soil_label: String::new(),
            inverted: false,
        }
    }
}

impl CalibrationProfile {
    pub fn new(raw_min: u16, raw_max: u16) -> Result<Self> {
        if raw_max > ADC_MAX {
            return Err(Error::invalid(format!(
                "raw_max {raw_max} exceeds {ADC_MAX}"
            )));
        }
        if raw_min >= raw_max {
            return Err(Error::invalid(format!(
                "raw_min {raw_min} must be below raw_max {raw_max}; \
                 use the `inverted` flag for sensors that read lower when wet"
            )));
        }
        Ok(CalibrationProfile {
            raw_min,
            raw_max,
            ..Default::default()
        })
    }

    /// Profile spanning the observed extremes of `readings`.
    pub fn from_readings(readings: impl IntoIterator<Item = u16>) -> Result<Self> {
        let (lo, hi) = readings
            .into_iter()
            .fold((u16::MAX, 0u16), |(lo, hi), r| (lo.min(r), hi.max(r)));
        if lo > hi {
            return Err(Error::invalid("no readings to calibrate from"));
        }
        CalibrationProfile::new(lo, hi)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.soil_label = label.into();
        self
    }

    pub fn with_inverted(mut self, inverted: bool) -> Self {
        self.inverted = inverted;
        self
    }

    pub fn raw_min(&self) -> u16 {
        self.raw_min
    }

    pub fn raw_max(&self) -> u16 {
        self.raw_max
    }

    /// Raw reading (possibly fractional) that normalizes to `m`.
    pub fn raw_for(&self, m: MoistureValue) -> f64 {
        let m = if self.inverted {
            1.0 - m.get()
        } else {
            m.get()
        };
        self.raw_min as f64 + m * (self.raw_max - self.raw_min) as f64
    }

    /// Parses the `key = value` profile format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut raw_min = None;
        let mut raw_max = None;
        let mut label = String::new();
        let mut inverted = false;
        let mut last_line = 0;
        for e in kv::parse(text)? {
            last_line = e.line;
            match e.key.as_str() {
                "raw_min" => raw_min = Some((e.line, e.parse_value::<u16>()?)),
                "raw_max" => raw_max = Some((e.line, e.parse_value::<u16>()?)),
                "soil_label" => label = e.value.clone(),
                "inverted" => inverted = e.parse_value()?,
                other => return Err(Error::parse(e.line, format!("unknown key `{other}`"))),
            }
        }
        let (_, lo) = raw_min.ok_or_else(|| Error::parse(last_line.max(1), "missing raw_min"))?;
        let (line, hi) =
            raw_max.ok_or_else(|| Error::parse(last_line.max(1), "missing raw_max"))?;
        let cal = CalibrationProfile::new(lo, hi).map_err(|e| Error::parse(line, e.to_string()))?;
        Ok(cal.with_label(label).with_inverted(inverted))
    }

    pub fn to_text(&self) -> String {
        format!(
            "raw_min = {}\nraw_max = {}\nsoil_label = {}\ninverted = {}\n",
            self.raw_min, self.raw_max, self.soil_label, self.inverted
        )
    }
}

/// Normalized moisture in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MoistureValue(f64);

impl MoistureValue {
    pub const DRY: MoistureValue = MoistureValue(0.0);
    pub const WET: MoistureValue = MoistureValue(1.0);

    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::invalid(format!("moisture {m} outside [0, 1]")));
        }
        Ok(MoistureValue(m))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for MoistureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4}", self.0)
    }
}

/// Result of normalizing one reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized {
    pub moisture: MoistureValue,
    /// The reading was outside the calibrated range and was clamped.
    pub clamped: bool,
}

pub fn normalize_raw(raw: u16, cal: &CalibrationProfile) -> Normalized {
    let span = (cal.raw_max - cal.raw_min) as f64;
    let x = (raw as f64 - cal.raw_min as f64) / span;
    let clamped = !(0.0..=1.0).contains(&x);
    if clamped {
        log::debug!(
            "reading {raw} outside calibration [{}, {}]",
            cal.raw_min,
            cal.raw_max
        );
    }
    let m = x.clamp(0.0, 1.0);
    Normalized {
        moisture: MoistureValue(if cal.inverted { 1.0 - m } else { m }),
        clamped,
    }
}

/// Sine/saw crossfade weight: 0 is pure sine, 1 is pure saw.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TimbreParam(f64);

impl TimbreParam {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::invalid(format!("timbre weight {k} outside [0, 1]")));
        }
        Ok(TimbreParam(k))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Dry soil is buzzy (saw), wet soil is smooth (sine).
pub fn timbre_for_moisture(m: MoistureValue) -> TimbreParam {
    TimbreParam(1.0 - m.0)
}

/// 12-TET conversion with A4 = 440 Hz.
pub fn midi_to_freq(midi: f64) -> Result<f64> {
    if !(0.0..=127.0).contains(&midi) {
        return Err(Error::invalid(format!("MIDI note {midi} outside [0, 127]")));
    }
    Ok(440.0 * 2f64.powf((midi - 69.0) / 12.0))
}

/// A major triad, in fractional MIDI notes and Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordSpec {
    pub root_midi: f64,
    pub third_midi: f64,
    pub fifth_midi: f64,
    pub root_hz: f64,
    pub third_hz: f64,
    pub fifth_hz: f64,
}

impl ChordSpec {
    pub fn from_root(root_midi: f64) -> Result<Self> {
        let third_midi = root_midi + 4.0;
        let fifth_midi = root_midi + 7.0;
        Ok(ChordSpec {
            root_midi,
            third_midi,
            fifth_midi,
            root_hz: midi_to_freq(root_midi)?,
            third_hz: midi_to_freq(third_midi)?,
            fifth_hz: midi_to_freq(fifth_midi)?,
        })
    }

    pub fn midi(&self) -> [f64; 3] {
        [self.root_midi, self.third_midi, self.fifth_midi]
    }

    pub fn freqs(&self) -> [f64; 3] {
        [self.root_hz, self.third_hz, self.fifth_hz]
    }
}

/// Inverted pitch mapping: the root falls linearly in semitones from
/// `high_midi` (dry) to `high_midi - range_semitones` (wet).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchMapping {
    pub high_midi: f64,
    pub range_semitones: f64,
    /// Snap the root to whole semitones.
    pub quantize: bool,
}

impl Default for PitchMapping {
    fn default() -> Self {
        PitchMapping {
            high_midi: 67.0,
            range_semitones: 12.0,
            quantize: false,
        }
    }
}

impl PitchMapping {
    pub fn validate(&self) -> Result<()> {
        let low = self.high_midi - self.range_semitones;
        if !(self.range_semitones >= 0.0) || low < 0.0 || self.high_midi + 7.0 > 127.0 {
            return Err(Error::config(format!(
                "pitch range {low}..{} (MIDI) does not fit the MIDI range",
                self.high_midi
            )));
        }
        Ok(())
    }

    pub fn chord(&self, m: MoistureValue) -> Result<ChordSpec> {
        let mut offset = self.range_semitones * m.0;
        if self.quantize {
            offset = offset.round();
        }
        ChordSpec::from_root(self.high_midi - offset)
    }

    /// The highest fundamental this mapping can produce (the dry fifth).
    pub fn highest_hz(&self) -> Result<f64> {
        midi_to_freq(self.high_midi + 7.0)
    }
}

/// Chord for `m` under the default G4-to-G3 mapping.
pub fn chord_for_moisture(m: MoistureValue) -> ChordSpec {
    PitchMapping::default()
        .chord(m)
        .expect("default pitch mapping stays inside the MIDI range")
}
