use std::collections::HashMap;

use crate::dsp::{gen_naive_ramp_table, gen_saw_table, gen_sine_table, TABLE_LEN};
use crate::mapping::{normalize_raw, timbre_for_moisture, CalibrationProfile, MoistureValue};
use crate::sensor_io::SensorSample;
use crate::{Error, Result};

use super::voice::{ChordNote, Tables};
use super::SonifierConfig;

/// Interleaved-by-frame stereo audio in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct StereoBuffer {
    pub sample_rate: u32,
    pub frames: Vec<[f64; 2]>,
}

impl StereoBuffer {
    pub fn new(sample_rate: u32) -> Self {
        StereoBuffer {
            sample_rate,
            frames: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.frames.len() as f64 / self.sample_rate as f64
    }

    /// `(left + right) / 2`.
    pub fn mono(&self) -> Vec<f64> {
        self.frames.iter().map(|f| 0.5 * (f[0] + f[1])).collect()
    }

    pub fn channel(&self, ch: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f[ch]).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RenderStats {
    /// Chord events started.
    pub impulses: usize,
    /// Frame channels that exceeded full scale and were limited.
    pub clipped: usize,
    /// Sensor readings outside the calibration bounds.
    pub clamped_readings: usize,
    /// Onset frame of every chord event.
    pub onsets: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct Render {
    pub buffer: StereoBuffer,
    pub stats: RenderStats,
}

/// A validated configuration with its wavetables.
#[derive(Debug, Clone)]
pub struct Engine {
    config: SonifierConfig,
    pub(crate) tables: Tables,
}

impl Engine {
    pub fn new(config: SonifierConfig) -> Result<Self> {
        config.validate()?;
        let tables = Tables {
            a: gen_sine_table(TABLE_LEN)?,
            b: gen_saw_table(TABLE_LEN, config.n_partials)?,
        };
        Ok(Engine { config, tables })
    }

    /// Replaces the bandlimited saw with a straight ramp. Produces aliasing on
    /// purpose; only useful as a negative fixture for the bandlimit check.
    pub fn with_naive_saw(config: SonifierConfig) -> Result<Self> {
        let mut engine = Engine::new(config)?;
        engine.tables.b = gen_naive_ramp_table(TABLE_LEN)?;
        Ok(engine)
    }

    pub fn config(&self) -> &SonifierConfig {
        &self.config
    }

    pub(crate) fn note(&self, m: MoistureValue, impulse: bool) -> Result<ChordNote> {
        let chord = self.config.pitch.chord(m)?;
        if impulse {
            ChordNote::impulse(&chord, &self.config, TABLE_LEN)
        } else {
            ChordNote::new(&chord, &self.config, TABLE_LEN)
        }
    }

    /// Scales by the master gain and limits to full scale.
    #[inline]
    pub(crate) fn finish_frame(&self, raw: [f64; 2], clipped: &mut usize) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (o, r) in out.iter_mut().zip(raw) {
            let v = r * self.config.master_gain;
            if v.abs() > 1.0 {
                *clipped += 1;
            }
            *o = v.clamp(-1.0, 1.0);
        }
        out
    }

    /// Unscaled frames of one impulse, from note-on to the end of its decay.
    fn impulse_frames(&self, m: MoistureValue) -> Result<Vec<[f64; 2]>> {
        let env = &self.config.envelope;
        let len = self.config.samples_for(env.duration_s()) as usize;
        let k = timbre_for_moisture(m).get();
        let mut note = self.note(m, true)?;
        Ok((0..len).map(|_| note.tick(&self.tables, k, env)).collect())
    }

    /// One triad with attack and decay, padded with silence to `duration_s`.
    pub fn render_chord_impulse(&self, m: MoistureValue, duration_s: f64) -> Result<Render> {
        let min = self.config.envelope.duration_s();
        if !(duration_s >= min - 1e-9) {
            return Err(Error::invalid(format!(
                "impulse duration {duration_s} s is shorter than attack + decay ({min} s)"
            )));
        }
        let total = self.config.samples_for(duration_s) as usize;
        let mut stats = RenderStats {
            impulses: 1,
            onsets: vec![0],
            ..Default::default()
        };
        let mut frames = self.impulse_frames(m)?;
        frames.resize(total.max(frames.len()), [0.0; 2]);
        frames.truncate(total);
        let frames = frames
            .into_iter()
            .map(|f| self.finish_frame(f, &mut stats.clipped))
            .collect();
        Ok(Render {
            buffer: StereoBuffer {
                sample_rate: self.config.sample_rate,
                frames,
            },
            stats,
        })
    }

    /// A triad held for `hold_s` seconds, then released into its decay.
    pub fn render_chord_held(&self, m: MoistureValue, hold_s: f64) -> Result<Render> {
        if !(hold_s >= 0.0 && hold_s.is_finite()) {
            return Err(Error::invalid(format!(
                "hold time {hold_s} s must be non-negative"
            )));
        }
        let env = &self.config.envelope;
        let release_at = self.config.samples_for(hold_s);
        let total = release_at + self.config.samples_for(env.decay_s);
        let k = timbre_for_moisture(m).get();
        let mut note = self.note(m, false)?;
        let mut stats = RenderStats {
            impulses: 1,
            onsets: vec![0],
            ..Default::default()
        };
        let frames = (0..total)
            .map(|i| {
                if i == release_at {
                    note.release(env);
                }
                let raw = note.tick(&self.tables, k, env);
                self.finish_frame(raw, &mut stats.clipped)
            })
            .collect();
        Ok(Render {
            buffer: StereoBuffer {
                sample_rate: self.config.sample_rate,
                frames,
            },
            stats,
        })
    }

    /// Replays `samples` in order as one impulse per `1 / history_rate_hz`
    /// seconds. Overlapping tails are summed.
    pub fn render_historical(
        &self,
        samples: &[SensorSample],
        cal: &CalibrationProfile,
    ) -> Result<Render> {
        if samples.is_empty() {
            return Err(Error::invalid("no samples to replay"));
        }
        let sr = self.config.sample_rate_f64();
        let spacing = sr / self.config.history_rate_hz;
        let onsets: Vec<u64> = (0..samples.len())
            .map(|i| (i as f64 * spacing).round() as u64)
            .collect();
        let impulse_len = self.config.samples_for(self.config.envelope.duration_s());
        let total = (onsets[onsets.len() - 1] + impulse_len) as usize;

        let mut stats = RenderStats {
            impulses: samples.len(),
            ..Default::default()
        };
        let mut acc = vec![[0.0f64; 2]; total];
        // identical readings render identical impulses
        let mut cache: HashMap<u16, Vec<[f64; 2]>> = HashMap::new();
        for (s, &onset) in samples.iter().zip(&onsets) {
            let n = normalize_raw(s.raw, cal);
            if n.clamped {
                stats.clamped_readings += 1;
            }
            let frames = match cache.get(&s.raw) {
                Some(f) => f,
                None => {
                    let f = self.impulse_frames(n.moisture)?;
                    cache.entry(s.raw).or_insert(f)
                }
            };
            for (dst, src) in acc[onset as usize..].iter_mut().zip(frames) {
                dst[0] += src[0];
                dst[1] += src[1];
            }
        }
        let frames = acc
            .into_iter()
            .map(|f| self.finish_frame(f, &mut stats.clipped))
            .collect();
        stats.onsets = onsets;
        Ok(Render {
            buffer: StereoBuffer {
                sample_rate: self.config.sample_rate,
                frames,
            },
            stats,
        })
    }
}

pub fn render_chord_impulse(
    m: MoistureValue,
    config: &SonifierConfig,
    duration_s: f64,
) -> Result<Render> {
    Engine::new(config.clone())?.render_chord_impulse(m, duration_s)
}

pub fn render_chord_held(m: MoistureValue, config: &SonifierConfig, hold_s: f64) -> Result<Render> {
    Engine::new(config.clone())?.render_chord_held(m, hold_s)
}

pub fn render_historical(
    samples: &[SensorSample],
    cal: &CalibrationProfile,
    config: &SonifierConfig,
) -> Result<Render> {
    Engine::new(config.clone())?.render_historical(samples, cal)
}
