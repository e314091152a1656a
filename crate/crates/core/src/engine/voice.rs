use crate::dsp::{EnvelopeSpec, Lowpass, OscillatorState, Wavetable};
use crate::mapping::ChordSpec;
use crate::Result;

use super::SonifierConfig;

#[derive(Debug, Clone)]
struct Voice {
    osc: OscillatorState,
    filter: Lowpass,
    gains: (f64, f64),
}

/// The sine table and the sawtooth (or debug ramp) it crossfades into.
#[derive(Debug, Clone)]
pub(crate) struct Tables {
    pub a: Wavetable,
    pub b: Wavetable,
}

/// Three voices sharing one envelope: a single triad from note-on to the end
/// of its decay.
#[derive(Debug, Clone)]
pub(crate) struct ChordNote {
    voices: [Voice; 3],
    elapsed: u64,
    sample_rate: f64,
    /// `(release_time_s, gain_at_release)`, relative to note-on.
    release: Option<(f64, f64)>,
}

impl ChordNote {
    pub fn new(chord: &ChordSpec, config: &SonifierConfig, table_len: usize) -> Result<Self> {
        let sr = config.sample_rate_f64();
        let voice = |freq: f64, pan: crate::dsp::PanPosition| -> Result<Voice> {
            Ok(Voice {
                osc: OscillatorState::new(freq, sr, table_len)?,
                filter: Lowpass::new(&config.filter, sr)?,
                gains: pan.gains(),
            })
        };
        Ok(ChordNote {
            voices: [
                voice(chord.root_hz, config.pan_root)?,
                voice(chord.third_hz, config.pan_third)?,
                voice(chord.fifth_hz, config.pan_fifth)?,
            ],
            elapsed: 0,
            sample_rate: sr,
            release: None,
        })
    }

    /// A note whose decay starts right at the end of the attack.
    pub fn impulse(chord: &ChordSpec, config: &SonifierConfig, table_len: usize) -> Result<Self> {
        let mut note = ChordNote::new(chord, config, table_len)?;
        note.release = Some((config.envelope.attack_s, 1.0));
        Ok(note)
    }

    fn time(&self) -> f64 {
        self.elapsed as f64 / self.sample_rate
    }

    pub fn is_held(&self) -> bool {
        self.release.is_none()
    }

    /// Starts the decay from the gain reached at the current sample.
    pub fn release(&mut self, env: &EnvelopeSpec) {
        if self.release.is_none() {
            let t = self.time();
            self.release = Some((t, env.gated_gain(t, None)));
        }
    }

    pub fn is_finished(&self, env: &EnvelopeSpec) -> bool {
        match self.release {
            Some((t_rel, _)) => self.time() - t_rel > env.decay_s,
            None => false,
        }
    }

    /// Unscaled stereo contribution of this note for one sample.
    #[inline]
    pub fn tick(&mut self, tables: &Tables, k: f64, env: &EnvelopeSpec) -> [f64; 2] {
        let g = env.gated_gain(self.time(), self.release);
        self.elapsed += 1;
        let mut out = [0.0; 2];
        for v in &mut self.voices {
            let s = v
                .osc
                .tick_unchecked(tables.a.samples(), tables.b.samples(), k);
            let y = v.filter.tick(s * g);
            out[0] += y * v.gains.0;
            out[1] += y * v.gains.1;
        }
        out
    }
}
