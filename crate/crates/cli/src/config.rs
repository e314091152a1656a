//! `key = value` overrides on top of the engine defaults.

use wavesoil::dsp::PanPosition;
use wavesoil::engine::SonifierConfig;
use wavesoil::kv::{self, Entry};
use wavesoil::{Error, Result};

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "sample_rate",
    "bit_depth",
    "n_partials",
    "pitch_high_midi",
    "pitch_range_semitones",
    "quantize_semitones",
    "attack_s",
    "decay_s",
    "floor_db",
    "filter_cutoff_hz",
    "filter_q",
    "pan_root",
    "pan_third",
    "pan_fifth",
    "history_rate_hz",
    "log_rate_hz",
    "master_gain",
    "block_size",
];

fn pan(e: &Entry) -> Result<PanPosition> {
    PanPosition::new(e.parse_value()?).map_err(|err| Error::Parse {
        line: e.line,
        message: err.to_string(),
    })
}

/// Applies the overrides in `text` to the defaults and validates the result.
pub fn parse_config(text: &str) -> Result<SonifierConfig> {
    let mut c = SonifierConfig::default();
    for e in kv::parse(text)? {
        match e.key.as_str() {
            "sample_rate" => c.sample_rate = e.parse_value()?,
            "bit_depth" => c.bit_depth = e.parse_value()?,
            "n_partials" => c.n_partials = e.parse_value()?,
            "pitch_high_midi" => c.pitch.high_midi = e.parse_value()?,
            "pitch_range_semitones" => c.pitch.range_semitones = e.parse_value()?,
            "quantize_semitones" => c.pitch.quantize = e.parse_value()?,
            "attack_s" => c.envelope.attack_s = e.parse_value()?,
            "decay_s" => c.envelope.decay_s = e.parse_value()?,
            "floor_db" => c.envelope.floor_db = e.parse_value()?,
            "filter_cutoff_hz" => c.filter.cutoff_hz = e.parse_value()?,
            "filter_q" => c.filter.q = e.parse_value()?,
            "pan_root" => c.pan_root = pan(&e)?,
            "pan_third" => c.pan_third = pan(&e)?,
            "pan_fifth" => c.pan_fifth = pan(&e)?,
            "history_rate_hz" => c.history_rate_hz = e.parse_value()?,
            "log_rate_hz" => c.log_rate_hz = e.parse_value()?,
            "master_gain" => c.master_gain = e.parse_value()?,
            "block_size" => c.block_size = e.parse_value()?,
            other => {
                return Err(Error::Parse {
                    line: e.line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    c.validate()?;
    Ok(c)
}
