//! Per-sample signal processing: table generation, oscillator, envelope,
//! filter, panning, and spectral verification of the bandlimit.

mod bandlimit;
mod envelope;
mod filter;
mod oscillator;
mod pan;
mod wavetable;

pub use bandlimit::{verify_bandlimit, BandlimitReport, Spectrum, SPURIOUS_THRESHOLD_DB};
pub use envelope::{envelope_gain, EnvelopeSpec};
pub use filter::{lowpass_tick, Biquad, FilterSpec, FilterState, Lowpass};
pub use oscillator::{interp_tables, osc_tick, table_lookup, OscillatorState};
pub use pan::{pan, PanPosition};
pub use wavetable::{
    gen_naive_ramp_table, gen_saw_table, gen_sine_table, max_safe_partials, saw_partial_amplitude,
    Shape, Wavetable, TABLE_LEN,
};
