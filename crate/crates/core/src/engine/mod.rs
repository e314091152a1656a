//! Operating modes and the voice/mixing pipeline.
//!
//! Every render path is a pure function of its inputs: no wall clock and no
//! random state, so identical inputs give bit-identical buffers.

mod config;
mod datalog;
mod live;
mod pcm;
mod render;
mod voice;

pub use config::{SonifierConfig, CHANNELS};
pub use datalog::{run_datalog, SensorSource};
pub use live::{event_channel, render_live, LiveRenderer, QueueStatus, DEFAULT_INITIAL_MOISTURE};
pub use pcm::{quantize_pcm, Quantized};
pub use render::{
    render_chord_held, render_chord_impulse, render_historical, Engine, Render, RenderStats,
    StereoBuffer,
};
