use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::parse_duration;

#[derive(Debug, Parser)]
#[command(name = "wavesoil", version, about = "Soil-moisture sonification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Record a datalog from a simulated sensor.
    Log(LogArgs),
    /// Render a datalog as one chord impulse per reading.
    RenderHistory(RenderHistoryArgs),
    /// Render a press/release/sensor event script.
    RenderLive(RenderLiveArgs),
    /// Write a calibration profile.
    Calibrate(CalibrateArgs),
    /// Check a WAV for partials above a harmonic ceiling.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["profile", "constant"])))]
pub struct LogArgs {
    /// Sensor profile of `<t_ms>,<raw>` breakpoints.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Fixed raw reading.
    #[arg(long, value_parser = clap::value_parser!(u16).range(0..=1023))]
    pub constant: Option<u16>,
    /// Readings per second [default: log_rate_hz from the config].
    #[arg(long)]
    pub rate: Option<f64>,
    /// Length of the log, e.g. `108s` or `500ms`.
    #[arg(long, value_parser = parse_duration)]
    pub duration: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderHistoryArgs {
    #[arg(long)]
    pub log: PathBuf,
    #[arg(long)]
    pub cal: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Use an aliasing naive ramp instead of the bandlimited saw.
    #[arg(long, hide = true)]
    pub naive_saw: bool,
}

#[derive(Debug, Args)]
pub struct RenderLiveArgs {
    #[arg(
        long,
        required_unless_present = "interactive",
        conflicts_with = "interactive"
    )]
    pub events: Option<PathBuf>,
    #[arg(long)]
    pub cal: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Read `press`, `release` and `sensor <raw>` lines from stdin,
    /// timestamped on arrival. End with EOF.
    #[arg(long)]
    pub interactive: bool,
    #[arg(long, hide = true)]
    pub naive_saw: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("bounds").required(true).args(["log", "min"])))]
pub struct CalibrateArgs {
    /// Take the bounds from the extremes of a datalog.
    #[arg(long, conflicts_with_all = ["min", "max"])]
    pub log: Option<PathBuf>,
    #[arg(long, requires = "max")]
    pub min: Option<u16>,
    #[arg(long, requires = "min")]
    pub max: Option<u16>,
    /// The sensor reads lower counts for wetter soil.
    #[arg(long)]
    pub inverted: bool,
    #[arg(long, default_value = "")]
    pub label: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub wav: PathBuf,
    /// Fundamental of the lowest voice, Hz.
    #[arg(long)]
    pub f0: f64,
    /// Expected number of partials.
    #[arg(long)]
    pub partials: u32,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}
