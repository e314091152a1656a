use std::fs::{self, File};
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;
use std::thread;
use std::time::{Duration, Instant};

use log::{info, warn};
use serde::Serialize;
use wavesoil::dsp::verify_bandlimit;
use wavesoil::engine::{
    event_channel, quantize_pcm, run_datalog, Engine, LiveRenderer, QueueStatus, Render,
    SonifierConfig,
};
use wavesoil::mapping::CalibrationProfile;
use wavesoil::sensor_io::{parse_event_line, parse_event_script, parse_log, SensorProfile};

use crate::args::{
    AnalyzeArgs, CalibrateArgs, Cli, Command, LogArgs, RenderHistoryArgs, RenderLiveArgs,
};
use crate::config::parse_config;
use crate::{wav, CliError};

/// Queue depth between the stdin reader and the renderer.
const INTERACTIVE_QUEUE: usize = 64;

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Log(a) => cmd_log(&a, out),
        Command::RenderHistory(a) => cmd_render_history(&a, out),
        Command::RenderLive(a) if a.interactive => {
            cmd_render_live_interactive(&a, io::BufReader::new(io::stdin()), out)
        }
        Command::RenderLive(a) => cmd_render_live(&a, out),
        Command::Calibrate(a) => cmd_calibrate(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
    }
}

fn report(out: &mut dyn Write, args: std::fmt::Arguments) -> Result<(), CliError> {
    writeln!(out, "{args}").map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads `path` and parses it, tagging parse errors with the file name.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> wavesoil::Result<T>) -> Result<T, CliError> {
    parse(&read_text(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config(path: Option<&Path>) -> Result<SonifierConfig, CliError> {
    match path {
        Some(p) => load(p, parse_config),
        None => Ok(SonifierConfig::default()),
    }
}

fn engine(config: SonifierConfig, naive_saw: bool) -> Result<Engine, CliError> {
    if naive_saw {
        warn!("rendering with the naive ramp table; output will alias");
        Ok(Engine::with_naive_saw(config)?)
    } else {
        Ok(Engine::new(config)?)
    }
}

fn write_render(path: &Path, render: &Render, config: &SonifierConfig) -> Result<usize, CliError> {
    let pcm = quantize_pcm(&render.buffer, config.bit_depth)?;
    wav::write_file(path, &pcm, config.sample_rate)?;
    let clipped = render.stats.clipped + pcm.clipped;
    if clipped > 0 {
        warn!("{clipped} samples clipped");
    }
    Ok(clipped)
}

fn cmd_log(a: &LogArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = load_config(a.config.as_deref())?;
    let mut source = match (&a.profile, a.constant) {
        (Some(p), _) => load(p, SensorProfile::from_text)?,
        (None, Some(raw)) => SensorProfile::constant(raw),
        (None, None) => unreachable!("clap requires a source"),
    };
    let rate = a.rate.unwrap_or(config.log_rate_hz);
    let io_err = |source| CliError::Io {
        path: a.out.clone(),
        source,
    };
    let mut sink = BufWriter::new(File::create(&a.out).map_err(io_err)?);
    let n = run_datalog(&mut source, &mut sink, rate, a.duration).map_err(|e| match e {
        wavesoil::Error::Datalog { source, .. } => io_err(source),
        other => other.into(),
    })?;
    report(out, format_args!("samples: {n}"))
}

fn cmd_render_history(a: &RenderHistoryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = load_config(a.config.as_deref())?;
    let samples = load(&a.log, parse_log)?;
    let cal = load(&a.cal, CalibrationProfile::from_text)?;
    let render = engine(config.clone(), a.naive_saw)?.render_historical(&samples, &cal)?;
    if render.stats.clamped_readings > 0 {
        warn!(
            "{} readings fell outside the calibration range",
            render.stats.clamped_readings
        );
    }
    let clipped = write_render(&a.out, &render, &config)?;
    report(
        out,
        format_args!("duration: {:.3} s", render.buffer.duration_s()),
    )?;
    report(out, format_args!("impulses: {}", render.stats.impulses))?;
    report(out, format_args!("clipped: {clipped}"))
}

fn cmd_render_live(a: &RenderLiveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let events_path = a.events.as_deref().expect("clap requires --events");
    let config = load_config(a.config.as_deref())?;
    let events = load(events_path, parse_event_script)?;
    let cal = load(&a.cal, CalibrationProfile::from_text)?;
    if events.is_empty() {
        warn!("{}: no events; writing an empty WAV", events_path.display());
    }
    let render = engine(config.clone(), a.naive_saw)?
        .render_live(&events, &cal)
        .map_err(|source| CliError::Input {
            path: events_path.to_path_buf(),
            source,
        })?;
    let clipped = write_render(&a.out, &render, &config)?;
    report(
        out,
        format_args!("duration: {:.3} s", render.buffer.duration_s()),
    )?;
    report(out, format_args!("chords: {}", render.stats.onsets.len()))?;
    report(out, format_args!("clipped: {clipped}"))
}

/// Live mode fed from `input` in real time. Each line is stamped with the
/// milliseconds elapsed since start and parsed as an event-script line.
/// Invalid lines are reported and skipped. At EOF any held chord is
/// released and the tail is rendered.
pub fn cmd_render_live_interactive<R>(
    a: &RenderLiveArgs,
    input: R,
    out: &mut dyn Write,
) -> Result<(), CliError>
where
    R: BufRead + Send,
{
    let config = load_config(a.config.as_deref())?;
    let cal = load(&a.cal, CalibrationProfile::from_text)?;
    let mut live = LiveRenderer::new(engine(config.clone(), a.naive_saw)?, cal);
    let (tx, rx) = event_channel(INTERACTIVE_QUEUE);
    let start = Instant::now();
    let sr = config.sample_rate_f64();
    let mut frames: Vec<[f64; 2]> = Vec::new();
    let mut block = vec![[0.0; 2]; config.block_size];

    thread::scope(|s| -> Result<(), CliError> {
        s.spawn(move || {
            for (idx, line) in input.lines().enumerate() {
                let Ok(line) = line else { break };
                let text = line.trim();
                if text.is_empty() || text.starts_with('#') {
                    continue;
                }
                let t_ms = start.elapsed().as_millis() as u64;
                match parse_event_line(&format!("{t_ms} {text}"), idx + 1) {
                    Ok(ev) => {
                        if tx.send(ev).is_err() {
                            break;
                        }
                    }
                    Err(e) => warn!("stdin: {e}"),
                }
            }
        });

        loop {
            let status = loop {
                match live.drain(&rx) {
                    Ok(status) => break status,
                    Err(e) => warn!("stdin: {e}"),
                }
            };
            if status == QueueStatus::Closed {
                break;
            }
            live.render_block(&mut block)?;
            frames.extend_from_slice(&block);
            let due = Duration::from_secs_f64(live.position() as f64 / sr);
            if let Some(wait) = due.checked_sub(start.elapsed()) {
                thread::sleep(wait);
            }
        }
        Ok(())
    })?;

    live.release_held()?;
    while !live.is_idle() {
        live.render_block(&mut block)?;
        frames.extend_from_slice(&block);
    }
    info!("rendered {} frames", frames.len());
    let render = Render {
        buffer: wavesoil::engine::StereoBuffer {
            sample_rate: config.sample_rate,
            frames,
        },
        stats: live.stats().clone(),
    };
    let clipped = write_render(&a.out, &render, &config)?;
    report(
        out,
        format_args!("duration: {:.3} s", render.buffer.duration_s()),
    )?;
    report(out, format_args!("chords: {}", render.stats.onsets.len()))?;
    report(out, format_args!("clipped: {clipped}"))
}

fn cmd_calibrate(a: &CalibrateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cal = match (&a.log, a.min, a.max) {
        (Some(log), _, _) => {
            let samples = load(log, parse_log)?;
            CalibrationProfile::from_readings(samples.iter().map(|s| s.raw)).map_err(|source| {
                CliError::Input {
                    path: log.clone(),
                    source,
                }
            })?
        }
        (None, Some(min), Some(max)) => CalibrationProfile::new(min, max)?,
        _ => unreachable!("clap requires --log or --min/--max"),
    };
    let cal = cal.with_label(a.label.clone()).with_inverted(a.inverted);
    fs::write(&a.out, cal.to_text()).map_err(|source| CliError::Io {
        path: a.out.clone(),
        source,
    })?;
    report(out, format_args!("raw_min: {}", cal.raw_min()))?;
    report(out, format_args!("raw_max: {}", cal.raw_max()))
}

/// Machine-readable `analyze` output.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub pass: bool,
    pub f0_hz: f64,
    pub partials: u32,
    pub expected_highest_partial_hz: f64,
    pub highest_partial_hz: f64,
    pub ceiling_hz: f64,
    pub bin_hz: f64,
    pub spurious_bins: usize,
    pub worst_spurious_db: f64,
    pub spurious_energy_db: f64,
}

pub fn analyze_file(path: &Path, f0: f64, partials: u32) -> Result<AnalyzeReport, CliError> {
    let data = wav::read_file(path)?;
    let r = verify_bandlimit(&data.mono(), f0, partials, data.sample_rate as f64)?;
    Ok(AnalyzeReport {
        pass: r.pass,
        f0_hz: r.f0_hz,
        partials: r.n_partials,
        expected_highest_partial_hz: r.expected_highest_partial_hz,
        highest_partial_hz: r.highest_partial_hz,
        ceiling_hz: r.ceiling_hz,
        bin_hz: r.bin_hz,
        spurious_bins: r.spurious_bins,
        worst_spurious_db: r.worst_spurious_db,
        spurious_energy_db: r.spurious_energy_db,
    })
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let r = analyze_file(&a.wav, a.f0, a.partials)?;
    if a.json {
        let json = serde_json::to_string_pretty(&r).expect("report serializes");
        report(out, format_args!("{json}"))?;
    } else {
        report(
            out,
            format_args!("result: {}", if r.pass { "PASS" } else { "FAIL" }),
        )?;
        report(
            out,
            format_args!(
                "expected_highest_partial: {:.2} Hz",
                r.expected_highest_partial_hz
            ),
        )?;
        report(
            out,
            format_args!("highest_partial: {:.2} Hz", r.highest_partial_hz),
        )?;
        report(out, format_args!("bin_width: {:.3} Hz", r.bin_hz))?;
        report(out, format_args!("spurious_bins: {}", r.spurious_bins))?;
        report(
            out,
            format_args!("worst_spurious: {:.1} dB", r.worst_spurious_db),
        )?;
        report(
            out,
            format_args!("spurious_energy: {:.1} dB", r.spurious_energy_db),
        )?;
    }
    if r.pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{}: {} bins above {:.2} Hz exceed -60 dB",
            a.wav.display(),
            r.spurious_bins,
            r.ceiling_hz
        )))
    }
}
