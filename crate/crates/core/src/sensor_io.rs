//! Sensor sample model and the plain-text formats around it.
//!
//! Datalog lines are either `<raw>` (one reading per second) or
//! `<t_ms>,<raw>`. Event scripts hold `<t_ms> press`, `<t_ms> release` and
//! `<t_ms> sensor <raw>` lines. Profiles hold `<t_ms>,<raw>` breakpoints and
//! an optional `interpolation = step|linear` line. All formats use LF line
//! endings, ASCII decimal integers, and allow blank lines and `#` comments.

use std::fmt::Write as _;

use crate::mapping::ADC_MAX;
use crate::{Error, Result};

/// Spacing of timestamp-less datalog lines.
pub const INFERRED_INTERVAL_MS: u64 = 1000;

/// One ADC reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorSample {
    /// Milliseconds since the start of the stream.
    pub t_ms: u64,
    pub raw: u16,
}

impl SensorSample {
    pub fn new(t_ms: u64, raw: u16) -> Result<Self> {
        check_raw(raw as u64).map_err(Error::invalid)?;
        Ok(SensorSample { t_ms, raw })
    }
}

fn check_raw(raw: u64) -> std::result::Result<u16, String> {
    if raw > ADC_MAX as u64 {
        return Err(format!("reading {raw} outside [0, {ADC_MAX}]"));
    }
    Ok(raw as u16)
}

fn parse_uint(token: &str, what: &str, line: usize) -> Result<u64> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            line,
            format!("{what} {token:?} is not a decimal integer"),
        ));
    }
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} {token:?} is too large")))
}

fn parse_raw(token: &str, line: usize) -> Result<u16> {
    check_raw(parse_uint(token, "reading", line)?).map_err(|m| Error::parse(line, m))
}

/// Yields `(line_number, content)` for lines that are not blank or comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then_some((i + 1, l))
    })
}

pub fn parse_log(text: &str) -> Result<Vec<SensorSample>> {
    let mut samples: Vec<SensorSample> = Vec::new();
    let mut explicit: Option<bool> = None;
    for (line, content) in content_lines(text) {
        let is_explicit = content.contains(',');
        match explicit {
            Some(e) if e != is_explicit => {
                return Err(Error::parse(
                    line,
                    "mixes timestamped and timestamp-free lines",
                ))
            }
            _ => explicit = Some(is_explicit),
        }
        let sample = if is_explicit {
            let (t, raw) = content.split_once(',').expect("checked above");
            if raw.contains(',') {
                return Err(Error::parse(line, "expected `<t_ms>,<raw>`"));
            }
            SensorSample {
                t_ms: parse_uint(t, "timestamp", line)?,
                raw: parse_raw(raw, line)?,
            }
        } else {
            SensorSample {
                t_ms: samples.len() as u64 * INFERRED_INTERVAL_MS,
                raw: parse_raw(content, line)?,
            }
        };
        if let Some(prev) = samples.last() {
            if sample.t_ms <= prev.t_ms {
                return Err(Error::parse(
                    line,
                    format!(
                        "timestamp {} does not increase past {}",
                        sample.t_ms, prev.t_ms
                    ),
                ));
            }
        }
        samples.push(sample);
    }
    Ok(samples)
}

pub fn write_log(samples: &[SensorSample]) -> String {
    let mut out = String::with_capacity(samples.len() * 10);
    for s in samples {
        write_log_line(&mut out, s);
    }
    out
}

pub(crate) fn write_log_line(out: &mut String, s: &SensorSample) {
    let _ = writeln!(out, "{},{}", s.t_ms, s.raw);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    Step,
    #[default]
    Linear,
}

/// Breakpoint description of a synthetic sensor signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorProfile {
    breakpoints: Vec<(u64, f64)>,
    pub interpolation: Interpolation,
}

impl SensorProfile {
    /// Breakpoints must be sorted by time. Values outside the ADC range are
    /// accepted here and clamped when sampled.
    pub fn new(breakpoints: Vec<(u64, f64)>, interpolation: Interpolation) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::invalid("profile has no breakpoints"));
        }
        if breakpoints.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::invalid("profile breakpoints are not sorted by time"));
        }
        if breakpoints.iter().any(|b| !b.1.is_finite()) {
            return Err(Error::invalid("profile value is not finite"));
        }
        Ok(SensorProfile {
            breakpoints,
            interpolation,
        })
    }

    pub fn constant(raw: u16) -> Self {
        SensorProfile {
            breakpoints: vec![(0, raw as f64)],
            interpolation: Interpolation::Step,
        }
    }

    pub fn breakpoints(&self) -> &[(u64, f64)] {
        &self.breakpoints
    }

    /// Interpolated value at `t_ms`, before rounding or clamping. Held flat
    /// before the first and after the last breakpoint.
    pub fn value_at(&self, t_ms: f64) -> f64 {
        let bps = &self.breakpoints;
        let after = bps.partition_point(|b| (b.0 as f64) <= t_ms);
        if after == 0 {
            return bps[0].1;
        }
        let (t0, v0) = bps[after - 1];
        match (self.interpolation, bps.get(after)) {
            (Interpolation::Linear, Some(&(t1, v1))) => {
                let frac = (t_ms - t0 as f64) / (t1 - t0) as f64;
                v0 + frac * (v1 - v0)
            }
            _ => v0,
        }
    }

    /// Rounded, ADC-clamped reading at `t_ms`.
    pub fn reading_at(&self, t_ms: f64) -> u16 {
        self.value_at(t_ms).round().clamp(0.0, ADC_MAX as f64) as u16
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut breakpoints = Vec::new();
        let mut interpolation = Interpolation::default();
        let mut last_line = 1;
        for (line, content) in content_lines(text) {
            last_line = line;
            if let Some((key, value)) = content.split_once('=') {
                if key.trim() != "interpolation" {
                    return Err(Error::parse(
                        line,
                        format!("unknown setting `{}`", key.trim()),
                    ));
                }
                interpolation = match value.trim() {
                    "step" => Interpolation::Step,
                    "linear" => Interpolation::Linear,
                    other => {
                        return Err(Error::parse(
                            line,
                            format!("unknown interpolation `{other}`"),
                        ))
                    }
                };
                continue;
            }
            let (t, raw) = content
                .split_once(',')
                .ok_or_else(|| Error::parse(line, "expected `<t_ms>,<raw>`"))?;
            let t = parse_uint(t, "timestamp", line)?;
            let raw = parse_raw(raw, line)?;
            if let Some(&(prev, _)) = breakpoints.last() {
                if t <= prev {
                    return Err(Error::parse(line, "breakpoint times must increase"));
                }
            }
            breakpoints.push((t, raw as f64));
        }
        if breakpoints.is_empty() {
            return Err(Error::parse(last_line, "profile has no breakpoints"));
        }
        SensorProfile::new(breakpoints, interpolation)
    }
}

/// Samples `profile` every `1000 / rate_hz` ms for `duration_ms`.
pub fn simulate_profile(
    profile: &SensorProfile,
    rate_hz: f64,
    duration_ms: u64,
) -> Result<Vec<SensorSample>> {
    let times = sample_times(rate_hz, duration_ms)?;
    Ok(times
        .map(|t_ms| SensorSample {
            t_ms,
            raw: profile.reading_at(t_ms as f64),
        })
        .collect())
}

/// Sample instants `round(i * 1000 / rate_hz)` strictly before `duration_ms`.
pub(crate) fn sample_times(rate_hz: f64, duration_ms: u64) -> Result<impl Iterator<Item = u64>> {
    if !(rate_hz > 0.0 && rate_hz <= 1000.0) {
        return Err(Error::invalid(format!(
            "sample rate {rate_hz} Hz outside (0, 1000]"
        )));
    }
    let period = 1000.0 / rate_hz;
    Ok((0u64..)
        .map(move |i| (i as f64 * period).round() as u64)
        .take_while(move |&t| t < duration_ms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Press,
    Release,
    Sensor(u16),
}

/// One timestamped input of the live mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteractionEvent {
    pub t_ms: u64,
    pub kind: EventKind,
}

/// Parses one event-script line (no comment handling).
pub fn parse_event_line(content: &str, line: usize) -> Result<InteractionEvent> {
    let mut tokens = content.split(' ');
    let t = tokens.next().unwrap_or_default();
    let t_ms = parse_uint(t, "timestamp", line)?;
    let kind = match (tokens.next(), tokens.next(), tokens.next()) {
        (Some("press"), None, _) => EventKind::Press,
        (Some("release"), None, _) => EventKind::Release,
        (Some("sensor"), Some(raw), None) => EventKind::Sensor(parse_raw(raw, line)?),
        _ => {
            return Err(Error::parse(
                line,
                format!("expected `<t_ms> press|release|sensor <raw>`, got {content:?}"),
            ))
        }
    };
    Ok(InteractionEvent { t_ms, kind })
}

/// Incremental order/alternation check shared by the script parser and the
/// live renderer.
#[derive(Debug, Clone, Copy, Default)]
pub struct EventValidator {
    last_t: Option<u64>,
    held: bool,
}

impl EventValidator {
    pub fn check(&mut self, ev: &InteractionEvent) -> std::result::Result<(), String> {
        if let Some(last) = self.last_t {
            if ev.t_ms < last {
                return Err(format!("timestamp {} is earlier than {last}", ev.t_ms));
            }
        }
        match (ev.kind, self.held) {
            (EventKind::Press, true) => return Err("press while already pressed".into()),
            (EventKind::Release, false) => return Err("release without a preceding press".into()),
            (EventKind::Press, false) => self.held = true,
            (EventKind::Release, true) => self.held = false,
            (EventKind::Sensor(_), _) => {}
        }
        self.last_t = Some(ev.t_ms);
        Ok(())
    }

    pub fn is_held(&self) -> bool {
        self.held
    }
}

pub fn parse_event_script(text: &str) -> Result<Vec<InteractionEvent>> {
    let mut validator = EventValidator::default();
    let mut events = Vec::new();
    for (line, content) in content_lines(text) {
        let ev = parse_event_line(content, line)?;
        validator.check(&ev).map_err(|m| Error::parse(line, m))?;
        events.push(ev);
    }
    Ok(events)
}

pub fn write_event_script(events: &[InteractionEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        let _ = match ev.kind {
            EventKind::Press => writeln!(out, "{} press", ev.t_ms),
            EventKind::Release => writeln!(out, "{} release", ev.t_ms),
            EventKind::Sensor(raw) => writeln!(out, "{} sensor {raw}", ev.t_ms),
        };
    }
    out
}

/// Checks a whole event list.
pub fn validate_events(events: &[InteractionEvent]) -> Result<()> {
    let mut v = EventValidator::default();
    for (i, ev) in events.iter().enumerate() {
        v.check(ev)
            .map_err(|m| Error::invalid(format!("event {}: {m}", i + 1)))?;
    }
    Ok(())
}
