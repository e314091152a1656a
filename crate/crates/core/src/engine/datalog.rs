use std::io::Write;

use crate::sensor_io::{sample_times, write_log_line, SensorProfile, SensorSample};
use crate::{Error, Result};

/// Anything that can be polled for a reading at a stream time.
pub trait SensorSource {
    fn read(&mut self, t_ms: u64) -> Result<u16>;
}

impl SensorSource for SensorProfile {
    fn read(&mut self, t_ms: u64) -> Result<u16> {
        Ok(self.reading_at(t_ms as f64))
    }
}

impl<F: FnMut(u64) -> u16> SensorSource for F {
    fn read(&mut self, t_ms: u64) -> Result<u16> {
        Ok(self(t_ms))
    }
}

/// Polls `source` every `1000 / rate_hz` ms of stream time for
/// `duration_ms`, appending one `<t_ms>,<raw>` line per reading to `sink`.
///
/// Lines are written one at a time, so on a sink failure everything before
/// the failing line is already stored.
pub fn run_datalog<S, W>(
    source: &mut S,
    sink: &mut W,
    rate_hz: f64,
    duration_ms: u64,
) -> Result<usize>
where
    S: SensorSource + ?Sized,
    W: Write + ?Sized,
{
    let mut written = 0;
    let mut line = String::new();
    for t_ms in sample_times(rate_hz, duration_ms)? {
        let sample = SensorSample::new(t_ms, source.read(t_ms)?)?;
        line.clear();
        write_log_line(&mut line, &sample);
        sink.write_all(line.as_bytes())
            .map_err(|source| Error::Datalog { written, source })?;
        written += 1;
    }
    sink.flush()
        .map_err(|source| Error::Datalog { written, source })?;
    Ok(written)
}
