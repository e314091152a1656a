//! Measurement helpers written independently of the engine's analysis code.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub const FS: f64 = 48_000.0;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_wavesoil")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Runs the CLI with `RUST_LOG` cleared so stderr only carries warnings.
pub fn wavesoil<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(bin())
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn wavesoil")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn hann(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
}

/// Hann-windowed magnitude spectrum of `x` zero-padded to `pad` points.
pub fn spectrum(x: &[f64], pad: usize) -> Vec<f64> {
    assert!(pad >= x.len());
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .zip(hann(x.len()))
        .map(|(s, w)| Complex::new(s * w, 0.0))
        .collect();
    buf.resize(pad, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(pad).process(&mut buf);
    buf[..pad / 2 + 1].iter().map(|c| c.norm()).collect()
}

/// Frequency of the strongest component within `half_width` Hz of
/// `target`, refined by a parabola through the log magnitudes.
pub fn peak_near(x: &[f64], sr: f64, target: f64, half_width: f64) -> f64 {
    let pad = (x.len() * 4).next_power_of_two().max(1 << 18);
    let mag = spectrum(x, pad);
    let df = sr / pad as f64;
    let lo = ((target - half_width) / df).floor() as usize;
    let hi = ((target + half_width) / df).ceil() as usize;
    let k = (lo..=hi)
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
        .unwrap();
    let (a, b, c) = (mag[k - 1].ln(), mag[k].ln(), mag[k + 1].ln());
    let denom = a - 2.0 * b + c;
    let delta = if denom == 0.0 {
        0.0
    } else {
        0.5 * (a - c) / denom
    };
    (k as f64 + delta) * df
}

/// Index and width of the strongest bin.
pub fn argmax_bin(x: &[f64], pad: usize, sr: f64) -> (usize, f64) {
    let mag = spectrum(x, pad);
    let k = (1..mag.len())
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
        .unwrap();
    (k, sr / pad as f64)
}

/// Power-weighted mean frequency.
pub fn centroid(x: &[f64], sr: f64) -> f64 {
    let pad = x.len().next_power_of_two();
    let mag = spectrum(x, pad);
    let df = sr / pad as f64;
    let (num, den) = mag.iter().enumerate().fold((0.0, 0.0), |(n, d), (i, m)| {
        (n + i as f64 * df * m * m, d + m * m)
    });
    num / den
}

/// Centered moving average of `x^2` over `win` samples; samples outside
/// the buffer count as silence.
pub fn moving_power(x: &[f64], win: usize) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(x.len() + 1);
    prefix.push(0.0);
    for s in x {
        prefix.push(prefix.last().unwrap() + s * s);
    }
    let half = win / 2;
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + win - half).min(x.len());
            (prefix[hi] - prefix[lo]) / win as f64
        })
        .collect()
}

/// Sample indices where short-block power rises above `rel_db` relative to
/// the loudest block after at least `quiet` samples below it. The quiet
/// requirement keeps within-cycle ripple from re-triggering.
pub fn onsets(x: &[f64], block: usize, rel_db: f64, quiet: usize) -> Vec<usize> {
    let powers: Vec<f64> = x
        .chunks(block)
        .map(|c| c.iter().map(|s| s * s).sum::<f64>() / c.len() as f64)
        .collect();
    let max = powers.iter().cloned().fold(0.0, f64::max);
    let thr = max * 10f64.powf(rel_db / 10.0);
    let need = quiet.div_ceil(block);
    let mut quiet_blocks = need;
    let mut out = Vec::new();
    for (i, &p) in powers.iter().enumerate() {
        if p > thr {
            if quiet_blocks >= need {
                out.push(i * block);
            }
            quiet_blocks = 0;
        } else {
            quiet_blocks += 1;
        }
    }
    out
}

/// Moves each coarse onset back to the first sample whose magnitude exceeds
/// `factor` times the loudest sample of the quiet stretch
/// `[c - lookback, c - guard)` before it.
pub fn refine_onsets(
    x: &[f64],
    coarse: &[usize],
    factor: f64,
    lookback: usize,
    guard: usize,
) -> Vec<usize> {
    coarse
        .iter()
        .map(|&c| {
            let floor = x[c.saturating_sub(lookback)..c.saturating_sub(guard)]
                .iter()
                .fold(0.0f64, |m, s| m.max(s.abs()));
            (c.saturating_sub(guard)..=c)
                .find(|&i| x[i].abs() > factor * floor)
                .unwrap_or(c)
        })
        .collect()
}

/// Mono fold-down of a 16-bit stereo WAV, read with a hand-rolled parser.
pub fn read_mono(path: &Path) -> Vec<f64> {
    let (l, r) = read_stereo(path);
    l.iter().zip(&r).map(|(a, b)| 0.5 * (a + b)).collect()
}

pub fn read_stereo(path: &Path) -> (Vec<f64>, Vec<f64>) {
    let b = std::fs::read(path).unwrap();
    assert_eq!(&b[..4], b"RIFF");
    assert_eq!(u16::from_le_bytes([b[34], b[35]]), 16);
    assert_eq!(u16::from_le_bytes([b[22], b[23]]), 2);
    let samples: Vec<f64> = b[44..]
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64 / 32767.0)
        .collect();
    samples.chunks_exact(2).map(|f| (f[0], f[1])).unzip()
}
