//! Measurement helpers that do not share code with the library's analysis.
#![allow(dead_code)]

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

/// Hann-windowed magnitude spectrum, zero-padded to `pad * len` rounded up to
/// a power of two.
pub fn spectrum(x: &[f64], sample_rate: f64, pad: usize) -> (f64, Vec<f64>) {
    let n = (x.len() * pad).next_power_of_two();
    let denom = (x.len() - 1) as f64;
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .enumerate()
        .map(|(i, s)| Complex::new(s * 0.5 * (1.0 - (2.0 * PI * i as f64 / denom).cos()), 0.0))
        .collect();
    buf.resize(n, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    (
        sample_rate / n as f64,
        buf[..n / 2].iter().map(|c| c.norm()).collect(),
    )
}

fn refine(mags: &[f64], i: usize, bin_hz: f64) -> f64 {
    let (a, b, c) = (mags[i - 1].ln(), mags[i].ln(), mags[i + 1].ln());
    let d = a - 2.0 * b + c;
    (i as f64 + if d != 0.0 { 0.5 * (a - c) / d } else { 0.0 }) * bin_hz
}

/// Frequency of the largest peak within `±search_hz` of `around_hz`.
pub fn peak_near(x: &[f64], sample_rate: f64, around_hz: f64, search_hz: f64) -> f64 {
    let (bin_hz, mags) = spectrum(x, sample_rate, 4);
    let lo = ((around_hz - search_hz) / bin_hz).floor().max(1.0) as usize;
    let hi = ((around_hz + search_hz) / bin_hz).ceil() as usize;
    let i = (lo..=hi)
        .max_by(|&a, &b| mags[a].total_cmp(&mags[b]))
        .unwrap();
    refine(&mags, i, bin_hz)
}

/// The `n` largest local maxima, as refined frequencies sorted ascending.
pub fn top_peaks(x: &[f64], sample_rate: f64, n: usize) -> Vec<f64> {
    let (bin_hz, mags) = spectrum(x, sample_rate, 4);
    let mut peaks: Vec<usize> = (1..mags.len() - 1)
        .filter(|&i| mags[i] > mags[i - 1] && mags[i] >= mags[i + 1])
        .collect();
    peaks.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]));
    let mut f: Vec<f64> = peaks[..n]
        .iter()
        .map(|&i| refine(&mags, i, bin_hz))
        .collect();
    f.sort_by(f64::total_cmp);
    f
}

/// Bin index of the largest magnitude (no padding).
pub fn argmax_bin(x: &[f64], sample_rate: f64) -> (usize, f64) {
    let (bin_hz, mags) = spectrum(x, sample_rate, 1);
    let i = (1..mags.len())
        .max_by(|&a, &b| mags[a].total_cmp(&mags[b]))
        .unwrap();
    (i, bin_hz)
}

/// Power-weighted mean frequency.
pub fn centroid(x: &[f64], sample_rate: f64) -> f64 {
    let (bin_hz, mags) = spectrum(x, sample_rate, 1);
    let (num, den) = mags.iter().enumerate().fold((0.0, 0.0), |(n, d), (i, m)| {
        (n + i as f64 * bin_hz * m * m, d + m * m)
    });
    num / den
}

/// Single-bin DFT magnitude at `freq`, normalized to sine amplitude.
pub fn tone_amplitude(x: &[f64], sample_rate: f64, freq: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (i, s) in x.iter().enumerate() {
        let w = 2.0 * PI * freq * i as f64 / sample_rate;
        re += s * w.cos();
        im += s * w.sin();
    }
    2.0 * (re * re + im * im).sqrt() / x.len() as f64
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|s| s * s).sum::<f64>() / x.len() as f64).sqrt()
}

/// Centered moving RMS with a `win`-sample window, evaluated every `hop`.
pub fn moving_rms(x: &[f64], win: usize, hop: usize) -> Vec<(usize, f64)> {
    let half = win / 2;
    (0..x.len())
        .step_by(hop)
        .map(|c| {
            let lo = c.saturating_sub(half);
            let hi = (c + half).min(x.len());
            (c, rms(&x[lo..hi]))
        })
        .collect()
}
