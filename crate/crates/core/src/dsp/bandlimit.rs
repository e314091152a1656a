//! Spectral check that rendered audio contains no energy above the highest
//! intended partial.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::{Error, Result};

/// Bins above the partial ceiling must stay below this level relative to
/// the strongest bin.
pub const SPURIOUS_THRESHOLD_DB: f64 = -60.0;

/// Longest FFT frame. Longer buffers are analyzed in half-overlapping
/// frames and the per-bin maximum is kept.
const MAX_FRAME: usize = 1 << 16;

/// Floor used when a level is exactly zero.
const FLOOR_DB: f64 = -300.0;

/// Max-hold magnitude spectrum using a 4-term Blackman-Harris window.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub bin_hz: f64,
    pub magnitudes: Vec<f64>,
}

impl Spectrum {
    pub fn analyze(pcm: &[f64], sample_rate: f64) -> Self {
        let frame = pcm.len().next_power_of_two().clamp(2, MAX_FRAME);
        let hop = frame / 2;
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(frame);
        let window = blackman_harris(pcm.len().min(frame));
        let mut magnitudes = vec![0.0f64; frame / 2 + 1];
        let mut buf = vec![Complex::new(0.0, 0.0); frame];

        let mut start = 0;
        loop {
            let end = (start + frame).min(pcm.len());
            let seg = &pcm[start..end];
            buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
            for (i, (s, w)) in seg.iter().zip(&window).enumerate() {
                buf[i].re = s * w;
            }
            fft.process(&mut buf);
            for (m, c) in magnitudes.iter_mut().zip(&buf) {
                *m = (*m).max(c.norm());
            }
            if end == pcm.len() {
                break;
            }
            // the last frame is aligned to the end of the buffer
            start = (start + hop).min(pcm.len().saturating_sub(frame));
        }
        Spectrum {
            bin_hz: sample_rate / frame as f64,
            magnitudes,
        }
    }

    pub fn peak(&self) -> f64 {
        self.magnitudes.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Level of bin `i` in dB relative to the strongest bin.
    pub fn relative_db(&self, i: usize) -> f64 {
        to_db(self.magnitudes[i] / self.peak())
    }

    /// Frequency of the local maximum at bin `i`, refined by fitting a
    /// parabola through the log magnitudes of its neighbors.
    pub fn refine_peak(&self, i: usize) -> f64 {
        if i == 0 || i + 1 >= self.magnitudes.len() {
            return i as f64 * self.bin_hz;
        }
        let (a, b, c) = (
            self.magnitudes[i - 1].max(1e-300).ln(),
            self.magnitudes[i].max(1e-300).ln(),
            self.magnitudes[i + 1].max(1e-300).ln(),
        );
        let denom = a - 2.0 * b + c;
        let offset = if denom.abs() > 0.0 {
            0.5 * (a - c) / denom
        } else {
            0.0
        };
        (i as f64 + offset.clamp(-0.5, 0.5)) * self.bin_hz
    }

    /// Bins that are strict local maxima above `threshold_db`.
    pub fn peaks_above(&self, threshold_db: f64) -> Vec<usize> {
        let peak = self.peak();
        if peak <= 0.0 {
            return Vec::new();
        }
        let m = &self.magnitudes;
        (1..m.len().saturating_sub(1))
            .filter(|&i| m[i] > m[i - 1] && m[i] >= m[i + 1])
            .filter(|&i| to_db(m[i] / peak) > threshold_db)
            .collect()
    }
}

fn blackman_harris(n: usize) -> Vec<f64> {
    const A: [f64; 4] = [0.35875, 0.48829, 0.14128, 0.01168];
    let denom = n.max(2) as f64 - 1.0;
    (0..n)
        .map(|i| {
            let x = 2.0 * PI * i as f64 / denom;
            A[0] - A[1] * x.cos() + A[2] * (2.0 * x).cos() - A[3] * (3.0 * x).cos()
        })
        .collect()
}

fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (20.0 * ratio.log10()).max(FLOOR_DB)
    } else {
        FLOOR_DB
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitReport {
    pub pass: bool,
    pub f0_hz: f64,
    pub n_partials: u32,
    /// `f0 * n_partials`.
    pub expected_highest_partial_hz: f64,
    /// Highest spectral peak above the threshold and below the ceiling.
    pub highest_partial_hz: f64,
    /// `f0 * (n_partials + 0.5)`; every bin above this is spurious.
    pub ceiling_hz: f64,
    pub bin_hz: f64,
    /// Bins above the ceiling louder than [`SPURIOUS_THRESHOLD_DB`].
    pub spurious_bins: usize,
    /// Loudest bin above the ceiling, dB relative to the strongest bin.
    pub worst_spurious_db: f64,
    /// Power above the ceiling relative to total power, in dB.
    pub spurious_energy_db: f64,
}

/// Checks that `pcm` carries no partials above `f0 * n_partials`.
///
/// Passes iff every bin above `f0 * (n_partials + 0.5)` is more than 60 dB
/// below the strongest bin.
pub fn verify_bandlimit(
    pcm: &[f64],
    f0: f64,
    n_partials: u32,
    sample_rate: f64,
) -> Result<BandlimitReport> {
    if !(sample_rate > 0.0) {
        return Err(Error::invalid("sample rate must be positive"));
    }
    if (pcm.len() as f64) < sample_rate {
        return Err(Error::invalid(format!(
            "buffer of {} samples is shorter than one second",
            pcm.len()
        )));
    }
    if n_partials < 1 || !(f0 > 0.0) {
        return Err(Error::invalid("f0 and partial count must be positive"));
    }
    let expected = f0 * n_partials as f64;
    if expected >= sample_rate / 2.0 {
        return Err(Error::invalid(format!(
            "highest partial {expected:.2} Hz is not below Nyquist"
        )));
    }
    let ceiling = f0 * (n_partials as f64 + 0.5);

    let spec = Spectrum::analyze(pcm, sample_rate);
    let peak = spec.peak();
    if peak <= 0.0 {
        return Err(Error::invalid("buffer is silent"));
    }
    let first_spurious = (ceiling / spec.bin_hz).floor() as usize + 1;

    let mut spurious_bins = 0;
    let mut worst = 0.0f64;
    let mut above_power = 0.0;
    let mut total_power = 0.0;
    for (i, &m) in spec.magnitudes.iter().enumerate() {
        total_power += m * m;
        if i >= first_spurious {
            above_power += m * m;
            worst = worst.max(m);
            if to_db(m / peak) > SPURIOUS_THRESHOLD_DB {
                spurious_bins += 1;
            }
        }
    }

    let highest = spec
        .peaks_above(SPURIOUS_THRESHOLD_DB)
        .into_iter()
        .filter(|&i| i < first_spurious)
        .max()
        .map(|i| spec.refine_peak(i))
        .unwrap_or(0.0);

    Ok(BandlimitReport {
        pass: spurious_bins == 0,
        f0_hz: f0,
        n_partials,
        expected_highest_partial_hz: expected,
        highest_partial_hz: highest,
        ceiling_hz: ceiling,
        bin_hz: spec.bin_hz,
        spurious_bins,
        worst_spurious_db: to_db(worst / peak),
        spurious_energy_db: to_db((above_power / total_power).sqrt()),
    })
}
