use super::render::StereoBuffer;
use crate::{Error, Result};

/// Interleaved signed PCM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantized {
    pub bit_depth: u16,
    /// Left, right, left, right, ...
    pub samples: Vec<i32>,
    /// Samples that were outside [-1, 1] (or NaN) and were limited.
    pub clipped: usize,
}

/// Symmetric scaling to `±(2^(bits-1) - 1)` with round-half-away-from-zero.
/// The most negative code is never produced.
pub fn quantize_pcm(buffer: &StereoBuffer, bit_depth: u16) -> Result<Quantized> {
    if !(2..=32).contains(&bit_depth) {
        return Err(Error::invalid(format!(
            "bit depth {bit_depth} outside 2..=32"
        )));
    }
    let scale = ((1u64 << (bit_depth - 1)) - 1) as f64;
    let mut clipped = 0;
    let samples = buffer
        .frames
        .iter()
        .flat_map(|f| f.iter().copied())
        .map(|x| {
            let x = if x.is_nan() {
                clipped += 1;
                0.0
            } else {
                if x.abs() > 1.0 {
                    clipped += 1;
                }
                x.clamp(-1.0, 1.0)
            };
            (x * scale).round() as i32
        })
        .collect();
    Ok(Quantized {
        bit_depth,
        samples,
        clipped,
    })
}
