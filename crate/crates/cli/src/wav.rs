//! Canonical PCM WAV: a 44-byte RIFF header followed by interleaved
//! little-endian samples. Only the fields the renderer needs are supported.

use std::fs;
use std::path::Path;

use wavesoil::engine::{Quantized, CHANNELS};

use crate::CliError;

pub const HEADER_LEN: usize = 44;
const PCM_FORMAT: u16 = 1;

/// Decoded PCM with its format fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavData {
    pub sample_rate: u32,
    pub channels: u16,
    pub bit_depth: u16,
    /// Interleaved samples.
    pub samples: Vec<i32>,
}

impl WavData {
    pub fn frames(&self) -> usize {
        self.samples.len() / self.channels as usize
    }

    pub fn duration_s(&self) -> f64 {
        self.frames() as f64 / self.sample_rate as f64
    }

    /// Channel average scaled back to [-1, 1].
    pub fn mono(&self) -> Vec<f64> {
        let scale = ((1u64 << (self.bit_depth - 1)) - 1) as f64;
        let ch = self.channels as usize;
        self.samples
            .chunks_exact(ch)
            .map(|f| f.iter().map(|&s| s as f64).sum::<f64>() / (ch as f64 * scale))
            .collect()
    }
}

fn bytes_per_sample(bit_depth: u16) -> Result<usize, String> {
    match bit_depth {
        16 => Ok(2),
        24 => Ok(3),
        other => Err(format!("unsupported bit depth {other}")),
    }
}

/// Serializes stereo PCM into a complete WAV image.
pub fn encode(pcm: &Quantized, sample_rate: u32) -> Result<Vec<u8>, String> {
    let width = bytes_per_sample(pcm.bit_depth)?;
    if !pcm.samples.len().is_multiple_of(CHANNELS as usize) {
        return Err("sample count is not a whole number of stereo frames".into());
    }
    let data_len = pcm.samples.len() * width;
    let data_len_u32 = u32::try_from(data_len)
        .ok()
        .filter(|n| n.checked_add(36).is_some())
        .ok_or("audio too long for a WAV file")?;
    let block_align = CHANNELS * width as u16;

    let mut out = Vec::with_capacity(HEADER_LEN + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len_u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&CHANNELS.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * block_align as u32).to_le_bytes());
    out.extend_from_slice(&block_align.to_le_bytes());
    out.extend_from_slice(&pcm.bit_depth.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len_u32.to_le_bytes());
    for &s in &pcm.samples {
        out.extend_from_slice(&s.to_le_bytes()[..width]);
    }
    Ok(out)
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Parses a PCM WAV image. Chunks other than `fmt ` and `data` are skipped.
pub fn decode(bytes: &[u8]) -> Result<WavData, String> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err("not a RIFF/WAVE file".into());
    }
    let mut fmt = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let len = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        let end = body.checked_add(len).filter(|&e| e <= bytes.len());
        match id {
            b"fmt " => {
                let end = end.ok_or("truncated fmt chunk")?;
                if len < 16 {
                    return Err("fmt chunk shorter than 16 bytes".into());
                }
                let c = &bytes[body..end];
                fmt = Some((u16_at(c, 0), u16_at(c, 2), u32_at(c, 4), u16_at(c, 14)));
            }
            b"data" => {
                let end = end.ok_or("truncated data chunk")?;
                let (format, channels, sample_rate, bit_depth) =
                    fmt.ok_or("data chunk precedes fmt chunk")?;
                if format != PCM_FORMAT {
                    return Err(format!("audio format {format} is not integer PCM"));
                }
                if channels == 0 {
                    return Err("zero channels".into());
                }
                let width = bytes_per_sample(bit_depth)?;
                let data = &bytes[body..end];
                if !data.len().is_multiple_of(width * channels as usize) {
                    return Err("data chunk is not a whole number of frames".into());
                }
                let shift = 32 - bit_depth as u32;
                let samples = data
                    .chunks_exact(width)
                    .map(|c| {
                        let mut b = [0u8; 4];
                        b[..width].copy_from_slice(c);
                        (i32::from_le_bytes(b) << shift) >> shift
                    })
                    .collect();
                return Ok(WavData {
                    sample_rate,
                    channels,
                    bit_depth,
                    samples,
                });
            }
            _ => {}
        }
        // Chunks are padded to even length.
        pos = body.saturating_add(len).saturating_add(len & 1);
    }
    Err("no data chunk".into())
}

pub fn write_file(path: &Path, pcm: &Quantized, sample_rate: u32) -> Result<(), CliError> {
    let bytes = encode(pcm, sample_rate).map_err(|message| CliError::Wav {
        path: path.to_path_buf(),
        message,
    })?;
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_file(path: &Path) -> Result<WavData, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode(&bytes).map_err(|message| CliError::Wav {
        path: path.to_path_buf(),
        message,
    })
}
