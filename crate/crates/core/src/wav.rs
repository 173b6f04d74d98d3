//! Mono 16-bit PCM WAV files.
//!
//! Writing always produces the canonical 44-byte header layout. Reading
//! accepts 8-bit unsigned and 16-bit signed PCM with any channel count and
//! averages channels down to mono.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::afsk::AudioBuffer;

const FORMAT_PCM: u16 = 1;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;
const FULL_SCALE: f64 = 32767.0;

#[derive(Debug, Error)]
pub enum WavError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt WAV header: {0}")]
    CorruptHeader(String),
}

/// Format of a file this module writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavSpec {
    pub sample_rate: u32,
    pub bits_per_sample: u16,
    pub channels: u16,
}

impl WavSpec {
    pub fn mono16(sample_rate: u32) -> Self {
        WavSpec {
            sample_rate,
            bits_per_sample: 16,
            channels: 1,
        }
    }

    pub fn block_align(&self) -> u16 {
        self.channels * self.bits_per_sample / 8
    }

    pub fn byte_rate(&self) -> u32 {
        self.sample_rate * u32::from(self.block_align())
    }
}

/// Maps [-1, 1] onto [-32767, 32767], rounding half away from zero.
pub fn quantize(sample: f32) -> i16 {
    (f64::from(sample).clamp(-1.0, 1.0) * FULL_SCALE).round() as i16
}

/// Serializes `audio` as a mono 16-bit PCM WAV image.
pub fn encode_wav(audio: &AudioBuffer) -> Vec<u8> {
    let spec = WavSpec::mono16(audio.sample_rate);
    let data_len = (audio.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&spec.channels.to_le_bytes());
    out.extend_from_slice(&spec.sample_rate.to_le_bytes());
    out.extend_from_slice(&spec.byte_rate().to_le_bytes());
    out.extend_from_slice(&spec.block_align().to_le_bytes());
    out.extend_from_slice(&spec.bits_per_sample.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in &audio.samples {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    out
}

pub fn write_wav(audio: &AudioBuffer, path: impl AsRef<Path>) -> Result<(), WavError> {
    fs::write(path, encode_wav(audio))?;
    Ok(())
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer, WavError> {
    decode_wav(&fs::read(path)?)
}

struct Fmt {
    channels: u16,
    sample_rate: u32,
    bits: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<Fmt, WavError> {
    if body.len() < 16 {
        return Err(WavError::CorruptHeader(format!(
            "fmt chunk is {} bytes",
            body.len()
        )));
    }
    let mut tag = u16_at(body, 0);
    if tag == FORMAT_EXTENSIBLE {
        if body.len() < 26 {
            return Err(WavError::CorruptHeader(
                "short WAVE_FORMAT_EXTENSIBLE chunk".into(),
            ));
        }
        // First two bytes of the sub-format GUID carry the real format tag.
        tag = u16_at(body, 24);
    }
    match tag {
        FORMAT_PCM => {}
        3 => return Err(WavError::UnsupportedFormat("IEEE float samples".into())),
        other => {
            return Err(WavError::UnsupportedFormat(format!(
                "format tag 0x{other:04X}"
            )))
        }
    }
    let fmt = Fmt {
        channels: u16_at(body, 2),
        sample_rate: u32_at(body, 4),
        bits: u16_at(body, 14),
    };
    if fmt.channels == 0 || fmt.sample_rate == 0 {
        return Err(WavError::CorruptHeader(
            "zero channels or sample rate".into(),
        ));
    }
    if fmt.bits != 8 && fmt.bits != 16 {
        return Err(WavError::UnsupportedFormat(format!("{}-bit PCM", fmt.bits)));
    }
    Ok(fmt)
}

/// Parses a WAV image into mono samples in [-1, 1].
pub fn decode_wav(bytes: &[u8]) -> Result<AudioBuffer, WavError> {
    if bytes.len() < 12 || &bytes[..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::CorruptHeader(
            "missing RIFF/WAVE signature".into(),
        ));
    }
    let mut fmt = None;
    let mut pos = 12;
    loop {
        if pos + 8 > bytes.len() {
            return Err(WavError::CorruptHeader("no data chunk".into()));
        }
        let id = &bytes[pos..pos + 4];
        let len = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(len)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                WavError::CorruptHeader(format!(
                    "chunk {:?} claims {len} bytes, file has {}",
                    String::from_utf8_lossy(id),
                    bytes.len() - body_start
                ))
            })?;
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => fmt = Some(parse_fmt(body)?),
            b"data" => {
                let fmt = fmt
                    .ok_or_else(|| WavError::CorruptHeader("data chunk before fmt chunk".into()))?;
                return Ok(samples_to_mono(body, &fmt));
            }
            _ => {}
        }
        pos = body_end + (len & 1);
    }
}

fn samples_to_mono(data: &[u8], fmt: &Fmt) -> AudioBuffer {
    let width = usize::from(fmt.bits / 8);
    let channels = usize::from(fmt.channels);
    let sample = |b: &[u8]| -> f64 {
        match width {
            1 => (f64::from(b[0]) - 128.0) / 127.0,
            _ => f64::from(i16::from_le_bytes([b[0], b[1]])) / FULL_SCALE,
        }
    };
    let samples = data
        .chunks_exact(width * channels)
        .map(|frame| {
            let sum: f64 = frame.chunks_exact(width).map(sample).sum();
            (sum / channels as f64).clamp(-1.0, 1.0) as f32
        })
        .collect();
    AudioBuffer::new(samples, fmt.sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_arithmetic() {
        let bytes = encode_wav(&AudioBuffer::silence(480, 48_000));
        assert_eq!(bytes.len(), 44 + 960);
        assert_eq!(u32_at(&bytes, 4), 36 + 960);
        assert_eq!(u32_at(&bytes, 28), 96_000);
        assert_eq!(u16_at(&bytes, 32), 2);
        assert_eq!(&bytes[36..40], b"data");
        assert_eq!(u32_at(&bytes, 40), 960);
    }

    #[test]
    fn quantization_rules() {
        assert_eq!(quantize(0.0), 0);
        assert_eq!(quantize(1.0), 32767);
        assert_eq!(quantize(-1.0), -32767);
        // 0.5 * 32767 = 16383.5 exactly; ties go away from zero.
        assert_eq!(quantize(0.5), 16384);
        assert_eq!(quantize(-0.5), -16384);
        assert_eq!(quantize(2.0), 32767);
    }

    #[test]
    fn round_trip_within_one_step() {
        let samples: Vec<f32> = (0..1000).map(|i| ((i as f32) * 0.37).sin() * 0.9).collect();
        let a = AudioBuffer::new(samples, 22_050);
        let back = decode_wav(&encode_wav(&a)).unwrap();
        assert_eq!(back.sample_rate, 22_050);
        for (x, y) in a.samples.iter().zip(&back.samples) {
            assert!((x - y).abs() <= 1.0 / 32767.0);
        }
    }

    #[test]
    fn rewrite_is_byte_identical() {
        let samples: Vec<f32> = (0..5000).map(|i| ((i as f32) * 0.011).cos()).collect();
        let first = encode_wav(&AudioBuffer::new(samples, 8000));
        let second = encode_wav(&decode_wav(&first).unwrap());
        assert_eq!(first, second);
    }

    fn custom_wav(tag: u16, channels: u16, bits: u16, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
        out.extend_from_slice(b"WAVEfmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&tag.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&8000u32.to_le_bytes());
        let align = channels * bits / 8;
        out.extend_from_slice(&(8000 * u32::from(align)).to_le_bytes());
        out.extend_from_slice(&align.to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        out.extend_from_slice(data);
        out
    }

    #[test]
    fn eight_bit_unsigned() {
        let a = decode_wav(&custom_wav(1, 1, 8, &[128, 255, 1])).unwrap();
        assert_eq!(a.samples, vec![0.0, 1.0, -1.0]);
    }

    #[test]
    fn stereo_is_averaged() {
        let mut data = Vec::new();
        for (l, r) in [(32767i16, 0i16), (-32767, -32767)] {
            data.extend_from_slice(&l.to_le_bytes());
            data.extend_from_slice(&r.to_le_bytes());
        }
        let a = decode_wav(&custom_wav(1, 2, 16, &data)).unwrap();
        assert_eq!(a.samples, vec![0.5, -1.0]);
    }

    #[test]
    fn float_is_unsupported() {
        let err = decode_wav(&custom_wav(3, 1, 32, &[0; 8])).unwrap_err();
        assert!(matches!(err, WavError::UnsupportedFormat(_)));
        let err = decode_wav(&custom_wav(0x55, 1, 16, &[0; 8])).unwrap_err();
        assert!(matches!(err, WavError::UnsupportedFormat(_)));
        let err = decode_wav(&custom_wav(1, 1, 24, &[0; 6])).unwrap_err();
        assert!(matches!(err, WavError::UnsupportedFormat(_)));
    }

    #[test]
    fn truncated_header() {
        let bytes = encode_wav(&AudioBuffer::silence(10, 8000));
        for cut in [0, 4, 11, 20, 30, 40] {
            assert!(
                matches!(decode_wav(&bytes[..cut]), Err(WavError::CorruptHeader(_))),
                "cut at {cut}"
            );
        }
        // Data chunk claims more than is there.
        assert!(matches!(
            decode_wav(&bytes[..50]),
            Err(WavError::CorruptHeader(_))
        ));
    }

    #[test]
    fn skips_unknown_chunks() {
        let bytes = encode_wav(&AudioBuffer::new(vec![0.25; 4], 8000));
        let mut with_list = bytes[..36].to_vec();
        with_list.extend_from_slice(b"LIST");
        with_list.extend_from_slice(&3u32.to_le_bytes());
        with_list.extend_from_slice(&[1, 2, 3, 0]);
        with_list.extend_from_slice(&bytes[36..]);
        let a = decode_wav(&with_list).unwrap();
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            read_wav("/nonexistent/x.wav"),
            Err(WavError::Io(_))
        ));
    }
}
