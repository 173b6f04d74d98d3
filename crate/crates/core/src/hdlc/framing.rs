use super::bitstream::{
    bits_to_bytes_lsb_first, is_flag_at, BitStream, Framed, Stuffed, FLAG_BITS,
};
use super::stuffing::unstuff_bits;
use super::HdlcError;

/// Spans between flags shorter than this many unstuffed bits are noise.
pub const MIN_SPAN_BITS: usize = 136;

/// How many 0x7E flags go before and after each frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FramingConfig {
    pub preamble_flags: usize,
    pub postamble_flags: usize,
}

impl FramingConfig {
    pub fn new(preamble_flags: usize, postamble_flags: usize) -> Result<Self, HdlcError> {
        let cfg = FramingConfig {
            preamble_flags,
            postamble_flags,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HdlcError> {
        if self.preamble_flags == 0 || self.postamble_flags == 0 {
            return Err(HdlcError::FlagCount);
        }
        Ok(())
    }
}

impl Default for FramingConfig {
    fn default() -> Self {
        FramingConfig {
            preamble_flags: 25,
            postamble_flags: 2,
        }
    }
}

/// Surrounds a stuffed body with flags. Flags are never stuffed.
pub fn add_flags(body: &BitStream<Stuffed>, cfg: &FramingConfig) -> BitStream<Framed> {
    let n_flags = cfg.preamble_flags + cfg.postamble_flags;
    let mut out = Vec::with_capacity(body.len() + 8 * n_flags);
    for _ in 0..cfg.preamble_flags {
        out.extend_from_slice(&FLAG_BITS);
    }
    out.extend_from_slice(body.bits());
    for _ in 0..cfg.postamble_flags {
        out.extend_from_slice(&FLAG_BITS);
    }
    BitStream::from_bits(out)
}

/// Splits a flag-delimited bit stream into frame byte sequences.
///
/// Every span between two flags is unstuffed and packed LSB first. Spans
/// with a stuffing violation, a ragged bit count, or fewer than
/// [`MIN_SPAN_BITS`] bits are dropped. A single flag may close one frame
/// and open the next.
pub fn find_frames(bits: &BitStream<Framed>) -> Vec<Vec<u8>> {
    let b = bits.bits();
    let mut frames = Vec::new();
    let mut span_start: Option<usize> = None;
    let mut i = 0;
    while i + 8 <= b.len() {
        if is_flag_at(b, i) {
            if let Some(start) = span_start {
                if let Some(bytes) = extract(&b[start..i]) {
                    frames.push(bytes);
                }
            }
            i += 8;
            span_start = Some(i);
        } else {
            i += 1;
        }
    }
    frames
}

fn extract(span: &[bool]) -> Option<Vec<u8>> {
    if span.len() < MIN_SPAN_BITS {
        return None;
    }
    let logical = unstuff_bits(&BitStream::<Stuffed>::from_bits(span.to_vec())).ok()?;
    if logical.len() < MIN_SPAN_BITS {
        return None;
    }
    bits_to_bytes_lsb_first(&logical)
}
