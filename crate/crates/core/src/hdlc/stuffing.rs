use super::bitstream::{BitStream, Logical, Stuffed};
use super::HdlcError;

const MAX_ONES: u32 = 5;

/// Inserts a 0 after every run of five 1s.
pub fn stuff_bits(bits: &BitStream<Logical>) -> BitStream<Stuffed> {
    let mut out = Vec::with_capacity(bits.len() + bits.len() / 5 + 1);
    let mut run = 0;
    for &b in bits.bits() {
        out.push(b);
        if b {
            run += 1;
            if run == MAX_ONES {
                out.push(false);
                run = 0;
            }
        } else {
            run = 0;
        }
    }
    BitStream::from_bits(out)
}

/// Removes the 0 that follows every run of five 1s.
pub fn unstuff_bits(bits: &BitStream<Stuffed>) -> Result<BitStream<Logical>, HdlcError> {
    let mut out = Vec::with_capacity(bits.len());
    let mut run = 0;
    for (pos, &b) in bits.bits().iter().enumerate() {
        if run == MAX_ONES {
            if b {
                return Err(HdlcError::StuffingViolation { position: pos });
            }
            run = 0;
            continue;
        }
        out.push(b);
        run = if b { run + 1 } else { 0 };
    }
    Ok(BitStream::from_bits(out))
}
