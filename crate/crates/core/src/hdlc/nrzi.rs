//! NRZI: a 0 toggles the line level, a 1 holds it.

use super::bitstream::{BitStream, Framed, Nrzi};

/// Level the line idles at before the first bit.
pub const DEFAULT_INITIAL_LEVEL: bool = true;

pub fn nrzi_encode(bits: &BitStream<Framed>, initial_level: bool) -> BitStream<Nrzi> {
    let mut level = initial_level;
    let levels = bits
        .bits()
        .iter()
        .map(|&b| {
            if !b {
                level = !level;
            }
            level
        })
        .collect();
    BitStream::from_bits(levels)
}

/// Emits 1 where consecutive levels match and 0 where they differ.
///
/// With `prior = Some(level)` every input level produces a bit. With `None`
/// the first level only serves as the reference, so the output is one bit
/// shorter; the result is then unchanged if every level is inverted.
pub fn nrzi_decode(levels: &BitStream<Nrzi>, prior: Option<bool>) -> BitStream<Framed> {
    let lv = levels.bits();
    let (mut prev, rest) = match (prior, lv.split_first()) {
        (Some(p), _) => (p, lv),
        (None, Some((&first, rest))) => (first, rest),
        (None, None) => return BitStream::from_bits(Vec::new()),
    };
    let bits = rest
        .iter()
        .map(|&l| {
            let bit = l == prev;
            prev = l;
            bit
        })
        .collect();
    BitStream::from_bits(bits)
}
