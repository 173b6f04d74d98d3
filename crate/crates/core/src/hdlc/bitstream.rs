use std::fmt;
use std::marker::PhantomData;

mod sealed {
    pub trait Sealed {}
}

/// Which transforms a [`BitStream`] has been through.
pub trait Stage: sealed::Sealed {
    const NAME: &'static str;
}

/// Plain data bits, LSB first per byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logical {}
/// Data bits after zero insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stuffed {}
/// Stuffed body with flags before and after.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framed {}
/// Line levels after NRZI coding; `true` is the mark tone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nrzi {}

macro_rules! stage {
    ($t:ty, $name:literal) => {
        impl sealed::Sealed for $t {}
        impl Stage for $t {
            const NAME: &'static str = $name;
        }
    };
}
stage!(Logical, "logical");
stage!(Stuffed, "stuffed");
stage!(Framed, "framed");
stage!(Nrzi, "nrzi");

pub(crate) const FLAG_BITS: [bool; 8] = [false, true, true, true, true, true, true, false];

/// Ordered bits tagged with the stage they are at, so transforms can only be
/// applied in order.
#[derive(Clone, PartialEq, Eq)]
pub struct BitStream<S: Stage> {
    bits: Vec<bool>,
    _stage: PhantomData<S>,
}

impl<S: Stage> BitStream<S> {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitStream {
            bits,
            _stage: PhantomData,
        }
    }

    /// Convenience for literals: any non-zero value is a 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        Self::from_bits(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn stage(&self) -> &'static str {
        S::NAME
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b as u8).collect()
    }

    /// `0`/`1` in transmission order with a space every 8 bits.
    pub fn debug_dump(&self) -> String {
        dump(&self.bits, false)
    }
}

impl BitStream<Framed> {
    /// Like [`BitStream::debug_dump`] but with `|` around every flag.
    pub fn debug_dump_flags(&self) -> String {
        dump(&self.bits, true)
    }
}

pub(crate) fn is_flag_at(bits: &[bool], i: usize) -> bool {
    bits.get(i..i + 8) == Some(&FLAG_BITS[..])
}

fn dump(bits: &[bool], mark_flags: bool) -> String {
    let mut out = String::with_capacity(bits.len() * 9 / 8 + 2);
    let mut group = 0;
    let mut i = 0;
    while i < bits.len() {
        if mark_flags && is_flag_at(bits, i) {
            if !out.ends_with('|') {
                out.push('|');
            }
            out.push_str("01111110|");
            group = 0;
            i += 8;
            continue;
        }
        if group == 8 {
            out.push(' ');
            group = 0;
        }
        out.push(if bits[i] { '1' } else { '0' });
        group += 1;
        i += 1;
    }
    out
}

impl<S: Stage> fmt::Debug for BitStream<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream<{}>({})", S::NAME, self.debug_dump())
    }
}

/// Expands bytes least-significant bit first.
pub fn bytes_to_bits_lsb_first(data: &[u8]) -> BitStream<Logical> {
    let bits = data
        .iter()
        .flat_map(|&b| (0..8).map(move |i| (b >> i) & 1 == 1))
        .collect();
    BitStream::from_bits(bits)
}

/// Packs bits LSB first. Returns `None` unless the length is a whole number
/// of bytes.
pub fn bits_to_bytes_lsb_first(bits: &BitStream<Logical>) -> Option<Vec<u8>> {
    if !bits.len().is_multiple_of(8) {
        return None;
    }
    Some(
        bits.bits()
            .chunks_exact(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i))
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lsb_first_expansion() {
        assert_eq!(
            bytes_to_bits_lsb_first(&[0x03]).to_u8s(),
            [1, 1, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(
            bytes_to_bits_lsb_first(&[0x7E]).to_u8s(),
            [0, 1, 1, 1, 1, 1, 1, 0]
        );
        assert!(bytes_to_bits_lsb_first(&[]).is_empty());
        assert_eq!(bytes_to_bits_lsb_first(&[1, 2, 3]).len(), 24);
    }

    #[test]
    fn pack_inverts_expand() {
        let data: Vec<u8> = (0..=255).collect();
        let bits = bytes_to_bits_lsb_first(&data);
        assert_eq!(bits_to_bytes_lsb_first(&bits).unwrap(), data);
        let ragged = BitStream::<Logical>::from_u8s(&[1, 0, 1]);
        assert_eq!(bits_to_bytes_lsb_first(&ragged), None);
    }

    #[test]
    fn dump_groups_by_eight() {
        let bits = bytes_to_bits_lsb_first(&[0x03, 0xF0]);
        assert_eq!(bits.debug_dump(), "11000000 00001111");
        assert_eq!(bits.stage(), "logical");
    }

    #[test]
    fn dump_marks_flags() {
        let mut v = FLAG_BITS.to_vec();
        v.extend([true, true, false, false, false, false, false, false, true]);
        v.extend(FLAG_BITS);
        v.extend(FLAG_BITS);
        let s = BitStream::<Framed>::from_bits(v);
        assert_eq!(
            s.debug_dump_flags(),
            "|01111110|11000000 1|01111110|01111110|"
        );
    }
}
