//! HDLC bit layer: LSB-first serialization, zero-bit stuffing, flags and
//! NRZI line coding, with their inverses.

mod bitstream;
mod framing;
mod nrzi;
mod stuffing;

use thiserror::Error;

pub use bitstream::{
    bits_to_bytes_lsb_first, bytes_to_bits_lsb_first, BitStream, Framed, Logical, Nrzi, Stage,
    Stuffed,
};
pub use framing::{add_flags, find_frames, FramingConfig, MIN_SPAN_BITS};
pub use nrzi::{nrzi_decode, nrzi_encode, DEFAULT_INITIAL_LEVEL};
pub use stuffing::{stuff_bits, unstuff_bits};

/// The flag byte, 0x7E.
pub const FLAG: u8 = 0x7E;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HdlcError {
    #[error("six consecutive ones at stuffed bit {position}")]
    StuffingViolation { position: usize },
    #[error("preamble and postamble need at least one flag each")]
    FlagCount,
}
