//! AX.25 UI frames: address encoding, FCS, serialization and parsing.

mod address;
mod crc;
mod frame;
mod tnc2;

use thiserror::Error;

pub use address::{encode_address, AddressField, AddressRole, MAX_CALLSIGN_LEN, MAX_SSID};
pub use crc::{compute_fcs, compute_fcs_msb_first, fcs_is_valid, fcs_wire_bytes, FCS_GOOD_RESIDUE};
pub use frame::{
    build_frame, parse_frame, CommandBits, FrameBytes, FrameWarning, ParsedFrame, UiFrame,
    ADDRESS_LEN, MAX_DIGIPEATERS, MAX_FRAME_LEN, MAX_INFO_LEN, MIN_FRAME_LEN, PID_NO_LAYER3,
    UI_CONTROL,
};
pub use tnc2::{
    escape_info, format_tnc2, hex_bytes, hex_dump, parse_tnc2, parse_tnc2_header,
    DEFAULT_DESTINATION,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("invalid callsign {0:?}: 1-6 upper-case letters or digits")]
    InvalidCallsign(String),
    #[error("invalid SSID {0}: must be 0-15")]
    InvalidSsid(u8),
    #[error("invalid SSID {0:?}: must be a number 0-15")]
    InvalidSsidText(String),
    #[error("too many digipeaters: {0} (at most 8)")]
    TooManyDigipeaters(usize),
    #[error("info field is {0} bytes (must be 1-256)")]
    InfoFieldSize(usize),
    #[error("bad FCS: computed {computed:04X}, received {received:04X}")]
    BadFcs { computed: u16, received: u16 },
    #[error("malformed address block")]
    MalformedAddressBlock,
    #[error("TNC2 syntax: {0}")]
    Tnc2(String),
}
