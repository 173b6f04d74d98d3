use super::address::{encode_address, AddressField, AddressRole};
use super::crc::{compute_fcs, fcs_wire_bytes};
use super::FrameError;

pub const UI_CONTROL: u8 = 0x03;
pub const PID_NO_LAYER3: u8 = 0xF0;
pub const MAX_DIGIPEATERS: usize = 8;
pub const MAX_INFO_LEN: usize = 256;
pub const ADDRESS_LEN: usize = 7;
/// Two addresses, control, PID, one info byte and the FCS.
pub const MIN_FRAME_LEN: usize = 2 * ADDRESS_LEN + 1 + 1 + 1 + 2;
/// Longest payload plus FCS this module will build or accept.
pub const MAX_FRAME_LEN: usize = (2 + MAX_DIGIPEATERS) * ADDRESS_LEN + 2 + MAX_INFO_LEN + 2;
/// Parser gives up looking for the extension bit after this many addresses.
const MAX_ADDRESSES_SCANNED: usize = 10;

/// Command/response bits carried in bit 7 of the destination and source
/// SSID octets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommandBits {
    pub destination: bool,
    pub source: bool,
}

impl Default for CommandBits {
    fn default() -> Self {
        CommandBits {
            destination: true,
            source: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UiFrame {
    pub destination: AddressField,
    pub source: AddressField,
    pub digipeaters: Vec<AddressField>,
    pub control: u8,
    pub pid: u8,
    pub info: Vec<u8>,
    pub command_bits: CommandBits,
}

impl UiFrame {
    /// A UI frame with control 0x03, PID 0xF0 and default command bits.
    ///
    /// Extension bits are normalized so only the final address carries one;
    /// destination and source never carry an H bit.
    pub fn new(
        mut destination: AddressField,
        mut source: AddressField,
        mut digipeaters: Vec<AddressField>,
        info: impl Into<Vec<u8>>,
    ) -> Result<Self, FrameError> {
        let info = info.into();
        check_sizes(digipeaters.len(), info.len())?;
        destination.has_been_repeated = false;
        source.has_been_repeated = false;
        destination.is_last = false;
        source.is_last = digipeaters.is_empty();
        let n = digipeaters.len();
        for (i, d) in digipeaters.iter_mut().enumerate() {
            d.is_last = i + 1 == n;
        }
        Ok(UiFrame {
            destination,
            source,
            digipeaters,
            control: UI_CONTROL,
            pid: PID_NO_LAYER3,
            info,
            command_bits: CommandBits::default(),
        })
    }

    pub fn is_ui(&self) -> bool {
        self.control == UI_CONTROL
    }
}

fn check_sizes(digis: usize, info: usize) -> Result<(), FrameError> {
    if digis > MAX_DIGIPEATERS {
        return Err(FrameError::TooManyDigipeaters(digis));
    }
    if info == 0 || info > MAX_INFO_LEN {
        return Err(FrameError::InfoFieldSize(info));
    }
    Ok(())
}

/// Serialized frame body and its FCS, ready for the bit layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameBytes {
    /// First destination byte through the last info byte.
    pub payload: Vec<u8>,
    /// FCS octets in transmission order (low octet first).
    pub fcs: [u8; 2],
}

impl FrameBytes {
    pub fn fcs_value(&self) -> u16 {
        u16::from_le_bytes(self.fcs)
    }

    /// `payload ++ fcs`, the byte sequence handed to the bit layer.
    pub fn to_wire(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.payload.len() + 2);
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&self.fcs);
        out
    }
}

/// Serializes a UI frame: addresses, control, PID, info, then the FCS.
///
/// The control byte is always 0x03 and the PID always 0xF0 regardless of
/// what `frame` holds.
pub fn build_frame(frame: &UiFrame) -> Result<FrameBytes, FrameError> {
    check_sizes(frame.digipeaters.len(), frame.info.len())?;
    let n_addr = 2 + frame.digipeaters.len();
    let mut payload = Vec::with_capacity(n_addr * ADDRESS_LEN + 2 + frame.info.len());

    let mut dest = frame.destination.clone();
    dest.is_last = false;
    payload.extend(encode_address(
        &dest,
        AddressRole::Destination {
            command: frame.command_bits.destination,
        },
    )?);
    let mut src = frame.source.clone();
    src.is_last = frame.digipeaters.is_empty();
    payload.extend(encode_address(
        &src,
        AddressRole::Source {
            command: frame.command_bits.source,
        },
    )?);
    for (i, digi) in frame.digipeaters.iter().enumerate() {
        let mut d = digi.clone();
        d.is_last = i + 1 == frame.digipeaters.len();
        payload.extend(encode_address(&d, AddressRole::Digipeater)?);
    }
    payload.push(UI_CONTROL);
    payload.push(PID_NO_LAYER3);
    payload.extend_from_slice(&frame.info);

    let fcs = fcs_wire_bytes(compute_fcs(&payload));
    Ok(FrameBytes { payload, fcs })
}

/// Something odd about a frame that still parsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameWarning {
    NotUiFrame { control: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFrame {
    pub frame: UiFrame,
    pub warning: Option<FrameWarning>,
}

/// Parses `payload ++ fcs` back into a frame. The FCS is checked before
/// anything else is looked at.
pub fn parse_frame(data: &[u8]) -> Result<ParsedFrame, FrameError> {
    if data.len() < MIN_FRAME_LEN {
        return Err(FrameError::MalformedAddressBlock);
    }
    let (payload, fcs) = data.split_at(data.len() - 2);
    let received = u16::from_le_bytes([fcs[0], fcs[1]]);
    let computed = compute_fcs(payload);
    if received != computed {
        return Err(FrameError::BadFcs { computed, received });
    }

    let mut addrs = Vec::new();
    let mut pos = 0;
    loop {
        if addrs.len() == MAX_ADDRESSES_SCANNED || pos + ADDRESS_LEN > payload.len() {
            return Err(FrameError::MalformedAddressBlock);
        }
        let raw: &[u8; 7] = payload[pos..pos + ADDRESS_LEN].try_into().unwrap();
        let decoded = AddressField::decode(raw)?;
        pos += ADDRESS_LEN;
        let last = decoded.0.is_last;
        addrs.push(decoded);
        if last {
            break;
        }
    }
    if addrs.len() < 2 {
        return Err(FrameError::MalformedAddressBlock);
    }
    if payload.len() < pos + 2 {
        return Err(FrameError::MalformedAddressBlock);
    }
    let control = payload[pos];
    let pid = payload[pos + 1];
    let info = payload[pos + 2..].to_vec();
    check_sizes(addrs.len() - 2, info.len())?;

    let mut addrs = addrs.into_iter();
    let (destination, dest_c) = addrs.next().unwrap();
    let (source, src_c) = addrs.next().unwrap();
    let digipeaters = addrs.map(|(a, h)| a.repeated(h)).collect();

    let warning = (control != UI_CONTROL).then_some(FrameWarning::NotUiFrame { control });
    Ok(ParsedFrame {
        frame: UiFrame {
            destination,
            source,
            digipeaters,
            control,
            pid,
            info,
            command_bits: CommandBits {
                destination: dest_c,
                source: src_c,
            },
        },
        warning,
    })
}
