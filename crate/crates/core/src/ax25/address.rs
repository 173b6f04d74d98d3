use std::fmt;
use std::str::FromStr;

use super::FrameError;

pub const MAX_CALLSIGN_LEN: usize = 6;
pub const MAX_SSID: u8 = 15;

/// Bit 0 of the SSID octet: set on the final address of the block.
const EXTENSION_BIT: u8 = 0x01;
/// Bits 6-5 of the SSID octet, reserved and sent as ones.
const RESERVED_BITS: u8 = 0x60;
/// Bit 7 of the SSID octet: C bit on destination/source, H bit on digipeaters.
const HIGH_BIT: u8 = 0x80;

/// A callsign plus SSID as it appears in the address block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AddressField {
    callsign: String,
    ssid: u8,
    /// Address-extension marker; set only on the final address of a frame.
    pub is_last: bool,
    /// Digipeater H bit.
    pub has_been_repeated: bool,
}

/// Position an address occupies in the block, which decides what bit 7 of
/// the SSID octet means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddressRole {
    Destination { command: bool },
    Source { command: bool },
    Digipeater,
}

impl AddressField {
    pub fn new(callsign: &str, ssid: u8) -> Result<Self, FrameError> {
        validate_callsign(callsign)?;
        if ssid > MAX_SSID {
            return Err(FrameError::InvalidSsid(ssid));
        }
        Ok(AddressField {
            callsign: callsign.to_owned(),
            ssid,
            is_last: false,
            has_been_repeated: false,
        })
    }

    pub fn callsign(&self) -> &str {
        &self.callsign
    }

    pub fn ssid(&self) -> u8 {
        self.ssid
    }

    pub fn repeated(mut self, yes: bool) -> Self {
        self.has_been_repeated = yes;
        self
    }

    /// Decodes one 7-byte wire address. The bit-7 flag is returned separately
    /// because its meaning depends on the address's position.
    pub(crate) fn decode(raw: &[u8; 7]) -> Result<(Self, bool), FrameError> {
        let mut callsign = String::with_capacity(MAX_CALLSIGN_LEN);
        for &b in &raw[..6] {
            if b & 1 != 0 {
                return Err(FrameError::MalformedAddressBlock);
            }
            callsign.push(char::from(b >> 1));
        }
        let callsign = callsign.trim_end_matches(' ');
        validate_callsign(callsign)?;
        let octet = raw[6];
        let addr = AddressField {
            callsign: callsign.to_owned(),
            ssid: (octet >> 1) & 0x0F,
            is_last: octet & EXTENSION_BIT != 0,
            has_been_repeated: false,
        };
        Ok((addr, octet & HIGH_BIT != 0))
    }
}

fn validate_callsign(callsign: &str) -> Result<(), FrameError> {
    let ok = !callsign.is_empty()
        && callsign.len() <= MAX_CALLSIGN_LEN
        && callsign
            .bytes()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(FrameError::InvalidCallsign(callsign.to_owned()))
    }
}

/// Encodes `addr` into its 7-byte wire form: six space-padded callsign
/// characters shifted left one bit, then the SSID octet.
pub fn encode_address(addr: &AddressField, role: AddressRole) -> Result<[u8; 7], FrameError> {
    validate_callsign(&addr.callsign)?;
    if addr.ssid > MAX_SSID {
        return Err(FrameError::InvalidSsid(addr.ssid));
    }
    let mut out = [b' ' << 1; 7];
    for (slot, c) in out.iter_mut().zip(addr.callsign.bytes()) {
        *slot = c << 1;
    }
    let high = match role {
        AddressRole::Destination { command } | AddressRole::Source { command } => command,
        AddressRole::Digipeater => addr.has_been_repeated,
    };
    let mut octet = RESERVED_BITS | (addr.ssid << 1);
    if high {
        octet |= HIGH_BIT;
    }
    if addr.is_last {
        octet |= EXTENSION_BIT;
    }
    out[6] = octet;
    Ok(out)
}

/// `CALL` or `CALL-N`; SSID 0 prints bare.
impl fmt::Display for AddressField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ssid == 0 {
            write!(f, "{}", self.callsign)
        } else {
            write!(f, "{}-{}", self.callsign, self.ssid)
        }
    }
}

/// Parses `CALL` or `CALL-N`. A trailing `*` is not accepted here; the TNC2
/// layer strips it.
impl FromStr for AddressField {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('-') {
            None => AddressField::new(s, 0),
            Some((call, ssid)) => {
                let ssid_ok =
                    !ssid.is_empty() && ssid.len() <= 2 && ssid.bytes().all(|c| c.is_ascii_digit());
                if !ssid_ok {
                    return Err(FrameError::InvalidSsidText(ssid.to_owned()));
                }
                let n: u8 = ssid
                    .parse()
                    .map_err(|_| FrameError::InvalidSsidText(ssid.to_owned()))?;
                AddressField::new(call, n)
            }
        }
    }
}
