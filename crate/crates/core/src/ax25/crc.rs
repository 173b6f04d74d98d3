//! CRC-16/X-25 frame check sequence.
//!
//! The canonical value is the bit-reflected CRC (poly x^16 + x^12 + x^5 + 1,
//! init 0xFFFF, xorout 0xFFFF). It goes on air low octet first, each octet
//! LSB first.

/// Reflected form of 0x1021.
const POLY_REFLECTED: u16 = 0x8408;
const POLY: u16 = 0x1021;
const INIT: u16 = 0xFFFF;
const XOROUT: u16 = 0xFFFF;

/// Residue left in the (pre-xorout) register after running the CRC over a
/// frame followed by its own FCS, low octet first.
pub const FCS_GOOD_RESIDUE: u16 = 0xF0B8;

const TABLE: [u16; 256] = build_table();

const fn build_table() -> [u16; 256] {
    let mut table = [0u16; 256];
    let mut i = 0;
    while i < 256 {
        let mut crc = i as u16;
        let mut bit = 0;
        while bit < 8 {
            crc = if crc & 1 != 0 {
                (crc >> 1) ^ POLY_REFLECTED
            } else {
                crc >> 1
            };
            bit += 1;
        }
        table[i] = crc;
        i += 1;
    }
    table
}

fn update(mut crc: u16, data: &[u8]) -> u16 {
    for &b in data {
        crc = (crc >> 8) ^ TABLE[((crc ^ u16::from(b)) & 0xFF) as usize];
    }
    crc
}

/// CRC-16/X-25 of `payload`.
pub fn compute_fcs(payload: &[u8]) -> u16 {
    update(INIT, payload) ^ XOROUT
}

/// True when `frame` (payload followed by its FCS, low octet first) checks.
pub fn fcs_is_valid(frame: &[u8]) -> bool {
    frame.len() > 2 && update(INIT, frame) == FCS_GOOD_RESIDUE
}

/// FCS octets in transmission order.
pub fn fcs_wire_bytes(fcs: u16) -> [u8; 2] {
    fcs.to_le_bytes()
}

/// Builds the FCS the way a byte-oriented MSB-first firmware does it.
///
/// The shift register is fed the frame bits in the order they leave the
/// modem, i.e. every payload byte with its bits swapped end for end. The
/// register is non-reflected (poly 0x1021) and is read out highest-order
/// coefficient first. Mapping that readout back into the byte domain of the
/// frame (each byte later sent LSB first) swaps the register's bit order and
/// exchanges its two octets. The returned pair is in transmission order.
pub fn compute_fcs_msb_first(payload: &[u8]) -> [u8; 2] {
    let mut reg = INIT;
    for &b in payload {
        let on_air = b.reverse_bits();
        reg ^= u16::from(on_air) << 8;
        for _ in 0..8 {
            reg = if reg & 0x8000 != 0 {
                (reg << 1) ^ POLY
            } else {
                reg << 1
            };
        }
    }
    let register = reg ^ XOROUT;
    // Register readout as the frame-domain 16-bit value, then octet exchange.
    let [first, second] = register.reverse_bits().to_be_bytes();
    [second, first]
}
