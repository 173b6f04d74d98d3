#![allow(dead_code)]

use afsk_tnc::ax25::{parse_tnc2, AddressField, UiFrame};
use rand::Rng;

pub const GOLDEN_TNC2: &str = "YG3DQQ>APTCM0,YBSAT,WIDE2-2:Pengujian APRS TCM3105";

pub fn golden_frame() -> UiFrame {
    parse_tnc2(GOLDEN_TNC2).unwrap()
}

const CALL_CHARS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

pub fn random_address(rng: &mut impl Rng) -> AddressField {
    let len = rng.random_range(1..=6);
    let call: String = (0..len)
        .map(|_| char::from(CALL_CHARS[rng.random_range(0..CALL_CHARS.len())]))
        .collect();
    AddressField::new(&call, rng.random_range(0..=15)).unwrap()
}

/// Random valid UI frame with printable-ASCII info.
pub fn random_frame(rng: &mut impl Rng) -> UiFrame {
    let digis = (0..rng.random_range(0..=8))
        .map(|_| random_address(rng).repeated(rng.random_bool(0.3)))
        .collect();
    let info_len = rng.random_range(1..=256);
    let info: Vec<u8> = (0..info_len)
        .map(|_| rng.random_range(0x20..0x7F))
        .collect();
    UiFrame::new(random_address(rng), random_address(rng), digis, info).unwrap()
}
