//! TNC2 monitor text (`SRC>DEST,PATH*:info`) and hex dumps.

use std::fmt::Write as _;

use super::address::AddressField;
use super::frame::{FrameBytes, UiFrame};
use super::FrameError;

/// Tocall used when the destination is left empty (`SRC>:info`).
pub const DEFAULT_DESTINATION: &str = "APTCM0";

/// Parses monitor text into a UI frame. The info part must be ASCII.
pub fn parse_tnc2(text: &str) -> Result<UiFrame, FrameError> {
    let (header, info) = text
        .split_once(':')
        .ok_or_else(|| FrameError::Tnc2("missing ':' before the info field".into()))?;
    if !info.is_ascii() {
        return Err(FrameError::Tnc2(
            "info field must be ASCII (use --info-hex)".into(),
        ));
    }
    parse_tnc2_header(header, info.as_bytes())
}

/// Parses `SRC>DEST,PATH` and attaches `info` as raw bytes.
pub fn parse_tnc2_header(header: &str, info: &[u8]) -> Result<UiFrame, FrameError> {
    let (src, rest) = header
        .split_once('>')
        .ok_or_else(|| FrameError::Tnc2("missing '>' between source and destination".into()))?;
    let source: AddressField = src.trim().parse()?;
    let mut parts = rest.split(',');
    let dest = parts.next().unwrap_or("").trim();
    let destination: AddressField = if dest.is_empty() {
        DEFAULT_DESTINATION.parse()?
    } else {
        dest.parse()?
    };
    let digipeaters = parts
        .map(|p| {
            let p = p.trim();
            match p.strip_suffix('*') {
                Some(call) => call.parse::<AddressField>().map(|a| a.repeated(true)),
                None => p.parse(),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    UiFrame::new(destination, source, digipeaters, info.to_vec())
}

/// Formats a frame as monitor text. Bytes outside printable ASCII print as
/// `<0xHH>`.
pub fn format_tnc2(frame: &UiFrame) -> String {
    let mut out = format!("{}>{}", frame.source, frame.destination);
    for d in &frame.digipeaters {
        out.push(',');
        out.push_str(&d.to_string());
        if d.has_been_repeated {
            out.push('*');
        }
    }
    out.push(':');
    out.push_str(&escape_info(&frame.info));
    out
}

pub fn escape_info(info: &[u8]) -> String {
    let mut out = String::with_capacity(info.len());
    for &b in info {
        if (0x20..0x7F).contains(&b) {
            out.push(char::from(b));
        } else {
            write!(out, "<0x{b:02X}>").unwrap();
        }
    }
    out
}

/// Upper-case, space-separated hex.
pub fn hex_bytes(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 3);
    for (i, b) in bytes.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{b:02X}").unwrap();
    }
    out
}

/// Payload then FCS, FCS in transmission order.
pub fn hex_dump(frame: &FrameBytes) -> String {
    hex_bytes(&frame.to_wire())
}
