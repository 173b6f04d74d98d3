//! End-to-end encode and decode paths.

use thiserror::Error;

use crate::afsk::{demodulate, modulate, AudioBuffer, ModemConfig, ModemError};
use crate::ax25::{build_frame, parse_frame, FrameBytes, FrameError, ParsedFrame, UiFrame};
use crate::hdlc::{
    add_flags, bytes_to_bits_lsb_first, find_frames, nrzi_decode, nrzi_encode, stuff_bits,
    BitStream, FramingConfig, HdlcError, Nrzi, DEFAULT_INITIAL_LEVEL,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Hdlc(#[from] HdlcError),
    #[error(transparent)]
    Modem(#[from] ModemError),
}

/// Everything needed to put a frame on the air and take it off again.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkConfig {
    pub modem: ModemConfig,
    pub framing: FramingConfig,
    /// Line level before the first transmitted bit.
    pub initial_level: Option<bool>,
}

impl LinkConfig {
    pub fn initial_level(&self) -> bool {
        self.initial_level.unwrap_or(DEFAULT_INITIAL_LEVEL)
    }
}

/// A frame on its way to the modulator.
#[derive(Debug, Clone)]
pub struct EncodedFrame {
    pub bytes: FrameBytes,
    /// Zeros inserted by bit stuffing.
    pub stuffed_bits: usize,
    pub levels: BitStream<Nrzi>,
}

/// Frame → line levels: serialize, stuff, flag, NRZI.
pub fn encode_levels(frame: &UiFrame, link: &LinkConfig) -> Result<EncodedFrame, PipelineError> {
    link.framing.validate()?;
    let bytes = build_frame(frame)?;
    let logical = bytes_to_bits_lsb_first(&bytes.to_wire());
    let stuffed = stuff_bits(&logical);
    let stuffed_bits = stuffed.len() - logical.len();
    let framed = add_flags(&stuffed, &link.framing);
    let levels = nrzi_encode(&framed, link.initial_level());
    Ok(EncodedFrame {
        bytes,
        stuffed_bits,
        levels,
    })
}

/// Frame → audio.
pub fn encode_audio(
    frame: &UiFrame,
    link: &LinkConfig,
) -> Result<(EncodedFrame, AudioBuffer), PipelineError> {
    let enc = encode_levels(frame, link)?;
    let audio = modulate(&enc.levels, &link.modem)?;
    Ok((enc, audio))
}

/// A frame recovered from audio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedFrame {
    pub raw: Vec<u8>,
    pub parsed: ParsedFrame,
}

/// Line levels → every FCS-valid frame.
pub fn decode_levels(levels: &BitStream<Nrzi>) -> Vec<DecodedFrame> {
    find_frames(&nrzi_decode(levels, None))
        .into_iter()
        .filter_map(|raw| {
            let parsed = parse_frame(&raw).ok()?;
            Some(DecodedFrame { raw, parsed })
        })
        .collect()
}

/// Audio → every FCS-valid frame, in order of appearance.
pub fn decode_audio(
    audio: &AudioBuffer,
    modem: &ModemConfig,
) -> Result<Vec<DecodedFrame>, PipelineError> {
    Ok(decode_levels(&demodulate(audio, modem)?))
}
