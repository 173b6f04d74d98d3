//! Bell 202 AFSK: continuous-phase tone synthesis and a correlator
//! demodulator with symbol clock recovery.

mod config;
mod demodulator;
mod modulator;
mod spectrum;

use thiserror::Error;

pub use config::{AudioBuffer, ModemConfig};
pub use demodulator::{demodulate, Demodulator};
pub use modulator::modulate;
pub use spectrum::{dominant_frequency, measure_tone_frequencies, BAND_HIGH_HZ, BAND_LOW_HZ};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModemError {
    #[error("invalid modem config: {0}")]
    Config(String),
    #[error("audio is {audio} Hz but the modem is configured for {config} Hz")]
    SampleRateMismatch { audio: u32, config: u32 },
    #[error("no two distinct tones found above the noise floor")]
    InsufficientSignal,
}
