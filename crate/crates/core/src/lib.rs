//! Software AFSK-1200 modem for APRS: AX.25 UI frames in, Bell 202 audio
//! out, and back again.
//!
//! The transmit chain is
//! [`ax25::build_frame`] → [`hdlc::bytes_to_bits_lsb_first`] →
//! [`hdlc::stuff_bits`] → [`hdlc::add_flags`] → [`hdlc::nrzi_encode`] →
//! [`afsk::modulate`]; [`pipeline`] strings the stages together in both
//! directions.

pub mod afsk;
pub mod ax25;
pub mod channel;
pub mod hdlc;
pub mod pipeline;
pub mod wav;
