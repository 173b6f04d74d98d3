use std::f64::consts::TAU;

use super::{AudioBuffer, ModemConfig, ModemError};
use crate::hdlc::{BitStream, Nrzi};

/// Synthesizes AFSK audio: mark tone for a 1 level, space tone for a 0.
///
/// One phase accumulator runs across symbol boundaries so the waveform
/// never jumps. Symbol `k` ends at sample `round((k + 1) * fs / baud)`, so
/// fractional samples per symbol do not drift.
pub fn modulate(levels: &BitStream<Nrzi>, cfg: &ModemConfig) -> Result<AudioBuffer, ModemError> {
    cfg.validate()?;
    let sps = cfg.samples_per_symbol();
    let fs = f64::from(cfg.sample_rate);
    let mark_step = TAU * cfg.mark_hz / fs;
    let space_step = TAU * cfg.space_hz / fs;
    let total = (levels.len() as f64 * sps).round() as usize;
    let mut samples = Vec::with_capacity(total);
    let mut phase = 0.0f64;
    for (k, &level) in levels.bits().iter().enumerate() {
        let end = ((k + 1) as f64 * sps).round() as usize;
        let step = if level { mark_step } else { space_step };
        while samples.len() < end {
            samples.push((cfg.amplitude * phase.sin()) as f32);
            phase += step;
            if phase >= TAU {
                phase -= TAU;
            }
        }
    }
    Ok(AudioBuffer::new(samples, cfg.sample_rate))
}
