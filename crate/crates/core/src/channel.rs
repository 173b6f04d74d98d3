//! Deterministic audio impairments: gain, DC offset, white Gaussian noise
//! and sample-clock skew.
//!
//! Noise comes from ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`,
//! turned into normal deviates with the Box–Muller transform: two uniforms
//! `u1 = 1 - U`, `u2 = U` give `sqrt(-2 ln u1) * cos(2π u2)` and
//! `sqrt(-2 ln u1) * sin(2π u2)`, used in that order. A fixture of the first
//! deviates for seed 42 lives in `tests/fixtures/noise_seed42.txt`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::afsk::AudioBuffer;
use crate::ax25::UiFrame;
use crate::pipeline::{decode_audio, encode_audio, LinkConfig, PipelineError};

/// Blocks whose mean square is below this (-80 dBFS) count as silence when
/// measuring signal power.
const SILENCE_POWER: f64 = 1e-8;
const SILENCE_BLOCK: usize = 64;
/// Silence placed around each transmission by [`frame_success_rate`].
const GUARD_SECS: f64 = 0.02;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("gain must be positive and finite, got {0}")]
    Gain(f64),
    #[error("rate skew of {0} ppm is out of range")]
    Skew(f64),
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    /// Additive white Gaussian noise at this SNR; `None` adds no noise.
    pub snr_db: Option<f64>,
    pub gain: f64,
    pub dc_offset: f64,
    /// Receiver sees the signal this many ppm fast (positive) or slow.
    pub rate_skew_ppm: f64,
    pub seed: u64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            snr_db: None,
            gain: 1.0,
            dc_offset: 0.0,
            rate_skew_ppm: 0.0,
            seed: 0,
        }
    }
}

impl ChannelSpec {
    pub fn with_snr(snr_db: f64, seed: u64) -> Self {
        ChannelSpec {
            snr_db: Some(snr_db),
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(ChannelError::Gain(self.gain));
        }
        if !(self.rate_skew_ppm.is_finite() && self.rate_skew_ppm.abs() < 500_000.0) {
            return Err(ChannelError::Skew(self.rate_skew_ppm));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelReport {
    /// Samples forced back into [-1, 1].
    pub clipped: usize,
    /// RMS of the non-silent part of the signal the noise was scaled to.
    pub signal_rms: f64,
    pub noise_sigma: f64,
}

/// Standard normal deviates, Box–Muller over ChaCha8 uniforms.
#[derive(Debug, Clone)]
pub struct GaussianNoise {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianNoise {
    pub fn new(seed: u64) -> Self {
        GaussianNoise {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_deviate(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// RMS over 64-sample blocks that are not silent.
pub fn active_rms(samples: &[f32]) -> f64 {
    let (mut sum, mut count) = (0.0f64, 0usize);
    for block in samples.chunks(SILENCE_BLOCK) {
        let energy: f64 = block.iter().map(|&s| f64::from(s).powi(2)).sum();
        if energy / block.len() as f64 > SILENCE_POWER {
            sum += energy;
            count += block.len();
        }
    }
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}

fn resample_linear(samples: &[f32], ratio: f64) -> Vec<f32> {
    if samples.is_empty() {
        return Vec::new();
    }
    let last = samples.len() - 1;
    let out_len = (last as f64 / ratio).floor() as usize + 1;
    (0..out_len)
        .map(|j| {
            let t = j as f64 * ratio;
            let i = (t.floor() as usize).min(last);
            let frac = t - i as f64;
            let a = f64::from(samples[i]);
            let b = f64::from(samples[(i + 1).min(last)]);
            (a + (b - a) * frac) as f32
        })
        .collect()
}

/// Runs `audio` through the channel: skew, gain, noise, offset, then clip.
/// Noise is scaled against the RMS of the non-silent part of the signal
/// after gain.
pub fn apply_channel(
    audio: &AudioBuffer,
    spec: &ChannelSpec,
) -> Result<(AudioBuffer, ChannelReport), ChannelError> {
    spec.validate()?;
    let mut samples = if spec.rate_skew_ppm != 0.0 {
        resample_linear(&audio.samples, 1.0 + spec.rate_skew_ppm * 1e-6)
    } else {
        audio.samples.clone()
    };
    if spec.gain != 1.0 {
        for s in &mut samples {
            *s = (f64::from(*s) * spec.gain) as f32;
        }
    }

    let mut report = ChannelReport::default();
    if let Some(snr_db) = spec.snr_db {
        report.signal_rms = active_rms(&samples);
        report.noise_sigma = report.signal_rms / 10f64.powf(snr_db / 20.0);
        let mut noise = GaussianNoise::new(spec.seed);
        for s in &mut samples {
            *s = (f64::from(*s) + report.noise_sigma * noise.next_deviate()) as f32;
        }
    }
    if spec.dc_offset != 0.0 {
        for s in &mut samples {
            *s = (f64::from(*s) + spec.dc_offset) as f32;
        }
    }
    for s in &mut samples {
        if *s > 1.0 || *s < -1.0 || s.is_nan() {
            *s = if s.is_nan() { 0.0 } else { s.clamp(-1.0, 1.0) };
            report.clipped += 1;
        }
    }
    Ok((AudioBuffer::new(samples, audio.sample_rate), report))
}

/// Seed for one trial, derived from the run seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer over seed + golden-ratio stride
    let mut z = seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fraction of `trials` transmissions of `frame` that come back intact
/// through the channel. Trial `t` uses `trial_seed(spec.seed, t)`.
pub fn frame_success_rate(
    frame: &UiFrame,
    link: &LinkConfig,
    spec: &ChannelSpec,
    trials: usize,
) -> Result<f64, SimulationError> {
    if trials == 0 {
        return Err(ChannelError::NoTrials.into());
    }
    spec.validate()?;
    let (encoded, burst) = encode_audio(frame, link)?;
    let guard = (GUARD_SECS * f64::from(link.modem.sample_rate)) as usize;
    let mut audio = AudioBuffer::silence(guard, burst.sample_rate);
    audio.append(&burst);
    audio.append(&AudioBuffer::silence(guard, burst.sample_rate));
    let wire = encoded.bytes.to_wire();

    let successes: usize = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let trial_spec = ChannelSpec {
                seed: trial_seed(spec.seed, t),
                ..*spec
            };
            let Ok((impaired, _)) = apply_channel(&audio, &trial_spec) else {
                return 0;
            };
            let decoded = decode_audio(&impaired, &link.modem).unwrap_or_default();
            usize::from(decoded.iter().any(|d| d.raw == wire))
        })
        .sum();
    Ok(successes as f64 / trials as f64)
}

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}
