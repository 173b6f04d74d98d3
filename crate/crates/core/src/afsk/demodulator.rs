use std::collections::VecDeque;
use std::f64::consts::TAU;

use super::{AudioBuffer, ModemConfig, ModemError};
use crate::hdlc::{BitStream, Nrzi};

/// Largest clock correction applied per observed transition, in symbols.
const MAX_NUDGE: f64 = 1.0 / 16.0;
/// Where in the symbol clock a decision flip should land when sampling is
/// aligned: half a symbol before the sampling instant.
const TRANSITION_PHASE: f64 = 0.5;
/// Running sums are rebuilt from the window this often to shed rounding.
const RESYNC_INTERVAL: usize = 1 << 14;

/// In-phase and quadrature products of one sample against one tone.
#[derive(Debug, Clone, Copy, Default)]
struct Iq {
    i: f64,
    q: f64,
}

impl Iq {
    fn energy(self) -> f64 {
        self.i * self.i + self.q * self.q
    }
}

/// Local oscillator plus a one-symbol sliding correlation.
#[derive(Debug, Clone)]
struct ToneCorrelator {
    step: f64,
    phase: f64,
    window: VecDeque<Iq>,
    sum: Iq,
}

impl ToneCorrelator {
    fn new(freq: f64, sample_rate: f64, len: usize) -> Self {
        ToneCorrelator {
            step: TAU * freq / sample_rate,
            phase: 0.0,
            window: VecDeque::with_capacity(len + 1),
            sum: Iq::default(),
        }
    }

    fn push(&mut self, x: f64, len: usize) {
        let (s, c) = self.phase.sin_cos();
        let p = Iq { i: x * c, q: x * s };
        self.phase += self.step;
        if self.phase >= TAU {
            self.phase -= TAU;
        }
        self.sum.i += p.i;
        self.sum.q += p.q;
        self.window.push_back(p);
        if self.window.len() > len {
            let old = self.window.pop_front().unwrap();
            self.sum.i -= old.i;
            self.sum.q -= old.q;
        }
    }

    fn resync(&mut self) {
        self.sum = self.window.iter().fold(Iq::default(), |acc, p| Iq {
            i: acc.i + p.i,
            q: acc.q + p.q,
        });
    }
}

/// Streaming AFSK demodulator.
///
/// Each sample updates a mark and a space quadrature correlator over the
/// last symbol's worth of samples; the louder one gives the current level.
/// A symbol clock advances `baud / sample_rate` per sample and emits the
/// current level each time it wraps. Whenever the level flips, the clock is
/// pulled toward half a symbol before the next wrap, by at most 1/16 symbol.
#[derive(Debug, Clone)]
pub struct Demodulator {
    mark: ToneCorrelator,
    space: ToneCorrelator,
    window_len: usize,
    clock: f64,
    clock_step: f64,
    level: bool,
    seen: usize,
}

impl Demodulator {
    pub fn new(cfg: &ModemConfig) -> Result<Self, ModemError> {
        cfg.validate()?;
        let fs = f64::from(cfg.sample_rate);
        let sps = cfg.samples_per_symbol();
        let window_len = (sps.round() as usize).max(1);
        Ok(Demodulator {
            mark: ToneCorrelator::new(cfg.mark_hz, fs, window_len),
            space: ToneCorrelator::new(cfg.space_hz, fs, window_len),
            window_len,
            clock: 0.0,
            clock_step: 1.0 / sps,
            level: true,
            seen: 0,
        })
    }

    /// Feeds one sample; returns a level when a symbol boundary is reached.
    pub fn push(&mut self, sample: f32) -> Option<bool> {
        let x = f64::from(sample);
        self.mark.push(x, self.window_len);
        self.space.push(x, self.window_len);
        self.seen += 1;
        if self.seen.is_multiple_of(RESYNC_INTERVAL) {
            self.mark.resync();
            self.space.resync();
        }

        let mark_e = self.mark.sum.energy();
        let space_e = self.space.sum.energy();
        let prev = self.level;
        if mark_e > space_e {
            self.level = true;
        } else if space_e > mark_e {
            self.level = false;
        }

        self.clock += self.clock_step;
        if self.level != prev && self.seen >= self.window_len {
            let error = self.clock - TRANSITION_PHASE;
            self.clock -= error.clamp(-MAX_NUDGE, MAX_NUDGE);
        }
        if self.clock >= 1.0 {
            self.clock -= 1.0;
            Some(self.level)
        } else {
            None
        }
    }

    /// Emits the final level if more than half a symbol is pending.
    pub fn finish(&mut self) -> Option<bool> {
        if self.clock > TRANSITION_PHASE {
            self.clock = 0.0;
            Some(self.level)
        } else {
            None
        }
    }
}

/// Demodulates a whole buffer into line levels.
pub fn demodulate(audio: &AudioBuffer, cfg: &ModemConfig) -> Result<BitStream<Nrzi>, ModemError> {
    if audio.sample_rate != cfg.sample_rate {
        return Err(ModemError::SampleRateMismatch {
            audio: audio.sample_rate,
            config: cfg.sample_rate,
        });
    }
    let mut demod = Demodulator::new(cfg)?;
    let mut levels =
        Vec::with_capacity((audio.len() as f64 / cfg.samples_per_symbol()).ceil() as usize + 1);
    levels.extend(audio.samples.iter().filter_map(|&s| demod.push(s)));
    levels.extend(demod.finish());
    Ok(BitStream::from_bits(levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afsk::modulate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tone(freq: f64, len: usize, fs: u32) -> AudioBuffer {
        let samples = (0..len)
            .map(|n| (0.5 * (TAU * freq * n as f64 / f64::from(fs)).sin()) as f32)
            .collect();
        AudioBuffer::new(samples, fs)
    }

    #[test]
    fn mark_tone_one_symbol() {
        let cfg = ModemConfig::default();
        let levels = demodulate(&tone(1200.0, 40, 48_000), &cfg).unwrap();
        assert_eq!(levels.to_u8s(), [1]);
    }

    #[test]
    fn space_tone_one_symbol() {
        let cfg = ModemConfig::default();
        let levels = demodulate(&tone(2200.0, 40, 48_000), &cfg).unwrap();
        assert_eq!(levels.to_u8s(), [0]);
    }

    #[test]
    fn round_trip_every_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for rate in [8000, 11_025, 22_050, 44_100, 48_000] {
            let cfg = ModemConfig::with_sample_rate(rate);
            // Runs of at most six equal levels, as NRZI over stuffed data gives.
            let mut levels = Vec::new();
            let mut level = true;
            while levels.len() < 1200 {
                let run = rng.random_range(1..=6);
                levels.extend(std::iter::repeat_n(level, run));
                level = !level;
            }
            let l = BitStream::<Nrzi>::from_bits(levels);
            let audio = modulate(&l, &cfg).unwrap();
            assert_eq!(demodulate(&audio, &cfg).unwrap(), l, "rate {rate}");
        }
    }

    #[test]
    fn rate_mismatch() {
        let cfg = ModemConfig::default();
        assert!(matches!(
            demodulate(&AudioBuffer::silence(10, 44_100), &cfg),
            Err(ModemError::SampleRateMismatch { .. })
        ));
    }

    #[test]
    fn amplitude_invariant() {
        let cfg = ModemConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = BitStream::<Nrzi>::from_bits((0..2000).map(|_| rng.random()).collect());
        let audio = modulate(&l, &cfg).unwrap();
        let reference = demodulate(&audio, &cfg).unwrap();
        for k in 1..=10 {
            let factor = k as f32 / 10.0;
            assert_eq!(demodulate(&audio.scaled(factor), &cfg).unwrap(), reference);
        }
    }
}
