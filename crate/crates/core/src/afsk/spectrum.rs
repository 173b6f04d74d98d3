use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{AudioBuffer, ModemError};

pub const BAND_LOW_HZ: f64 = 800.0;
pub const BAND_HIGH_HZ: f64 = 2800.0;
/// Peaks closer than this are treated as the same tone.
const MIN_PEAK_SEPARATION_HZ: f64 = 300.0;
/// The weaker tone must be within 20 dB of the stronger one.
const SECOND_PEAK_RATIO: f64 = 0.1;
/// Both tones must stand this far above the median in-band magnitude.
const NOISE_FLOOR_RATIO: f64 = 10.0;

struct Spectrum {
    mags: Vec<f64>,
    bin_hz: f64,
}

impl Spectrum {
    /// Hann-windowed magnitude spectrum up to Nyquist.
    fn of(audio: &AudioBuffer) -> Spectrum {
        let n = audio.len();
        let mut buf: Vec<Complex<f64>> = audio
            .samples
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let w = 0.5 - 0.5 * (TAU * i as f64 / n as f64).cos();
                Complex::new(f64::from(s) * w, 0.0)
            })
            .collect();
        if n > 0 {
            FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        }
        let keep = if n == 0 { 0 } else { n / 2 + 1 };
        Spectrum {
            mags: buf[..keep].iter().map(|c| c.norm()).collect(),
            bin_hz: f64::from(audio.sample_rate) / n.max(1) as f64,
        }
    }

    fn bin_range(&self, lo_hz: f64, hi_hz: f64) -> std::ops::Range<usize> {
        let lo = (lo_hz / self.bin_hz).ceil() as usize;
        let hi = ((hi_hz / self.bin_hz).floor() as usize + 1).min(self.mags.len());
        lo.min(hi)..hi
    }

    fn argmax(&self, range: impl Iterator<Item = usize>) -> Option<usize> {
        range.max_by(|&a, &b| self.mags[a].total_cmp(&self.mags[b]))
    }

    /// Peak location refined by a parabola through the neighbouring bins.
    fn refine(&self, k: usize) -> f64 {
        if k == 0 || k + 1 >= self.mags.len() {
            return k as f64 * self.bin_hz;
        }
        let (a, b, c) = (self.mags[k - 1], self.mags[k], self.mags[k + 1]);
        let denom = a - 2.0 * b + c;
        let offset = if denom.abs() > f64::EPSILON {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        (k as f64 + offset) * self.bin_hz
    }
}

/// Frequency of the strongest FFT bin between `lo_hz` and `hi_hz`, and the
/// bin width. No interpolation, so the answer is always a bin centre.
pub fn dominant_frequency(audio: &AudioBuffer, lo_hz: f64, hi_hz: f64) -> Option<(f64, f64)> {
    let spec = Spectrum::of(audio);
    let k = spec.argmax(spec.bin_range(lo_hz, hi_hz))?;
    Some((k as f64 * spec.bin_hz, spec.bin_hz))
}

/// Estimates the two AFSK tones as the two dominant spectral peaks between
/// 800 and 2800 Hz, lower frequency first.
pub fn measure_tone_frequencies(audio: &AudioBuffer) -> Result<(f64, f64), ModemError> {
    let spec = Spectrum::of(audio);
    let band = spec.bin_range(BAND_LOW_HZ, BAND_HIGH_HZ);
    if band.len() < 3 {
        return Err(ModemError::InsufficientSignal);
    }
    let mut sorted: Vec<f64> = spec.mags[band.clone()].to_vec();
    sorted.sort_by(f64::total_cmp);
    let floor = sorted[sorted.len() / 2];

    let first = spec
        .argmax(band.clone())
        .ok_or(ModemError::InsufficientSignal)?;
    let top = spec.mags[first];
    if top <= f64::EPSILON || top < NOISE_FLOOR_RATIO * floor {
        return Err(ModemError::InsufficientSignal);
    }
    let first_hz = spec.refine(first);
    let is_local_max = |k: usize| {
        (k == 0 || spec.mags[k] >= spec.mags[k - 1])
            && (k + 1 >= spec.mags.len() || spec.mags[k] >= spec.mags[k + 1])
    };
    let second = spec
        .argmax(band.filter(|&k| {
            (k as f64 * spec.bin_hz - first_hz).abs() >= MIN_PEAK_SEPARATION_HZ && is_local_max(k)
        }))
        .ok_or(ModemError::InsufficientSignal)?;
    let mag2 = spec.mags[second];
    if mag2 < SECOND_PEAK_RATIO * top || mag2 < NOISE_FLOOR_RATIO * floor {
        return Err(ModemError::InsufficientSignal);
    }
    let second_hz = spec.refine(second);
    Ok((first_hz.min(second_hz), first_hz.max(second_hz)))
}
