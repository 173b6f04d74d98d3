use super::ModemError;

/// Tone plan and timing for the modem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModemConfig {
    /// Symbols per second.
    pub baud: f64,
    /// Tone for a 1 level.
    pub mark_hz: f64,
    /// Tone for a 0 level.
    pub space_hz: f64,
    pub sample_rate: u32,
    /// Peak sample value, in (0, 1].
    pub amplitude: f64,
}

impl Default for ModemConfig {
    fn default() -> Self {
        ModemConfig {
            baud: 1200.0,
            mark_hz: 1200.0,
            space_hz: 2200.0,
            sample_rate: 48_000,
            amplitude: 0.8,
        }
    }
}

impl ModemConfig {
    pub fn with_sample_rate(sample_rate: u32) -> Self {
        ModemConfig {
            sample_rate,
            ..Default::default()
        }
    }

    pub fn samples_per_symbol(&self) -> f64 {
        f64::from(self.sample_rate) / self.baud
    }

    pub fn validate(&self) -> Result<(), ModemError> {
        let err = |m: String| Err(ModemError::Config(m));
        if !(self.baud.is_finite() && self.baud > 0.0) {
            return err(format!("baud must be positive, got {}", self.baud));
        }
        for (name, f) in [("mark", self.mark_hz), ("space", self.space_hz)] {
            if !(f.is_finite() && f > 0.0) {
                return err(format!("{name} frequency must be positive, got {f}"));
            }
        }
        if self.mark_hz == self.space_hz {
            return err("mark and space frequencies must differ".into());
        }
        let top = self.mark_hz.max(self.space_hz);
        if f64::from(self.sample_rate) <= 2.0 * top {
            return err(format!(
                "sample rate {} Hz is at or below twice the highest tone ({top} Hz)",
                self.sample_rate
            ));
        }
        if self.samples_per_symbol() < 2.0 {
            return err("fewer than two samples per symbol".into());
        }
        if !(self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return err(format!(
                "amplitude must be in (0, 1], got {}",
                self.amplitude
            ));
        }
        Ok(())
    }
}

/// Mono samples in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f32>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Self {
        AudioBuffer {
            samples,
            sample_rate,
        }
    }

    pub fn silence(len: usize, sample_rate: u32) -> Self {
        AudioBuffer::new(vec![0.0; len], sample_rate)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }

    /// Appends `other`, which must share this buffer's sample rate.
    pub fn append(&mut self, other: &AudioBuffer) {
        assert_eq!(self.sample_rate, other.sample_rate, "sample rate mismatch");
        self.samples.extend_from_slice(&other.samples);
    }

    pub fn scaled(&self, factor: f32) -> AudioBuffer {
        AudioBuffer::new(
            self.samples.iter().map(|s| s * factor).collect(),
            self.sample_rate,
        )
    }
}
