use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_RATE_HZ: u32 = 44_100;

/// Mono PCM samples at a known rate. Amplitudes are nominally in `[-1, 1]`
/// and always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBuffer {
    samples: Vec<f64>,
    sample_rate_hz: u32,
}

impl SampleBuffer {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::invalid("sample rate must be positive"));
        }
        if let Some(pos) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite sample {} at index {pos}",
                samples[pos]
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn zeros(len: usize, sample_rate_hz: u32) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate_hz)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate_hz)
    }

    /// Splits into consecutive buffers of at most `chunk_len` samples.
    pub fn chunks(&self, chunk_len: usize) -> impl Iterator<Item = SampleBuffer> + '_ {
        let rate = self.sample_rate_hz;
        self.samples
            .chunks(chunk_len.max(1))
            .map(move |c| SampleBuffer {
                samples: c.to_vec(),
                sample_rate_hz: rate,
            })
    }
}
