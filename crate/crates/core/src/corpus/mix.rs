use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SampleBuffer;

/// One mixture and its ground truth. Serialized field names and order are
/// the manifest line format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureRecord {
    pub index: usize,
    pub background_path: String,
    pub event_path: String,
    pub onset_sample: u64,
    pub event_len_samples: u64,
    pub ebr_db: f64,
    pub applied_gain: f64,
    pub clip_len_samples: u64,
    pub sample_rate_hz: u32,
    /// Uniform scale applied to the whole clip to keep it within full scale
    /// (1.0 when no scaling was needed).
    pub normalization: f64,
}

impl MixtureRecord {
    /// Inclusive sample span of the embedded event.
    pub fn event_span(&self) -> (u64, u64) {
        (self.onset_sample, self.onset_sample + self.event_len_samples - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.event_len_samples == 0 {
            return Err(Error::invalid("event length must be positive"));
        }
        if self.onset_sample + self.event_len_samples > self.clip_len_samples {
            return Err(Error::invalid(format!(
                "event span {}+{} exceeds clip length {}",
                self.onset_sample, self.event_len_samples, self.clip_len_samples
            )));
        }
        if !(self.applied_gain > 0.0 && self.applied_gain.is_finite()) {
            return Err(Error::invalid(format!("gain {} must be positive", self.applied_gain)));
        }
        if !(self.normalization > 0.0 && self.normalization <= 1.0) {
            return Err(Error::invalid(format!(
                "normalization {} must lie in (0, 1]",
                self.normalization
            )));
        }
        if self.sample_rate_hz == 0 {
            return Err(Error::invalid("sample rate must be positive"));
        }
        Ok(())
    }
}

/// Root mean square of `x`.
pub fn segment_rms(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::invalid("RMS of an empty segment"));
    }
    Ok((x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt())
}

/// Event-to-background ratio in dB of `event` (already scaled) over the
/// background segment it sits on.
pub fn measure_ebr_db(event: &[f64], background_segment: &[f64]) -> Result<f64> {
    Ok(20.0 * (segment_rms(event)? / segment_rms(background_segment)?).log10())
}

/// Adds `event` into `background` at `onset_sample`, scaled so that its RMS
/// sits `ebr_db` decibels above the RMS of the background segment it covers.
///
/// If the sum leaves full scale the whole clip is divided by its peak; the
/// factor is recorded as `normalization` and leaves the ratio unchanged. The
/// returned record has empty paths and index 0 for the caller to fill in.
pub fn mix_at_ebr(
    background: &SampleBuffer,
    event: &SampleBuffer,
    ebr_db: f64,
    onset_sample: usize,
) -> Result<(SampleBuffer, MixtureRecord)> {
    if background.sample_rate_hz() != event.sample_rate_hz() {
        return Err(Error::invalid(format!(
            "sample rates differ: background {} Hz, event {} Hz",
            background.sample_rate_hz(),
            event.sample_rate_hz()
        )));
    }
    if !ebr_db.is_finite() {
        return Err(Error::invalid("EBR must be finite"));
    }
    if event.is_empty() {
        return Err(Error::invalid("empty event"));
    }
    let end = onset_sample
        .checked_add(event.len())
        .filter(|&e| e <= background.len())
        .ok_or_else(|| {
            Error::invalid(format!(
                "event of {} samples at {onset_sample} overflows background of {}",
                event.len(),
                background.len()
            ))
        })?;

    let segment = &background.samples()[onset_sample..end];
    let bg_rms = segment_rms(segment)?;
    let ev_rms = segment_rms(event.samples())?;
    if bg_rms == 0.0 {
        return Err(Error::DegenerateMix("background segment under the event is silent".into()));
    }
    if ev_rms == 0.0 {
        return Err(Error::DegenerateMix("event is silent".into()));
    }
    let gain = 10f64.powf(ebr_db / 20.0) * bg_rms / ev_rms;
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::DegenerateMix(format!("gain {gain} is not usable")));
    }

    let mut mixed = background.samples().to_vec();
    for (m, e) in mixed[onset_sample..end].iter_mut().zip(event.samples()) {
        *m += gain * e;
    }
    let peak = mixed.iter().fold(0.0f64, |p, v| p.max(v.abs()));
    let normalization = if peak > 1.0 { 1.0 / peak } else { 1.0 };
    if normalization != 1.0 {
        for m in &mut mixed {
            *m *= normalization;
        }
    }

    let record = MixtureRecord {
        index: 0,
        background_path: String::new(),
        event_path: String::new(),
        onset_sample: onset_sample as u64,
        event_len_samples: event.len() as u64,
        ebr_db,
        applied_gain: gain,
        clip_len_samples: background.len() as u64,
        sample_rate_hz: background.sample_rate_hz(),
        normalization,
    };
    Ok((SampleBuffer::new(mixed, background.sample_rate_hz())?, record))
}
