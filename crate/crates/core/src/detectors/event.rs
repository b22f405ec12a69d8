use serde::{Deserialize, Serialize};

use super::Variant;

/// A detected impulsive segment, indexed in stream samples. `offset_sample`
/// is inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub onset_sample: u64,
    pub offset_sample: u64,
    /// Largest ratio of the detection statistic to its threshold within the event.
    pub peak_score: f64,
    pub variant: Variant,
}

impl DetectionEvent {
    pub fn onset_seconds(&self, sample_rate_hz: u32) -> f64 {
        self.onset_sample as f64 / f64::from(sample_rate_hz)
    }

    pub fn overlaps(&self, lo: u64, hi: u64) -> bool {
        self.onset_sample <= hi && self.offset_sample >= lo
    }
}

#[derive(Debug, Clone)]
pub(crate) struct EventBuilder {
    onset: u64,
    offset: u64,
    peak: f64,
}

impl EventBuilder {
    pub(crate) fn new(onset: u64, offset: u64, score: f64) -> Self {
        Self {
            onset,
            offset,
            peak: score,
        }
    }

    pub(crate) fn extend(&mut self, offset: u64, score: f64) {
        self.offset = offset;
        self.peak = self.peak.max(score);
    }

    pub(crate) fn last(&self) -> u64 {
        self.offset
    }

    pub(crate) fn close_at(&mut self, offset: u64) {
        self.offset = self.offset.max(offset);
    }

    pub(crate) fn finish(self, variant: Variant) -> DetectionEvent {
        DetectionEvent {
            onset_sample: self.onset,
            offset_sample: self.offset,
            peak_score: self.peak,
            variant,
        }
    }
}
