use serde::{Deserialize, Serialize};

use crate::corpus::MixtureRecord;
use crate::detectors::DetectionEvent;
use crate::error::{Error, Result};

/// Default match slack around the ground-truth span: 50 ms at 44.1 kHz.
pub const DEFAULT_TOLERANCE_SAMPLES: u64 = 2205;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipScore {
    pub true_positives: usize,
    pub miss_detections: usize,
    pub false_positives: usize,
}

/// Scores one clip's detections against its single embedded event.
///
/// The event counts as detected when any detection overlaps the span widened
/// by `tolerance_samples` on both sides; every detection outside that span is
/// one false positive. Extra detections inside the span count nothing.
pub fn score_clip(
    detections: &[DetectionEvent],
    truth: &MixtureRecord,
    tolerance_samples: u64,
) -> Result<ClipScore> {
    if let Some(w) = detections
        .windows(2)
        .find(|w| w[1].onset_sample < w[0].onset_sample)
    {
        return Err(Error::Contract(format!(
            "detections not sorted by onset ({} before {})",
            w[0].onset_sample, w[1].onset_sample
        )));
    }
    let (onset, last) = truth.event_span();
    let lo = onset.saturating_sub(tolerance_samples);
    let hi = last.saturating_add(tolerance_samples);
    let hits = detections.iter().filter(|d| d.overlaps(lo, hi)).count();
    let detected = hits > 0;
    Ok(ClipScore {
        true_positives: usize::from(detected),
        miss_detections: usize::from(!detected),
        false_positives: detections.len() - hits,
    })
}

/// Aggregate of per-clip scores, kept in clip order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub true_positives: usize,
    pub miss_detections: usize,
    pub false_positives: usize,
    pub per_clip: Vec<ClipScore>,
}

impl MatchResult {
    pub fn push(&mut self, score: ClipScore) {
        self.true_positives += score.true_positives;
        self.miss_detections += score.miss_detections;
        self.false_positives += score.false_positives;
        self.per_clip.push(score);
    }

    pub fn clips(&self) -> usize {
        self.per_clip.len()
    }

    /// Ground-truth events seen, i.e. `TP + MD`.
    pub fn truth_events(&self) -> usize {
        self.true_positives + self.miss_detections
    }

    pub fn md_rate(&self) -> f64 {
        if self.truth_events() == 0 {
            0.0
        } else {
            self.miss_detections as f64 / self.truth_events() as f64
        }
    }

    pub fn fp_per_clip(&self) -> f64 {
        if self.clips() == 0 {
            0.0
        } else {
            self.false_positives as f64 / self.clips() as f64
        }
    }
}

impl FromIterator<ClipScore> for MatchResult {
    fn from_iter<I: IntoIterator<Item = ClipScore>>(iter: I) -> Self {
        let mut m = MatchResult::default();
        for s in iter {
            m.push(s);
        }
        m
    }
}
