use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::det::STREAM_CHUNK;
use crate::detectors::{DetectionEvent, Detector, DetectorConfig, Variant};
use crate::error::{Error, Result};
use crate::signal::SampleBuffer;

pub const MIN_REPETITIONS: usize = 3;

/// Timing of one detector over one clip. Serialized as one line record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub variant: Variant,
    pub clip_duration_s: f64,
    /// Median wall time of a full push + flush pass.
    pub wall_time_s: f64,
    pub real_time_factor: f64,
    pub samples_per_second: f64,
}

fn run_once(config: &DetectorConfig, clip: &SampleBuffer) -> Result<Vec<DetectionEvent>> {
    let mut detector = Detector::new(config.clone())?;
    let mut events = Vec::new();
    for chunk in clip.chunks(STREAM_CHUNK) {
        events.extend(detector.push(&chunk)?);
    }
    events.extend(detector.flush());
    Ok(events)
}

/// Times `repetitions` full passes of a fresh detector over `clip` and
/// reports the median. Every pass must produce the same events.
pub fn benchmark(config: &DetectorConfig, clip: &SampleBuffer, repetitions: usize) -> Result<BenchReport> {
    if repetitions < MIN_REPETITIONS {
        return Err(Error::invalid(format!(
            "benchmark needs at least {MIN_REPETITIONS} repetitions, got {repetitions}"
        )));
    }
    if clip.is_empty() {
        return Err(Error::invalid("cannot benchmark a zero-length clip"));
    }
    config.validate()?;

    let mut times = Vec::with_capacity(repetitions);
    let mut reference: Option<Vec<DetectionEvent>> = None;
    for _ in 0..repetitions {
        let start = Instant::now();
        let events = run_once(config, clip)?;
        times.push(start.elapsed().as_secs_f64());
        match &reference {
            None => reference = Some(events),
            Some(r) if *r != events => {
                return Err(Error::Contract("benchmark passes produced different events".into()))
            }
            Some(_) => {}
        }
    }
    times.sort_by(f64::total_cmp);
    let wall = times[times.len() / 2].max(f64::MIN_POSITIVE);
    let duration = clip.duration_s();
    Ok(BenchReport {
        variant: config.variant,
        clip_duration_s: duration,
        wall_time_s: wall,
        real_time_factor: wall / duration,
        samples_per_second: clip.len() as f64 / wall,
    })
}
