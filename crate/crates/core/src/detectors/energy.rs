use std::collections::VecDeque;

use super::event::{DetectionEvent, EventBuilder};
use super::{DetectorConfig, Variant, SILENCE_FLOOR};

/// Frame-energy detector with an adaptive `mean + k * std` threshold over the
/// most recent background frames.
#[derive(Debug, Clone)]
pub(crate) struct EnergyState {
    frame_len: usize,
    history_len: usize,
    k: f64,
    partial_energy: f64,
    partial_len: usize,
    background: VecDeque<f64>,
    frames: u64,
    open: Option<EventBuilder>,
}

impl EnergyState {
    pub(crate) fn new(config: &DetectorConfig) -> Self {
        Self {
            frame_len: config.frame_len,
            history_len: config.history_len,
            k: config.threshold_k,
            partial_energy: 0.0,
            partial_len: 0,
            background: VecDeque::with_capacity(config.history_len),
            frames: 0,
            open: None,
        }
    }

    pub(crate) fn frames(&self) -> u64 {
        self.frames
    }

    pub(crate) fn push(&mut self, samples: &[f64], start: u64, out: &mut Vec<DetectionEvent>) {
        for (i, &x) in samples.iter().enumerate() {
            self.partial_energy += x * x;
            self.partial_len += 1;
            if self.partial_len == self.frame_len {
                let frame_end = start + i as u64;
                let energy = self.partial_energy;
                self.partial_energy = 0.0;
                self.partial_len = 0;
                self.finish_frame(energy, frame_end, out);
            }
        }
    }

    fn threshold(&self) -> Option<f64> {
        if self.background.len() < self.history_len {
            return None;
        }
        let n = self.background.len() as f64;
        let mean = self.background.iter().sum::<f64>() / n;
        // Sample (n - 1) standard deviation.
        let var = self.background.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let std = var.sqrt();
        (std >= SILENCE_FLOOR).then_some(mean + self.k * std)
    }

    fn finish_frame(&mut self, energy: f64, frame_end: u64, out: &mut Vec<DetectionEvent>) {
        self.frames += 1;
        let frame_start = frame_end + 1 - self.frame_len as u64;
        match self.threshold() {
            Some(t) if energy > t => match &mut self.open {
                Some(ev) => ev.extend(frame_end, energy / t),
                None => self.open = Some(EventBuilder::new(frame_start, frame_end, energy / t)),
            },
            _ => {
                if self.background.len() == self.history_len {
                    self.background.pop_front();
                }
                self.background.push_back(energy);
                if let Some(ev) = self.open.take() {
                    out.push(ev.finish(Variant::Energy));
                }
            }
        }
    }

    pub(crate) fn flush(&mut self, last_sample: Option<u64>, out: &mut Vec<DetectionEvent>) {
        if let Some(mut ev) = self.open.take() {
            if let Some(last) = last_sample {
                ev.close_at(last);
            }
            out.push(ev.finish(Variant::Energy));
        }
    }

    pub(crate) fn in_event(&self) -> bool {
        self.open.is_some()
    }
}
