//! Streaming impulsive-sound detectors.
//!
//! A [`Detector`] consumes arbitrary-length chunks and reports
//! [`DetectionEvent`]s indexed in stream samples. Output never depends on how
//! the stream is chunked: frames (energy) and coefficient blocks (LPC/WLP)
//! are aligned to absolute stream positions.
//!
//! * Energy: non-overlapping frames, impulsive when the frame energy exceeds
//!   `mean + k * std` of the last `history_len` background frame energies.
//!   Consecutive impulsive frames form one event.
//! * LPC: per `block_len` block, fit an order-`order` predictor on the block
//!   and inverse-filter it (filter state carried across blocks). A sample is
//!   impulsive when `|e[n]| > k * sigma_e`, sigma_e being the MAD-based
//!   deviation of the last `history_len` background residuals, refreshed at
//!   each block start. Impulsive samples closer than `merge_gap` merge.
//! * WLP: the LPC policy over a chain of first-order all-pass sections.
//!
//! Impulsive frames/samples never enter the background statistics, and no
//! decision is made until the history is full or while its deviation is
//! below [`SILENCE_FLOOR`].

mod config;
mod energy;
mod event;
mod predictive;

pub use config::{
    DetectorConfig, Variant, DEFAULT_BLOCK_LEN, DEFAULT_ENERGY_HISTORY, DEFAULT_ENERGY_K,
    DEFAULT_FRAME_LEN, DEFAULT_MERGE_GAP, DEFAULT_ORDER, DEFAULT_PREDICTIVE_K,
    DEFAULT_RESIDUAL_HISTORY, SILENCE_FLOOR,
};
pub use event::DetectionEvent;

use energy::EnergyState;
use predictive::PredictiveState;

use crate::dsp::{LpcModel, PlainDelay, WarpParams, WarpedDelay};
use crate::error::{Error, Result};
use crate::signal::SampleBuffer;

#[derive(Debug, Clone)]
enum State {
    Energy(EnergyState),
    Lpc(PredictiveState<PlainDelay>),
    Wlp(PredictiveState<WarpedDelay>),
}

impl State {
    fn new(config: &DetectorConfig) -> Result<Self> {
        Ok(match config.variant {
            Variant::Energy => State::Energy(EnergyState::new(config)),
            Variant::Lpc => State::Lpc(PredictiveState::new(
                config,
                PlainDelay::new(config.order),
                None,
            )),
            Variant::Wlp => {
                let warp = WarpParams::new(config.lambda)?;
                State::Wlp(PredictiveState::new(
                    config,
                    WarpedDelay::new(warp.lambda(), config.order),
                    Some(warp),
                ))
            }
        })
    }
}

/// One detector running over one stream. Single-threaded; move it between
/// threads freely between calls.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    state: State,
    sample_rate_hz: Option<u32>,
    consumed: u64,
    flushed: bool,
}

impl Detector {
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        let state = State::new(&config)?;
        Ok(Self {
            config,
            state,
            sample_rate_hz: None,
            consumed: 0,
            flushed: false,
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn samples_consumed(&self) -> u64 {
        self.consumed
    }

    pub fn sample_rate_hz(&self) -> Option<u32> {
        self.sample_rate_hz
    }

    /// Number of complete frames evaluated so far (energy variant only).
    pub fn frames_processed(&self) -> Option<u64> {
        match &self.state {
            State::Energy(s) => Some(s.frames()),
            _ => None,
        }
    }

    /// Predictor currently in use (LPC/WLP variants).
    pub fn current_model(&self) -> Option<&LpcModel> {
        match &self.state {
            State::Energy(_) => None,
            State::Lpc(s) => s.model(),
            State::Wlp(s) => s.model(),
        }
    }

    pub fn in_event(&self) -> bool {
        match &self.state {
            State::Energy(s) => s.in_event(),
            State::Lpc(s) => s.in_event(),
            State::Wlp(s) => s.in_event(),
        }
    }

    /// Feeds one chunk and returns the events that were completed by it.
    pub fn push(&mut self, chunk: &SampleBuffer) -> Result<Vec<DetectionEvent>> {
        if self.flushed {
            return Err(Error::StreamContract(
                "push after flush; reset the detector first".into(),
            ));
        }
        match self.sample_rate_hz {
            Some(rate) if rate != chunk.sample_rate_hz() => {
                return Err(Error::StreamContract(format!(
                    "sample rate changed from {rate} Hz to {} Hz",
                    chunk.sample_rate_hz()
                )));
            }
            _ => self.sample_rate_hz = Some(chunk.sample_rate_hz()),
        }
        let mut out = Vec::new();
        let start = self.consumed;
        match &mut self.state {
            State::Energy(s) => s.push(chunk.samples(), start, &mut out),
            State::Lpc(s) => s.push(chunk.samples(), start, &mut out),
            State::Wlp(s) => s.push(chunk.samples(), start, &mut out),
        }
        self.consumed += chunk.len() as u64;
        Ok(out)
    }

    /// Ends the stream: evaluates any buffered partial block and closes an
    /// in-progress event at the last consumed sample. Further pushes require
    /// [`Detector::reset`]; repeated flushes return nothing.
    pub fn flush(&mut self) -> Vec<DetectionEvent> {
        let mut out = Vec::new();
        if self.flushed {
            return out;
        }
        self.flushed = true;
        let last = self.consumed.checked_sub(1);
        match &mut self.state {
            State::Energy(s) => s.flush(last, &mut out),
            State::Lpc(s) => s.flush(last, &mut out),
            State::Wlp(s) => s.flush(last, &mut out),
        }
        out
    }

    /// Returns the detector to its freshly-created state, keeping the config.
    pub fn reset(&mut self) {
        // Config was validated on construction, so rebuilding cannot fail.
        self.state = State::new(&self.config).expect("validated config");
        self.sample_rate_hz = None;
        self.consumed = 0;
        self.flushed = false;
    }
}

/// Runs a fresh detector over `signal` in `chunk_len`-sample pushes and
/// flushes it.
pub fn detect_chunked(
    config: &DetectorConfig,
    signal: &SampleBuffer,
    chunk_len: usize,
) -> Result<Vec<DetectionEvent>> {
    let mut detector = Detector::new(config.clone())?;
    let mut events = Vec::new();
    for chunk in signal.chunks(chunk_len) {
        events.extend(detector.push(&chunk)?);
    }
    events.extend(detector.flush());
    Ok(events)
}

/// Whole-signal convenience wrapper around [`detect_chunked`].
pub fn detect(config: &DetectorConfig, signal: &SampleBuffer) -> Result<Vec<DetectionEvent>> {
    detect_chunked(config, signal, signal.len().max(1))
}
