//! Streaming impulsive-sound detection: an adaptive-threshold energy
//! baseline, an LPC prediction-residual detector and its warped (all-pass)
//! counterpart, plus corpus generation and DET-style evaluation.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod detectors;
pub mod dsp;
pub mod error;
pub mod evaluation;
pub mod signal;

pub use detectors::{detect, detect_chunked, DetectionEvent, Detector, DetectorConfig, Variant};
pub use error::{Error, Result};
pub use signal::{SampleBuffer, DEFAULT_SAMPLE_RATE_HZ};
