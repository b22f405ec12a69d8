use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dsp::WarpParams;
use crate::error::{Error, Result};

pub const DEFAULT_FRAME_LEN: usize = 350;
pub const DEFAULT_ENERGY_HISTORY: usize = 30;
pub const DEFAULT_RESIDUAL_HISTORY: usize = 4410;
pub const DEFAULT_ORDER: usize = 5;
pub const DEFAULT_BLOCK_LEN: usize = 2048;
pub const DEFAULT_MERGE_GAP: usize = 100;
pub const DEFAULT_ENERGY_K: f64 = 5.0;
pub const DEFAULT_PREDICTIVE_K: f64 = 6.0;

/// Deviations below this are treated as digital silence and suppress detection.
pub const SILENCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Energy,
    Lpc,
    Wlp,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Energy, Variant::Lpc, Variant::Wlp];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Energy => "energy",
            Variant::Lpc => "lpc",
            Variant::Wlp => "wlp",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "energy" | "base" => Ok(Variant::Energy),
            "lpc" => Ok(Variant::Lpc),
            "wlp" => Ok(Variant::Wlp),
            other => Err(Error::config("variant", format!("unknown variant `{other}`"))),
        }
    }
}

/// Parameters of one detector instance. Lengths are in samples except
/// `history_len` for the energy variant, which counts frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub variant: Variant,
    pub threshold_k: f64,
    pub frame_len: usize,
    pub history_len: usize,
    pub order: usize,
    pub lambda: f64,
    pub block_len: usize,
    pub merge_gap: usize,
}

impl DetectorConfig {
    /// Defaults for `variant`: 350-sample frames with 30 frames of history
    /// for energy; order 5, 2048-sample blocks and 4410 residual samples of
    /// history for the predictive variants; lambda -0.7.
    pub fn new(variant: Variant) -> Self {
        let (history_len, threshold_k) = match variant {
            Variant::Energy => (DEFAULT_ENERGY_HISTORY, DEFAULT_ENERGY_K),
            Variant::Lpc | Variant::Wlp => (DEFAULT_RESIDUAL_HISTORY, DEFAULT_PREDICTIVE_K),
        };
        Self {
            variant,
            threshold_k,
            frame_len: DEFAULT_FRAME_LEN,
            history_len,
            order: DEFAULT_ORDER,
            lambda: crate::dsp::DEFAULT_LAMBDA,
            block_len: DEFAULT_BLOCK_LEN,
            merge_gap: DEFAULT_MERGE_GAP,
        }
    }

    pub fn energy() -> Self {
        Self::new(Variant::Energy)
    }

    pub fn lpc() -> Self {
        Self::new(Variant::Lpc)
    }

    pub fn wlp() -> Self {
        Self::new(Variant::Wlp)
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.threshold_k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_k > 0.0) || !self.threshold_k.is_finite() {
            return Err(Error::config(
                "threshold_k",
                format!("threshold multiplier {} must be positive", self.threshold_k),
            ));
        }
        if self.frame_len < 2 {
            return Err(Error::config("frame_len", "frame too short (need >= 2 samples)"));
        }
        if self.history_len < 2 {
            return Err(Error::config("history_len", "history too short (need >= 2)"));
        }
        if self.order < 1 {
            return Err(Error::config("order", "prediction order must be >= 1"));
        }
        if WarpParams::new(self.lambda).is_err() {
            return Err(Error::config(
                "lambda",
                format!("lambda out of range: |{}| must be < 1", self.lambda),
            ));
        }
        if self.block_len <= 4 * self.order {
            return Err(Error::config(
                "block_len",
                format!(
                    "block too short for order: {} samples <= 4 x order {}",
                    self.block_len, self.order
                ),
            ));
        }
        if self.merge_gap < 1 {
            return Err(Error::config("merge_gap", "merge gap must be >= 1 sample"));
        }
        Ok(())
    }
}
