use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use impulse_core::corpus::{CorpusSpec, EventKind};
use impulse_core::{DetectorConfig, Variant};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "impulse", version, about = "Streaming impulsive-sound detection toolkit")]
pub struct Cli {
    /// TOML file with defaults for any flag; flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// More diagnostics on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Only report errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic corpus of mixtures with a ground-truth manifest.
    GenCorpus(GenCorpusArgs),
    /// Run a detector over a WAV file and emit one JSON line per event.
    Detect(DetectArgs),
    /// Sweep the threshold multiplier over a corpus and emit DET points as CSV.
    EvalDet(EvalDetArgs),
    /// Time detectors on a clip and emit one JSON line per variant.
    Bench(BenchArgs),
}

/// Replaces every `None` field of `$dst` with the matching field of `$src`.
macro_rules! fill {
    ($dst:ident, $src:ident; $($field:ident),+) => {
        $( if $dst.$field.is_none() { $dst.$field = $src.$field; } )+
    };
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GenCorpusArgs {
    /// Number of clips.
    #[arg(long)]
    pub count: Option<usize>,
    /// Clip length in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub clip_len: Option<f64>,
    /// Comma-separated EBR levels in dB, cycled over clips.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "DB,...")]
    pub ebr: Option<Vec<f64>>,
    /// gunshot or glassbreak.
    #[arg(long)]
    pub event_kind: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "HZ")]
    pub sample_rate: Option<u32>,
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

impl GenCorpusArgs {
    pub fn merged(mut self, file: Self) -> Self {
        fill!(self, file; count, clip_len, ebr, event_kind, seed, sample_rate, out_dir);
        self
    }

    pub fn spec(&self) -> Result<(CorpusSpec, PathBuf), CliError> {
        let defaults = CorpusSpec::default();
        let event_kind = match &self.event_kind {
            Some(s) => s.parse::<EventKind>().map_err(CliError::usage)?,
            None => defaults.event_kind,
        };
        let spec = CorpusSpec {
            count: self.count.unwrap_or(defaults.count),
            clip_len_s: self.clip_len.unwrap_or(defaults.clip_len_s),
            ebr_levels: self.ebr.clone().unwrap_or(defaults.ebr_levels),
            event_kind,
            seed: self.seed.unwrap_or(defaults.seed),
            sample_rate_hz: self.sample_rate.unwrap_or(defaults.sample_rate_hz),
        };
        spec.validate().map_err(CliError::usage)?;
        let out_dir = self
            .out_dir
            .clone()
            .ok_or_else(|| CliError::Usage("--out-dir is required".into()))?;
        Ok((spec, out_dir))
    }
}

/// Detector parameters shared by `detect`, `eval-det` and `bench`. In a
/// config file these live in the `[detector]` table.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct DetectorArgs {
    /// energy (alias base), lpc or wlp.
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<Variant>,
    /// Threshold multiplier.
    #[arg(long)]
    pub k: Option<f64>,
    /// Prediction order (lpc, wlp).
    #[arg(long)]
    pub order: Option<usize>,
    /// All-pass warping coefficient (wlp only).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Energy frame length in samples.
    #[arg(long)]
    pub frame_len: Option<usize>,
    /// Model refit block length in samples (lpc, wlp).
    #[arg(long)]
    pub block_len: Option<usize>,
    /// Background history: frames (energy) or residual samples (lpc, wlp).
    #[arg(long)]
    pub history: Option<usize>,
    /// Flagged samples closer than this merge into one event (lpc, wlp).
    #[arg(long)]
    pub merge_gap: Option<usize>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: impulse_core::Error| e.to_string())
}

impl DetectorArgs {
    pub fn merged(mut self, file: Self) -> Self {
        fill!(self, file; variant, k, order, lambda, frame_len, block_len, history, merge_gap);
        self
    }

    pub fn config_for(&self, variant: Variant) -> Result<DetectorConfig, CliError> {
        if self.lambda.is_some() && variant != Variant::Wlp {
            return Err(CliError::Usage(format!(
                "--lambda only applies to the wlp variant, not {variant}"
            )));
        }
        let mut c = DetectorConfig::new(variant);
        if let Some(k) = self.k {
            c.threshold_k = k;
        }
        c.order = self.order.unwrap_or(c.order);
        c.lambda = self.lambda.unwrap_or(c.lambda);
        c.frame_len = self.frame_len.unwrap_or(c.frame_len);
        c.block_len = self.block_len.unwrap_or(c.block_len);
        c.history_len = self.history.unwrap_or(c.history_len);
        c.merge_gap = self.merge_gap.unwrap_or(c.merge_gap);
        c.validate().map_err(CliError::usage)?;
        Ok(c)
    }

    pub fn config(&self) -> Result<DetectorConfig, CliError> {
        self.config_for(self.variant.unwrap_or(Variant::Wlp))
    }
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct DetectArgs {
    /// WAV file to scan (16-bit PCM or 32-bit float).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Event records destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub detector: DetectorArgs,
}

impl DetectArgs {
    pub fn merged(mut self, file: Self) -> Self {
        fill!(self, file; input, output);
        self
    }
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct EvalDetArgs {
    /// Corpus manifest file or the directory holding it.
    #[arg(long, short)]
    pub manifest: Option<PathBuf>,
    /// Comma-separated ascending thresholds; defaults to 20 log-spaced values in [3, 100].
    #[arg(long, value_delimiter = ',', value_name = "K,...")]
    pub k_grid: Option<Vec<f64>>,
    /// Detections within this many samples of the true event count as hits.
    #[arg(long, value_name = "SAMPLES")]
    pub tolerance: Option<u64>,
    /// DET CSV destination; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Emit one partition per EBR level instead of corpus-wide points.
    #[arg(long)]
    pub by_ebr: bool,
    /// Evaluate clips one at a time.
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub detector: DetectorArgs,
}

impl EvalDetArgs {
    pub fn merged(mut self, file: Self) -> Self {
        fill!(self, file; manifest, k_grid, tolerance, out);
        self.by_ebr |= file.by_ebr;
        self.serial |= file.serial;
        self
    }
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct BenchArgs {
    /// WAV clip to process.
    #[arg(long)]
    pub clip: Option<PathBuf>,
    /// Benchmark energy, lpc and wlp in turn.
    #[arg(long)]
    pub all: bool,
    /// Timed passes per variant; the median is reported (minimum 3).
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Report destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub detector: DetectorArgs,
}

impl BenchArgs {
    pub fn merged(mut self, file: Self) -> Self {
        fill!(self, file; clip, repetitions, output);
        self.all |= file.all;
        self
    }
}

/// Layout of the `--config` file: one optional table per subcommand plus a
/// shared `[detector]` table.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub gen_corpus: GenCorpusArgs,
    pub detect: DetectArgs,
    pub eval_det: EvalDetArgs,
    pub bench: BenchArgs,
    pub detector: DetectorArgs,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}
