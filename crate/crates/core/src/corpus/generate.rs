//! Synthetic stand-ins for a rare-event corpus: colored-noise backgrounds
//! and impulsive event templates, mixed at controlled EBR levels.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::{CorpusManifest, SPEC_FILE};
use super::mix::{mix_at_ebr, segment_rms, MixtureRecord};
use super::wav::{through_i16, write_wav, BitDepth};
use crate::error::{Error, Result};
use crate::signal::{SampleBuffer, DEFAULT_SAMPLE_RATE_HZ};

const BACKGROUND_POLE: f64 = 0.95;
const BACKGROUND_RMS: f64 = 0.05;
const EDGE_GUARD_S: f64 = 2.0;
const TEMPLATE_PEAK: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// 5 ms full-level noise attack, then 80 ms of noise decaying with a 25 ms time constant.
    Gunshot,
    /// Three decaying 3-8 kHz partials (15 ms time constant) over a 2 ms noise click.
    Glassbreak,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Gunshot => "gunshot",
            EventKind::Glassbreak => "glassbreak",
        })
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gunshot" => Ok(EventKind::Gunshot),
            "glassbreak" | "glass_break" | "glass-break" => Ok(EventKind::Glassbreak),
            other => Err(Error::config("event_kind", format!("unknown event kind `{other}`"))),
        }
    }
}

/// Parameters of a generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub clip_len_s: f64,
    pub ebr_levels: Vec<f64>,
    pub event_kind: EventKind,
    pub seed: u64,
    pub sample_rate_hz: u32,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            count: 50,
            clip_len_s: 30.0,
            ebr_levels: vec![-6.0, 0.0, 6.0],
            event_kind: EventKind::Gunshot,
            seed: 0,
            sample_rate_hz: DEFAULT_SAMPLE_RATE_HZ,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::config("count", "corpus needs at least one clip"));
        }
        if !(self.clip_len_s > 0.0 && self.clip_len_s.is_finite()) {
            return Err(Error::config("clip_len_s", "clip length must be positive"));
        }
        if self.ebr_levels.is_empty() || self.ebr_levels.iter().any(|l| !l.is_finite()) {
            return Err(Error::config("ebr_levels", "need at least one finite EBR level"));
        }
        if self.sample_rate_hz == 0 {
            return Err(Error::config("sample_rate_hz", "sample rate must be positive"));
        }
        let (lo, hi) = self.onset_range(self.event_len_samples());
        if hi < lo {
            return Err(Error::config(
                "clip_len_s",
                format!(
                    "{} s clips leave no room for a {} s guard on both sides of the event",
                    self.clip_len_s, EDGE_GUARD_S
                ),
            ));
        }
        Ok(())
    }

    pub fn clip_len_samples(&self) -> usize {
        (self.clip_len_s * f64::from(self.sample_rate_hz)).round() as usize
    }

    pub fn event_len_samples(&self) -> usize {
        let fs = f64::from(self.sample_rate_hz);
        match self.event_kind {
            EventKind::Gunshot => secs(0.005, fs) + secs(0.080, fs),
            EventKind::Glassbreak => secs(0.100, fs),
        }
    }

    /// Inclusive onset range keeping the event inside the guarded interior.
    fn onset_range(&self, event_len: usize) -> (usize, usize) {
        let clip = self.clip_len_samples();
        let guard = secs(EDGE_GUARD_S, f64::from(self.sample_rate_hz));
        let hi = clip.saturating_sub(guard).min(clip.saturating_sub(event_len));
        (guard, hi)
    }

    /// EBR label of clip `index`; levels are assigned round-robin.
    pub fn ebr_for(&self, index: usize) -> f64 {
        self.ebr_levels[index % self.ebr_levels.len()]
    }
}

fn secs(s: f64, fs: f64) -> usize {
    (s * fs).round() as usize
}

/// The three buffers behind one corpus entry. Background and event are
/// already on the 16-bit grid, so re-reading their files reproduces them exactly.
#[derive(Debug, Clone)]
pub struct SynthClip {
    pub background: SampleBuffer,
    pub event: SampleBuffer,
    pub mixture: SampleBuffer,
    pub record: MixtureRecord,
}

fn clip_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// First-order lowpassed white noise scaled to the corpus background level.
pub fn synth_background(len: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut y = Vec::with_capacity(len);
    let stationary = 1.0 / (1.0 - BACKGROUND_POLE * BACKGROUND_POLE).sqrt();
    let first: f64 = StandardNormal.sample(rng);
    let mut prev = stationary * first;
    for _ in 0..len {
        let w: f64 = StandardNormal.sample(rng);
        prev = BACKGROUND_POLE * prev + w;
        y.push(prev);
    }
    let rms = segment_rms(&y).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    y.iter().map(|v| through_i16(v * BACKGROUND_RMS / rms)).collect()
}

/// Event template of the given kind, peak-normalized.
pub fn synth_event(kind: EventKind, sample_rate_hz: u32, rng: &mut impl Rng) -> Vec<f64> {
    let fs = f64::from(sample_rate_hz);
    let mut x: Vec<f64> = match kind {
        EventKind::Gunshot => {
            let attack = secs(0.005, fs);
            let decay = secs(0.080, fs);
            let tau = 0.025 * fs;
            (0..attack + decay)
                .map(|n| {
                    let env = if n < attack {
                        1.0
                    } else {
                        (-((n - attack) as f64) / tau).exp()
                    };
                    let w: f64 = StandardNormal.sample(rng);
                    env * w
                })
                .collect()
        }
        EventKind::Glassbreak => {
            let len = secs(0.100, fs);
            let click = secs(0.002, fs);
            let tau = 0.015 * fs;
            let nyquist_cap = 0.45 * fs;
            let partials: Vec<(f64, f64, f64)> = (0..3)
                .map(|_| {
                    let f = rng.gen_range(3000.0..8000.0f64).min(nyquist_cap);
                    let amp = rng.gen_range(0.5..1.0);
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    (f, amp, phase)
                })
                .collect();
            (0..len)
                .map(|n| {
                    let t = n as f64 / fs;
                    let env = (-(n as f64) / tau).exp();
                    let tone: f64 = partials
                        .iter()
                        .map(|(f, a, p)| a * (std::f64::consts::TAU * f * t + p).sin())
                        .sum();
                    let noise: f64 = if n < click {
                        StandardNormal.sample(rng)
                    } else {
                        0.0
                    };
                    env * tone + noise
                })
                .collect()
        }
    };
    let peak = x.iter().fold(0.0f64, |p, v| p.max(v.abs())).max(f64::MIN_POSITIVE);
    for v in &mut x {
        *v = through_i16(*v * TEMPLATE_PEAK / peak);
    }
    x
}

/// Builds clip `index` of the corpus in memory. Deterministic in
/// `(spec.seed, index)` and independent of every other clip.
pub fn synthesize_clip(spec: &CorpusSpec, index: usize) -> Result<SynthClip> {
    spec.validate()?;
    let mut rng = clip_rng(spec.seed, index);
    let rate = spec.sample_rate_hz;
    let background = synth_background(spec.clip_len_samples(), &mut rng);
    let event = synth_event(spec.event_kind, rate, &mut rng);
    let (lo, hi) = spec.onset_range(event.len());
    let onset = rng.gen_range(lo..=hi);

    let background = SampleBuffer::new(background, rate)?;
    let event = SampleBuffer::new(event, rate)?;
    let (mixture, mut record) = mix_at_ebr(&background, &event, spec.ebr_for(index), onset)?;
    record.index = index;
    record.background_path = format!("bg_{index:04}.wav");
    record.event_path = format!("ev_{index:04}.wav");
    Ok(SynthClip {
        background,
        event,
        mixture,
        record,
    })
}

/// Mixture file name for record `index`.
pub fn mixture_file_name(index: usize) -> String {
    format!("mix_{index:04}.wav")
}

/// Generates the corpus into `out_dir`: per clip a background, an event and
/// a mixture WAV (16-bit), plus the line-delimited manifest and a copy of
/// the generation parameters.
pub fn generate_corpus(spec: &CorpusSpec, out_dir: impl AsRef<Path>) -> Result<CorpusManifest> {
    spec.validate()?;
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut records: Vec<MixtureRecord> = (0..spec.count)
        .into_par_iter()
        .map(|index| {
            let clip = synthesize_clip(spec, index)?;
            write_wav(out_dir.join(&clip.record.background_path), &clip.background, BitDepth::Pcm16)?;
            write_wav(out_dir.join(&clip.record.event_path), &clip.event, BitDepth::Pcm16)?;
            write_wav(out_dir.join(mixture_file_name(index)), &clip.mixture, BitDepth::Pcm16)?;
            log::debug!("clip {index}: onset {} ebr {}", clip.record.onset_sample, clip.record.ebr_db);
            Ok(clip.record)
        })
        .collect::<Result<_>>()?;
    records.sort_by_key(|r| r.index);

    let manifest = CorpusManifest::new(records, spec.sample_rate_hz, Some(spec.seed), out_dir)?;
    manifest.save()?;
    let spec_path = out_dir.join(SPEC_FILE);
    let json = serde_json::to_string_pretty(spec).expect("spec serializes");
    std::fs::write(&spec_path, json).map_err(|e| Error::io(&spec_path, e))?;
    Ok(manifest)
}
