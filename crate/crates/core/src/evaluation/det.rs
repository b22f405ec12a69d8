use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scoring::{score_clip, ClipScore, MatchResult};
use crate::corpus::{read_wav, CorpusManifest};
use crate::detectors::{Detector, DetectorConfig, Variant};
use crate::error::{Error, Result};

pub const DET_CSV_HEADER: &str = "threshold_k,md_rate,fp_per_clip,ebr_db,variant";

pub const DEFAULT_K_MIN: f64 = 3.0;
pub const DEFAULT_K_MAX: f64 = 100.0;
pub const DEFAULT_K_POINTS: usize = 20;

/// Chunk size used when streaming clips through detectors.
pub const STREAM_CHUNK: usize = 8192;

/// One operating point of a detector on a corpus (or one EBR partition of it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetPoint {
    pub threshold_k: f64,
    pub md_rate: f64,
    pub fp_per_clip: f64,
    /// `None` for points aggregated over the whole corpus.
    pub ebr_db: Option<f64>,
    pub variant: Variant,
}

/// `count` log-spaced thresholds from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// 20 log-spaced values over `[3, 100]`.
///
/// Below k ≈ 3 flagged runs start merging into fewer, longer events, so event
/// counts stop being monotone in k; above 100 nothing is detected.
pub fn default_k_grid() -> Vec<f64> {
    log_grid(DEFAULT_K_MIN, DEFAULT_K_MAX, DEFAULT_K_POINTS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub tolerance_samples: u64,
    /// Fan clips out over the rayon pool; results are merged in clip order.
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            tolerance_samples: super::DEFAULT_TOLERANCE_SAMPLES,
            parallel: true,
        }
    }
}

/// Per-threshold scores of one sweep; `scores[k][clip]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetSweep {
    pub variant: Variant,
    pub k_grid: Vec<f64>,
    pub ebr_db: Vec<f64>,
    pub scores: Vec<Vec<ClipScore>>,
}

impl DetSweep {
    pub fn match_result(&self, k_index: usize) -> MatchResult {
        self.scores[k_index].iter().copied().collect()
    }

    /// One point per threshold over all clips.
    pub fn points(&self) -> Vec<DetPoint> {
        self.k_grid
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let m = self.match_result(i);
                DetPoint {
                    threshold_k: k,
                    md_rate: m.md_rate(),
                    fp_per_clip: m.fp_per_clip(),
                    ebr_db: None,
                    variant: self.variant,
                }
            })
            .collect()
    }

    /// Points restricted to clips labelled `ebr_db`.
    pub fn points_for_ebr(&self, ebr_db: f64) -> Vec<DetPoint> {
        self.k_grid
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let m: MatchResult = self.scores[i]
                    .iter()
                    .zip(&self.ebr_db)
                    .filter(|(_, &e)| e == ebr_db)
                    .map(|(s, _)| *s)
                    .collect();
                DetPoint {
                    threshold_k: k,
                    md_rate: m.md_rate(),
                    fp_per_clip: m.fp_per_clip(),
                    ebr_db: Some(ebr_db),
                    variant: self.variant,
                }
            })
            .collect()
    }

    /// Per-EBR partitions, levels in first-seen order.
    pub fn points_by_ebr(&self) -> Vec<DetPoint> {
        let mut levels: Vec<f64> = Vec::new();
        for &e in &self.ebr_db {
            if !levels.contains(&e) {
                levels.push(e);
            }
        }
        levels.into_iter().flat_map(|e| self.points_for_ebr(e)).collect()
    }
}

fn validate_grid(k_grid: &[f64]) -> Result<()> {
    if k_grid.is_empty() {
        return Err(Error::invalid("k grid is empty"));
    }
    if k_grid.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(Error::invalid("k grid values must be positive and finite"));
    }
    if k_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("k grid must be strictly ascending"));
    }
    Ok(())
}

/// Runs `base` (with `threshold_k` replaced by each grid value) over every
/// clip, a fresh detector per clip and threshold, and scores the result.
pub fn det_sweep(
    base: &DetectorConfig,
    corpus: &CorpusManifest,
    k_grid: &[f64],
    options: SweepOptions,
) -> Result<DetSweep> {
    validate_grid(k_grid)?;
    base.validate()?;
    if corpus.is_empty() {
        return Err(Error::invalid("corpus has no records"));
    }

    let per_clip = |idx: usize| -> Result<Vec<ClipScore>> {
        let record = &corpus.records[idx];
        let wrap = |e: Error| Error::Record {
            index: record.index,
            source: Box::new(e),
        };
        let clip = read_wav(corpus.mixture_path(record)).map_err(wrap)?;
        k_grid
            .iter()
            .map(|&k| {
                let mut detector = Detector::new(base.clone().with_k(k))?;
                let mut events = Vec::new();
                for chunk in clip.chunks(STREAM_CHUNK) {
                    events.extend(detector.push(&chunk)?);
                }
                events.extend(detector.flush());
                score_clip(&events, record, options.tolerance_samples)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(wrap)
    };

    let by_clip: Vec<Vec<ClipScore>> = if options.parallel {
        (0..corpus.len()).into_par_iter().map(per_clip).collect::<Result<_>>()?
    } else {
        (0..corpus.len()).map(per_clip).collect::<Result<_>>()?
    };

    let scores = (0..k_grid.len())
        .map(|ki| by_clip.iter().map(|clip| clip[ki]).collect())
        .collect();
    Ok(DetSweep {
        variant: base.variant,
        k_grid: k_grid.to_vec(),
        ebr_db: corpus.records.iter().map(|r| r.ebr_db).collect(),
        scores,
    })
}

/// Writes points as CSV under [`DET_CSV_HEADER`]. Floats use the shortest
/// representation that parses back to the same value.
pub fn export_det_csv(points: &[DetPoint], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if points.is_empty() {
        return Err(Error::invalid("no DET points to export"));
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_det_csv(points, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_det_csv(points: &[DetPoint], w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "{DET_CSV_HEADER}")?;
    for p in points {
        let ebr = p.ebr_db.map(|e| e.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            p.threshold_k, p.md_rate, p.fp_per_clip, ebr, p.variant
        )?;
    }
    Ok(())
}

/// Parses a file written by [`export_det_csv`].
pub fn read_det_csv(path: impl AsRef<Path>) -> Result<Vec<DetPoint>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |reason: String| Error::Parse {
        what: "DET CSV",
        reason,
    };
    match lines.next() {
        Some(Ok(h)) if h == DET_CSV_HEADER => {}
        Some(Ok(h)) => return Err(bad(format!("unexpected header `{h}`"))),
        Some(Err(e)) => return Err(Error::io(path, e)),
        None => return Err(bad("empty file".into())),
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(bad(format!("line {}: expected 5 fields", i + 2)));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("line {}: {e}", i + 2)));
        points.push(DetPoint {
            threshold_k: num(fields[0])?,
            md_rate: num(fields[1])?,
            fp_per_clip: num(fields[2])?,
            ebr_db: if fields[3].is_empty() { None } else { Some(num(fields[3])?) },
            variant: fields[4].parse()?,
        });
    }
    Ok(points)
}
