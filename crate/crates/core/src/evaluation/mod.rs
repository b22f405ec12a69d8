//! Scoring against ground truth, DET sweeps and real-time benchmarks.

mod bench;
mod det;
mod scoring;

pub use bench::{benchmark, BenchReport, MIN_REPETITIONS};
pub use det::{
    default_k_grid, det_sweep, export_det_csv, log_grid, read_det_csv, write_det_csv, DetPoint,
    DetSweep, SweepOptions, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_K_POINTS, DET_CSV_HEADER,
    STREAM_CHUNK,
};
pub use scoring::{score_clip, ClipScore, MatchResult, DEFAULT_TOLERANCE_SAMPLES};
