use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use impulse_core::corpus::{generate_corpus, read_wav, CorpusManifest, WavStream};
use impulse_core::evaluation::{
    benchmark, default_k_grid, det_sweep, write_det_csv, BenchReport, SweepOptions,
    DEFAULT_TOLERANCE_SAMPLES, MIN_REPETITIONS, STREAM_CHUNK,
};
use impulse_core::{DetectionEvent, Detector, Variant};
use log::{info, warn};
use serde::Serialize;

use crate::args::{BenchArgs, DetectArgs, EvalDetArgs, GenCorpusArgs};
use crate::CliError;

const DEFAULT_REPETITIONS: usize = 5;

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn gen_corpus(args: GenCorpusArgs) -> Result<(), CliError> {
    let (spec, out_dir) = args.spec()?;
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", out_dir.display())))?;
    info!("generating {} clips of {} s into {}", spec.count, spec.clip_len_s, out_dir.display());
    let manifest = generate_corpus(&spec, &out_dir)?;
    for (level, count) in manifest.counts_by_ebr() {
        info!("  EBR {level} dB: {count} clips");
    }
    info!("manifest written to {}", manifest.manifest_path().display());
    Ok(())
}

#[derive(Serialize)]
struct EventRecord {
    onset_sample: u64,
    offset_sample: u64,
    onset_seconds: f64,
    peak_score: f64,
    variant: Variant,
}

impl EventRecord {
    fn new(e: &DetectionEvent, rate: u32) -> Self {
        Self {
            onset_sample: e.onset_sample,
            offset_sample: e.offset_sample,
            onset_seconds: e.onset_seconds(rate),
            peak_score: e.peak_score,
            variant: e.variant,
        }
    }
}

pub fn detect(args: DetectArgs) -> Result<(), CliError> {
    let config = args.detector.config()?;
    let input = args
        .input
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let mut stream = WavStream::open(&input)?;
    let rate = stream.sample_rate_hz();
    info!("{}: {} samples at {rate} Hz, variant {}", input.display(), stream.len(), config.variant);

    let mut out = open_output(args.output.as_deref())?;
    let mut detector = Detector::new(config)?;
    let mut count = 0usize;
    while let Some(chunk) = stream.next_chunk(STREAM_CHUNK)? {
        for e in detector.push(&chunk)? {
            json_line(&mut out, &EventRecord::new(&e, rate))?;
            count += 1;
        }
    }
    for e in detector.flush() {
        json_line(&mut out, &EventRecord::new(&e, rate))?;
        count += 1;
    }
    out.flush()?;
    info!("{count} events");
    Ok(())
}

pub fn eval_det(args: EvalDetArgs) -> Result<(), CliError> {
    let config = args.detector.config()?;
    let grid = args.k_grid.clone().unwrap_or_else(default_k_grid);
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|k| !(*k > 0.0)) {
        return Err(CliError::Usage("--k-grid must be non-empty, positive and strictly ascending".into()));
    }
    let manifest_path = args
        .manifest
        .ok_or_else(|| CliError::Usage("--manifest is required".into()))?;
    let corpus = CorpusManifest::load(&manifest_path)?;
    info!("sweeping {} over {} clips, {} thresholds", config.variant, corpus.len(), grid.len());

    let options = SweepOptions {
        tolerance_samples: args.tolerance.unwrap_or(DEFAULT_TOLERANCE_SAMPLES),
        parallel: !args.serial,
    };
    let sweep = det_sweep(&config, &corpus, &grid, options)?;
    let points = if args.by_ebr { sweep.points_by_ebr() } else { sweep.points() };
    let mut out = open_output(args.out.as_deref())?;
    write_det_csv(&points, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn bench(args: BenchArgs) -> Result<(), CliError> {
    let repetitions = args.repetitions.unwrap_or(DEFAULT_REPETITIONS);
    if repetitions < MIN_REPETITIONS {
        return Err(CliError::Usage(format!(
            "--repetitions must be at least {MIN_REPETITIONS}, got {repetitions}"
        )));
    }
    let variants: Vec<Variant> = if args.all {
        if args.detector.variant.is_some() {
            return Err(CliError::Usage("--all and --variant are mutually exclusive".into()));
        }
        Variant::ALL.to_vec()
    } else {
        vec![args.detector.variant.unwrap_or(Variant::Wlp)]
    };
    let configs = variants
        .iter()
        .map(|&v| {
            let mut d = args.detector.clone();
            if v != Variant::Wlp && args.all {
                d.lambda = None;
            }
            d.config_for(v)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let clip_path = args
        .clip
        .ok_or_else(|| CliError::Usage("--clip is required".into()))?;
    let clip = read_wav(&clip_path)?;

    let mut out = open_output(args.output.as_deref())?;
    let mut reports: Vec<BenchReport> = Vec::new();
    for config in &configs {
        let report = benchmark(config, &clip, repetitions)?;
        info!(
            "{}: {:.4} s for {:.1} s of audio (real-time factor {:.5})",
            report.variant, report.wall_time_s, report.clip_duration_s, report.real_time_factor
        );
        if report.real_time_factor >= 1.0 {
            warn!("{} runs slower than real time", report.variant);
        }
        json_line(&mut out, &report)?;
        reports.push(report);
    }
    out.flush()?;

    if let [energy, lpc, wlp] = reports.as_slice() {
        if !(energy.wall_time_s < wlp.wall_time_s && wlp.wall_time_s < lpc.wall_time_s) {
            warn!(
                "timing order differs from energy < wlp < lpc: {:.4} / {:.4} / {:.4} s",
                energy.wall_time_s, wlp.wall_time_s, lpc.wall_time_s
            );
        }
    }
    Ok(())
}
