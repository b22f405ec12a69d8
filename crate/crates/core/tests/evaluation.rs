use impulse_core::corpus::{generate_corpus, read_wav, CorpusManifest, CorpusSpec};
use impulse_core::evaluation::{
    default_k_grid, det_sweep, export_det_csv, read_det_csv, DetPoint, SweepOptions,
    DEFAULT_TOLERANCE_SAMPLES,
};
use impulse_core::{detect, DetectorConfig, Error, Variant};
use tempfile::TempDir;

fn small_corpus(count: usize, seed: u64) -> (TempDir, CorpusManifest) {
    let dir = tempfile::tempdir().unwrap();
    let spec = CorpusSpec {
        count,
        clip_len_s: 6.0,
        seed,
        ..CorpusSpec::default()
    };
    let manifest = generate_corpus(&spec, dir.path()).unwrap();
    (dir, manifest)
}

fn configs() -> [DetectorConfig; 3] {
    [DetectorConfig::energy(), DetectorConfig::lpc(), DetectorConfig::wlp()]
}

/// Whole-clip detection, then detections counted by brute force against the
/// tolerance-widened truth span.
fn oracle_point(config: &DetectorConfig, corpus: &CorpusManifest, k: f64) -> (f64, f64) {
    let (mut missed, mut false_pos) = (0usize, 0usize);
    for record in &corpus.records {
        let clip = read_wav(corpus.mixture_path(record)).unwrap();
        let events = detect(&config.clone().with_k(k), &clip).unwrap();
        let lo = record.onset_sample.saturating_sub(DEFAULT_TOLERANCE_SAMPLES);
        let hi = record.onset_sample + record.event_len_samples - 1 + DEFAULT_TOLERANCE_SAMPLES;
        let hits = events
            .iter()
            .filter(|e| (lo..=hi).any(|s| (e.onset_sample..=e.offset_sample).contains(&s)))
            .count();
        if hits == 0 {
            missed += 1;
        }
        false_pos += events.len() - hits;
    }
    let n = corpus.len() as f64;
    (missed as f64 / n, false_pos as f64 / n)
}

#[test]
fn sweep_matches_whole_clip_oracle() {
    let (_dir, corpus) = small_corpus(6, 3);
    let grid = [2.0, 4.0, 8.0];
    for config in configs() {
        let sweep = det_sweep(&config, &corpus, &grid, SweepOptions::default()).unwrap();
        for (point, &k) in sweep.points().iter().zip(&grid) {
            let (md, fp) = oracle_point(&config, &corpus, k);
            assert_eq!((point.md_rate, point.fp_per_clip), (md, fp), "{} k={k}", config.variant);
        }
    }
}

#[test]
fn huge_k_misses_everything() {
    let (_dir, corpus) = small_corpus(6, 4);
    for config in configs() {
        let sweep = det_sweep(&config, &corpus, &[1e6], SweepOptions::default()).unwrap();
        let p = &sweep.points()[0];
        assert_eq!((p.md_rate, p.fp_per_clip), (1.0, 0.0), "{}", config.variant);
    }
}

#[test]
fn tiny_k_misses_nothing() {
    let (_dir, corpus) = small_corpus(6, 4);
    for config in configs() {
        let sweep = det_sweep(&config, &corpus, &[1e-6, 1e6], SweepOptions::default()).unwrap();
        let pts = sweep.points();
        assert_eq!(pts[0].md_rate, 0.0, "{}", config.variant);
        assert!(pts[0].md_rate <= pts[1].md_rate);
    }
}

#[test]
fn default_grid_is_monotone() {
    let (_dir, corpus) = small_corpus(9, 5);
    for config in configs() {
        let sweep = det_sweep(&config, &corpus, &default_k_grid(), SweepOptions::default()).unwrap();
        let pts = sweep.points();
        for w in pts.windows(2) {
            assert!(w[1].md_rate >= w[0].md_rate, "{} md {:?}", config.variant, w);
            assert!(w[1].fp_per_clip <= w[0].fp_per_clip, "{} fp {:?}", config.variant, w);
        }
    }
}

#[test]
fn parallel_and_serial_sweeps_agree() {
    let (_dir, corpus) = small_corpus(6, 6);
    let grid = default_k_grid();
    for config in configs() {
        let par = det_sweep(&config, &corpus, &grid, SweepOptions::default()).unwrap();
        let ser = det_sweep(
            &config,
            &corpus,
            &grid,
            SweepOptions {
                parallel: false,
                ..SweepOptions::default()
            },
        )
        .unwrap();
        assert_eq!(par, ser);
        assert_eq!(par.points(), ser.points());
    }
}

#[test]
fn counting_identity_holds_per_clip_and_overall() {
    let (_dir, corpus) = small_corpus(6, 7);
    let sweep = det_sweep(&DetectorConfig::wlp(), &corpus, &[3.0, 6.0], SweepOptions::default()).unwrap();
    for k in 0..2 {
        let m = sweep.match_result(k);
        assert_eq!(m.true_positives + m.miss_detections, corpus.len());
        for clip in &m.per_clip {
            assert_eq!(clip.true_positives + clip.miss_detections, 1);
        }
    }
}

#[test]
fn ebr_partitions_cover_every_level() {
    let (_dir, corpus) = small_corpus(6, 8);
    let grid = [4.0, 8.0];
    let sweep = det_sweep(&DetectorConfig::energy(), &corpus, &grid, SweepOptions::default()).unwrap();
    let rows = sweep.points_by_ebr();
    assert_eq!(rows.len(), 3 * grid.len());
    let levels: Vec<f64> = rows.iter().map(|p| p.ebr_db.unwrap()).collect();
    assert_eq!(levels, [-6.0, -6.0, 0.0, 0.0, 6.0, 6.0]);
    // Two clips per level: partition FP totals add back up to the whole.
    for (i, whole) in sweep.points().iter().enumerate() {
        let total: f64 = rows.iter().skip(i).step_by(2).map(|p| p.fp_per_clip * 2.0).sum();
        assert!((total - whole.fp_per_clip * 6.0).abs() < 1e-12);
    }
}

#[test]
fn missing_clip_names_record() {
    let (dir, corpus) = small_corpus(4, 9);
    std::fs::remove_file(corpus.mixture_path(&corpus.records[2])).unwrap();
    let err = det_sweep(&DetectorConfig::energy(), &corpus, &[5.0], SweepOptions::default()).unwrap_err();
    match err {
        Error::Record { index, source } => {
            assert_eq!(index, 2);
            assert!(matches!(*source, Error::Io { .. }));
        }
        other => panic!("unexpected {other:?}"),
    }
    drop(dir);
}

#[test]
fn bad_grids_are_rejected() {
    let (_dir, corpus) = small_corpus(3, 10);
    let c = DetectorConfig::energy();
    assert!(det_sweep(&c, &corpus, &[], SweepOptions::default()).is_err());
    assert!(det_sweep(&c, &corpus, &[5.0, 2.0], SweepOptions::default()).is_err());
}

#[test]
fn csv_roundtrip_from_sweep() {
    let (dir, corpus) = small_corpus(6, 11);
    let sweep = det_sweep(&DetectorConfig::lpc(), &corpus, &default_k_grid(), SweepOptions::default()).unwrap();
    let rows = sweep.points_by_ebr();
    let path = dir.path().join("det.csv");
    export_det_csv(&rows, &path).unwrap();
    let back: Vec<DetPoint> = read_det_csv(&path).unwrap();
    assert_eq!(back, rows);
    assert!(back.iter().all(|p| p.variant == Variant::Lpc));
}
