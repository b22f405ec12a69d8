use std::path::Path;
use std::process::{Command, Output};

use impulse_core::corpus::{write_wav, BitDepth};
use impulse_core::SampleBuffer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn impulse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impulse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_lines(o: &Output) -> Vec<String> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// White noise (std 0.01) plus a 400-sample unit burst at sample 50 000,
/// written as 32-bit float so the noise survives unquantized.
fn burst_wav(path: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let normal = Normal::new(0.0, 0.01).unwrap();
    let mut x: Vec<f64> = (0..100_000).map(|_| normal.sample(&mut rng)).collect();
    for v in &mut x[50_000..50_400] {
        *v += 1.0;
    }
    // Keep the burst inside full scale.
    for v in &mut x {
        *v = v.clamp(-0.999, 0.999);
    }
    write_wav(path, &SampleBuffer::new(x, 44_100).unwrap(), BitDepth::Float32).unwrap();
}

fn noise_wav(path: &Path, seconds: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let normal = Normal::new(0.0, 0.05).unwrap();
    let x = (0..seconds * 44_100).map(|_| normal.sample(&mut rng)).collect();
    write_wav(path, &SampleBuffer::new(x, 44_100).unwrap(), BitDepth::Pcm16).unwrap();
}

#[test]
fn gen_corpus_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = impulse(&[
            "gen-corpus", "--count", "4", "--clip-len", "5", "--ebr", "-6,0,6", "--seed", "7",
            "--out-dir", p(dir.path()),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let mut files: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files.iter().filter(|f| f.to_str().unwrap().starts_with("mix_")).count(), 4);
    for f in files {
        assert!(std::fs::read(a.path().join(&f)).unwrap() == std::fs::read(b.path().join(&f)).unwrap());
    }
    let manifest = std::fs::read_to_string(a.path().join("manifest.jsonl")).unwrap();
    assert_eq!(manifest.lines().count(), 4);
}

#[test]
fn zero_count_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = impulse(&["gen-corpus", "--count", "0", "--out-dir", p(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(code(&impulse(&["detect", "--bogus"])), 2);
    assert_eq!(code(&impulse(&[])), 2);
}

#[test]
fn silence_gives_no_events() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("silence.wav");
    write_wav(&wav, &SampleBuffer::zeros(44_100, 44_100).unwrap(), BitDepth::Pcm16).unwrap();
    for variant in ["energy", "lpc", "wlp"] {
        let o = impulse(&["detect", "--input", p(&wav), "--variant", variant]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn burst_gives_one_energy_event() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("burst.wav");
    burst_wav(&wav);
    let o = impulse(&["detect", "--input", p(&wav), "--variant", "energy", "--k", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let lines = stdout_lines(&o);
    assert_eq!(lines.len(), 1);
    let rec: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    let onset = rec["onset_sample"].as_u64().unwrap();
    assert!((49_650..=50_350).contains(&onset), "onset {onset}");
    assert_eq!(rec["variant"], "energy");
    let secs = rec["onset_seconds"].as_f64().unwrap();
    assert!((secs - onset as f64 / 44_100.0).abs() < 1e-12);
    for key in ["offset_sample", "peak_score"] {
        assert!(rec.get(key).is_some());
    }
}

#[test]
fn unwarped_wlp_matches_lpc() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("burst.wav");
    burst_wav(&wav);
    let wlp = impulse(&["detect", "-i", p(&wav), "--variant", "wlp", "--lambda", "0", "--k", "4"]);
    let lpc = impulse(&["detect", "-i", p(&wav), "--variant", "lpc", "--k", "4"]);
    assert_eq!((code(&wlp), code(&lpc)), (0, 0));
    let strip = |o: &Output| -> Vec<String> {
        stdout_lines(o).into_iter().map(|l| l.replace("\"wlp\"", "\"lpc\"")).collect()
    };
    assert!(!strip(&lpc).is_empty());
    assert_eq!(strip(&wlp), strip(&lpc));
}

#[test]
fn lambda_with_lpc_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("burst.wav");
    burst_wav(&wav);
    let o = impulse(&["detect", "-i", p(&wav), "--variant", "lpc", "--lambda", "-0.5"]);
    assert_eq!(code(&o), 2);
    let o = impulse(&["detect", "-i", p(&wav), "--variant", "wlp", "--lambda", "1.5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bad_wav_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.wav");
    std::fs::write(&bad, b"RIFF-not-really").unwrap();
    assert_eq!(code(&impulse(&["detect", "-i", p(&bad)])), 1);
    assert_eq!(code(&impulse(&["detect", "-i", p(&dir.path().join("missing.wav"))])), 1);
}

#[test]
fn detect_writes_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("burst.wav");
    let out = dir.path().join("events.jsonl");
    burst_wav(&wav);
    let o = impulse(&["detect", "-i", p(&wav), "--variant", "wlp", "-o", p(&out)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert!(!std::fs::read_to_string(&out).unwrap().is_empty());
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("burst.wav");
    burst_wav(&wav);
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!("[detect]\ninput = {:?}\n\n[detector]\nvariant = \"energy\"\nk = 5.0\n", p(&wav)),
    )
    .unwrap();
    let from_file = impulse(&["--config", p(&cfg), "detect"]);
    assert_eq!(code(&from_file), 0, "{}", String::from_utf8_lossy(&from_file.stderr));
    let lines = stdout_lines(&from_file);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].contains("\"energy\""));

    let overridden = impulse(&["--config", p(&cfg), "detect", "--variant", "wlp", "--k", "6"]);
    assert_eq!(code(&overridden), 0);
    assert!(stdout_lines(&overridden).iter().all(|l| l.contains("\"wlp\"")));

    std::fs::write(&cfg, "[detector]\nbogus = 1\n").unwrap();
    assert_eq!(code(&impulse(&["--config", p(&cfg), "detect", "-i", p(&wav)])), 2);
}

#[test]
fn eval_det_rows_and_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let o = impulse(&["gen-corpus", "--count", "6", "--clip-len", "5", "--seed", "2", "--out-dir", p(&corpus)]);
    assert_eq!(code(&o), 0);

    let o = impulse(&["eval-det", "--manifest", p(&corpus), "--variant", "energy", "--k-grid", "1000000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let lines = stdout_lines(&o);
    assert_eq!(lines, ["threshold_k,md_rate,fp_per_clip,ebr_db,variant", "1000000,1,0,,energy"]);

    let csv = dir.path().join("det.csv");
    let o = impulse(&[
        "eval-det", "-m", p(&corpus.join("manifest.jsonl")), "--variant", "lpc", "--by-ebr", "--out", p(&csv),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3 * 20);
    for row in &rows {
        let ebr = row.split(',').nth(3).unwrap();
        assert!(["-6", "0", "6"].contains(&ebr), "{row}");
    }

    let o = impulse(&["eval-det", "-m", p(&corpus), "--variant", "wlp"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Vec<f64>> = stdout_lines(&o)
        .iter()
        .skip(1)
        .map(|l| l.split(',').take(3).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 20);
    for w in rows.windows(2) {
        assert!(w[1][1] >= w[0][1] && w[1][2] <= w[0][2], "{w:?}");
    }
}

#[test]
fn eval_det_names_missing_record() {
    let dir = tempfile::tempdir().unwrap();
    let o = impulse(&["gen-corpus", "--count", "3", "--clip-len", "5", "--out-dir", p(dir.path())]);
    assert_eq!(code(&o), 0);
    std::fs::remove_file(dir.path().join("mix_0001.wav")).unwrap();
    let o = impulse(&["eval-det", "-m", p(dir.path()), "--k-grid", "5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("record 1"));
}

#[test]
fn eval_det_rejects_descending_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = impulse(&["eval-det", "-m", p(dir.path()), "--k-grid", "5,2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bench_all_emits_three_records() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("noise.wav");
    noise_wav(&wav, 30);
    let o = impulse(&["bench", "--all", "--clip", p(&wav), "--repetitions", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let lines = stdout_lines(&o);
    assert_eq!(lines.len(), 3);
    let variants: Vec<String> = lines
        .iter()
        .map(|l| {
            let r: serde_json::Value = serde_json::from_str(l).unwrap();
            assert!((r["clip_duration_s"].as_f64().unwrap() - 30.0).abs() < 1e-9);
            assert!(r["real_time_factor"].as_f64().unwrap() < 1.0);
            assert!(r["samples_per_second"].as_f64().unwrap() > 0.0);
            assert!(r["wall_time_s"].as_f64().unwrap() > 0.0);
            r["variant"].as_str().unwrap().to_owned()
        })
        .collect();
    assert_eq!(variants, ["energy", "lpc", "wlp"]);
}

#[test]
fn bench_needs_three_repetitions() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("noise.wav");
    noise_wav(&wav, 1);
    assert_eq!(code(&impulse(&["bench", "--clip", p(&wav), "--repetitions", "1"])), 2);
}
