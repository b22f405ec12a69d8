#![allow(dead_code)]

use impulse_core::SampleBuffer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const RATE: u32 = 44_100;
pub const BURST_ONSET: usize = 50_000;
pub const BURST_LEN: usize = 400;

pub fn white(n: usize, std: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, std).unwrap();
    (0..n).map(|_| normal.sample(&mut rng)).collect()
}

/// White noise (std 0.01) with a 400-sample rectangular burst of amplitude
/// 1.0 added at sample 50 000.
pub fn burst_in_noise(len: usize, seed: u64) -> Vec<f64> {
    let mut x = white(len, 0.01, seed);
    for v in &mut x[BURST_ONSET..BURST_ONSET + BURST_LEN] {
        *v += 1.0;
    }
    x
}

pub fn buffer(x: Vec<f64>) -> SampleBuffer {
    SampleBuffer::new(x, RATE).unwrap()
}

/// Sorted, distinct cut points in `1..len`.
pub fn random_cuts(len: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<usize> = (0..count).map(|_| rng.gen_range(1..len)).collect();
    cuts.sort_unstable();
    cuts.dedup();
    cuts
}

/// Noise with a few clicks of varying size, for property-style checks.
pub fn clicky(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut x = white(len, 0.02, seed);
    // Mild coloring so the predictor has something to model.
    for n in 1..len {
        x[n] += 0.8 * x[n - 1];
    }
    for _ in 0..6 {
        let at = rng.gen_range(0..len.saturating_sub(40));
        let amp = rng.gen_range(0.1..1.0);
        for v in &mut x[at..at + rng.gen_range(1..40)] {
            *v += amp;
        }
    }
    x
}
