use impulse_core::evaluation::benchmark;
use impulse_core::{DetectorConfig, SampleBuffer};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn noise(seconds: usize) -> SampleBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let normal = Normal::new(0.0, 0.05).unwrap();
    SampleBuffer::new((0..seconds * 44_100).map(|_| normal.sample(&mut rng)).collect(), 44_100).unwrap()
}

#[test]
fn wall_time_scales_linearly_with_duration() {
    let short = noise(10);
    let long = noise(30);
    for config in [DetectorConfig::energy(), DetectorConfig::lpc(), DetectorConfig::wlp()] {
        let a = benchmark(&config, &short, 5).unwrap();
        let b = benchmark(&config, &long, 5).unwrap();
        let ratio = a.samples_per_second / b.samples_per_second;
        assert!((0.5..=2.0).contains(&ratio), "{} rate ratio {ratio}", config.variant);
        assert!(b.real_time_factor < 1.0, "{} rtf {}", config.variant, b.real_time_factor);
    }
}
