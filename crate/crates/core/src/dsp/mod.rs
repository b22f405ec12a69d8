//! Signal-processing primitives shared by the detectors: frame energy,
//! plain and warped autocorrelation, Levinson-Durbin, inverse filtering and
//! first-order all-pass delay chains.
//!
//! Everything here is a pure function of its inputs. Batch operations start
//! from zero filter state; the streaming detectors carry state themselves
//! through [`TapLine`].

mod lpc;
mod taps;
mod warp;

pub use lpc::{levinson_durbin, prediction_residual, LpcModel};
pub use taps::{PlainDelay, TapLine, WarpedDelay};
pub use warp::{
    allpass_delay_chain, warped_autocorrelation, warped_prediction_residual, WarpParams,
    DEFAULT_LAMBDA,
};

use crate::error::{Error, Result};

/// Sum of squared samples over `frame`.
pub fn frame_energy(frame: &[f64]) -> Result<f64> {
    if frame.is_empty() {
        return Err(Error::invalid("frame_energy of an empty frame"));
    }
    Ok(frame.iter().map(|x| x * x).sum())
}

/// Biased autocorrelation `r[k] = sum_n x[n] * x[n-k]` for `k = 0..=max_lag`.
pub fn autocorrelation(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if max_lag >= x.len() {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be smaller than signal length {}",
            x.len()
        )));
    }
    Ok((0..=max_lag)
        .map(|lag| {
            let mut acc = 0.0;
            for n in lag..x.len() {
                acc += x[n] * x[n - lag];
            }
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn energy_of_silence_is_zero() {
        assert_eq!(frame_energy(&[0.0; 350]).unwrap(), 0.0);
    }

    #[test]
    fn energy_of_unit_alternation() {
        assert_eq!(frame_energy(&[1.0, -1.0, 1.0, -1.0]).unwrap(), 4.0);
    }

    #[test]
    fn energy_rejects_empty() {
        assert!(matches!(frame_energy(&[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn energy_of_noise_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = Normal::new(0.0, 0.1).unwrap();
        let frame: Vec<f64> = (0..350).map(|_| normal.sample(&mut rng)).collect();
        let mut oracle = 0.0;
        for v in &frame {
            oracle += v.powi(2);
        }
        let e = frame_energy(&frame).unwrap();
        assert!((e - oracle).abs() <= 1e-12 * oracle);
        // 350 * 0.01 with a chi-square(350) spread of about 0.26.
        assert!((e - 3.5).abs() < 1.5, "energy {e}");
    }

    #[test]
    fn autocorrelation_of_impulse() {
        assert_eq!(autocorrelation(&[1.0, 0.0, 0.0, 0.0], 2).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn autocorrelation_of_ones() {
        assert_eq!(autocorrelation(&[1.0; 4], 1).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn autocorrelation_rejects_long_lag() {
        assert!(autocorrelation(&[1.0; 4], 4).is_err());
    }

    #[test]
    fn autocorrelation_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..512).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let max_lag = 12;
        let r = autocorrelation(&x, max_lag).unwrap();
        for (k, rk) in r.iter().enumerate() {
            let mut oracle = 0.0;
            for i in 0..x.len() {
                for j in 0..x.len() {
                    if i == j + k {
                        oracle += x[i] * x[j];
                    }
                }
            }
            assert!((rk - oracle).abs() <= 1e-12 * r[0], "lag {k}");
            assert!(r[0] >= rk.abs());
        }
    }
}
