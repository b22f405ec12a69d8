use serde::{Deserialize, Serialize};

use super::lpc::LpcModel;
use super::taps::{TapLine, WarpedDelay};
use crate::error::{Error, Result};

pub const DEFAULT_LAMBDA: f64 = -0.7;

/// Warping coefficient of the first-order all-pass delay element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpParams {
    lambda: f64,
}

impl WarpParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.abs() < 1.0) {
            return Err(Error::invalid(format!(
                "lambda out of range: |{lambda}| must be < 1"
            )));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Default for WarpParams {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
        }
    }
}

/// Row `k - 1` of the result is `x` passed through `k` cascaded all-pass
/// sections, for `k = 1..=depth`, from zero initial state.
pub fn allpass_delay_chain(x: &[f64], warp: WarpParams, depth: usize) -> Result<Vec<Vec<f64>>> {
    if depth == 0 {
        return Err(Error::invalid("all-pass chain depth must be at least 1"));
    }
    let mut rows = vec![Vec::with_capacity(x.len()); depth];
    let mut chain = WarpedDelay::new(warp.lambda(), depth);
    let mut taps = vec![0.0; depth];
    for &xn in x {
        chain.step(xn, &mut taps);
        for (row, &t) in rows.iter_mut().zip(&taps) {
            row.push(t);
        }
    }
    Ok(rows)
}

/// `r_w[k] = sum_n x[n] * y_k[n]` where `y_k` is `x` through `k` all-pass
/// sections (`y_0 = x`). Reduces to [`super::autocorrelation`] at `lambda = 0`.
pub fn warped_autocorrelation(x: &[f64], warp: WarpParams, max_lag: usize) -> Result<Vec<f64>> {
    if max_lag >= x.len() {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be smaller than signal length {}",
            x.len()
        )));
    }
    let mut acc = vec![0.0; max_lag + 1];
    let mut chain = WarpedDelay::new(warp.lambda(), max_lag);
    let mut taps = vec![0.0; max_lag];
    for &xn in x {
        chain.step(xn, &mut taps);
        acc[0] += xn * xn;
        for (a, &t) in acc[1..].iter_mut().zip(&taps) {
            *a += xn * t;
        }
    }
    Ok(acc)
}

/// `residual[n] = x[n] - sum_i a_i * y_i[n]` with the all-pass outputs
/// `y_i` in place of plain delays.
pub fn warped_prediction_residual(x: &[f64], model: &LpcModel, warp: WarpParams) -> Vec<f64> {
    let mut chain = WarpedDelay::new(warp.lambda(), model.order());
    let mut taps = vec![0.0; model.order()];
    x.iter()
        .map(|&xn| {
            chain.step(xn, &mut taps);
            model.error_at(xn, &taps)
        })
        .collect()
}
