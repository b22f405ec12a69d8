use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All-pole predictor of fixed order.
///
/// `coeffs[i - 1]` is `a_i` in the prediction `x_hat[n] = sum_i a_i * x[n - i]`.
/// The inverse (whitening) filter is `1 - sum_i a_i z^-i`; its taps are only
/// ever produced by [`LpcModel::inverse_filter`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpcModel {
    coeffs: Vec<f64>,
    residual_variance: f64,
}

impl LpcModel {
    pub fn new(coeffs: Vec<f64>, residual_variance: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("LPC order must be at least 1"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("LPC coefficients must be finite"));
        }
        if !(residual_variance >= 0.0) || !residual_variance.is_finite() {
            return Err(Error::invalid(format!(
                "residual variance {residual_variance} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            coeffs,
            residual_variance,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn residual_variance(&self) -> f64 {
        self.residual_variance
    }

    /// FIR taps `[1, -a_1, ..., -a_N]` of the inverse filter.
    pub fn inverse_filter(&self) -> Vec<f64> {
        std::iter::once(1.0)
            .chain(self.coeffs.iter().map(|a| -a))
            .collect()
    }

    /// Drives `excitation` through the all-pole synthesis filter
    /// `1 / (1 - sum_i a_i z^-i)` from zero state.
    pub fn synthesize(&self, excitation: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(excitation.len());
        for (n, &e) in excitation.iter().enumerate() {
            let mut acc = 0.0;
            for (i, a) in self.coeffs.iter().enumerate() {
                if n > i {
                    acc += a * out[n - 1 - i];
                }
            }
            out.push(e + acc);
        }
        out
    }

    /// Prediction error of sample `x` given the tap values (past samples, or
    /// warped taps) at the same instant.
    #[inline]
    pub(crate) fn error_at(&self, x: f64, taps: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (a, t) in self.coeffs.iter().zip(taps) {
            acc += a * t;
        }
        x - acc
    }
}

/// Levinson-Durbin recursion on the autocorrelation `r`.
///
/// Fails with [`Error::DegenerateSignal`] when `r[0] <= 0` and with
/// [`Error::IllConditioned`] when a reflection coefficient reaches unit
/// magnitude.
pub fn levinson_durbin(r: &[f64], order: usize) -> Result<LpcModel> {
    if order == 0 {
        return Err(Error::invalid("LPC order must be at least 1"));
    }
    if r.len() < order + 1 {
        return Err(Error::invalid(format!(
            "order {order} needs {} autocorrelation lags, got {}",
            order + 1,
            r.len()
        )));
    }
    if !(r[0] > 0.0) {
        return Err(Error::DegenerateSignal { r0: r[0] });
    }

    let mut a = vec![0.0; order];
    let mut prev = vec![0.0; order];
    let mut err = r[0];
    for i in 1..=order {
        let mut acc = r[i];
        for j in 1..i {
            acc -= a[j - 1] * r[i - j];
        }
        let k = acc / err;
        if !(k.abs() < 1.0) {
            return Err(Error::IllConditioned {
                stage: i,
                reflection: k,
            });
        }
        prev[..i - 1].copy_from_slice(&a[..i - 1]);
        a[i - 1] = k;
        for j in 1..i {
            a[j - 1] = prev[j - 1] - k * prev[i - j - 1];
        }
        err *= 1.0 - k * k;
    }
    LpcModel::new(a, err.max(0.0))
}

/// Inverse-filters `x` with `model`, starting from zero prior samples.
pub fn prediction_residual(x: &[f64], model: &LpcModel) -> Vec<f64> {
    let order = model.order();
    let mut taps = vec![0.0; order];
    x.iter()
        .enumerate()
        .map(|(n, &xn)| {
            for (i, t) in taps.iter_mut().enumerate() {
                *t = if n > i { x[n - 1 - i] } else { 0.0 };
            }
            model.error_at(xn, &taps)
        })
        .collect()
}
