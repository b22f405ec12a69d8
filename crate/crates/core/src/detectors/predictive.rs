use std::collections::VecDeque;

use super::event::{DetectionEvent, EventBuilder};
use super::{DetectorConfig, Variant, SILENCE_FLOOR};
use crate::dsp::{autocorrelation, levinson_durbin, warped_autocorrelation, LpcModel, TapLine, WarpParams};
use crate::error::Result;

/// Scale factor taking the median absolute deviation to a Gaussian standard deviation.
const MAD_TO_STD: f64 = 1.4826;

/// Residual-outlier detector shared by the LPC and WLP variants; they differ
/// only in the tap line (plain or all-pass delays) and the matching
/// autocorrelation.
#[derive(Debug, Clone)]
pub(crate) struct PredictiveState<D> {
    variant: Variant,
    order: usize,
    history_len: usize,
    k: f64,
    block_len: usize,
    merge_gap: u64,
    warp: Option<WarpParams>,

    delay: D,
    taps: Vec<f64>,
    block: Vec<f64>,
    block_start: u64,
    model: Option<LpcModel>,
    background: VecDeque<f64>,
    sigma: Option<f64>,
    scratch: Vec<f64>,
    open: Option<EventBuilder>,
}

impl<D: TapLine> PredictiveState<D> {
    pub(crate) fn new(config: &DetectorConfig, delay: D, warp: Option<WarpParams>) -> Self {
        Self {
            variant: config.variant,
            order: config.order,
            history_len: config.history_len,
            k: config.threshold_k,
            block_len: config.block_len,
            merge_gap: config.merge_gap as u64,
            warp,
            delay,
            taps: vec![0.0; config.order],
            block: Vec::with_capacity(config.block_len),
            block_start: 0,
            model: None,
            background: VecDeque::with_capacity(config.history_len),
            sigma: None,
            scratch: Vec::with_capacity(config.history_len),
            open: None,
        }
    }

    pub(crate) fn model(&self) -> Option<&LpcModel> {
        self.model.as_ref()
    }

    pub(crate) fn in_event(&self) -> bool {
        self.open.is_some()
    }

    pub(crate) fn push(&mut self, samples: &[f64], start: u64, out: &mut Vec<DetectionEvent>) {
        let mut pos = 0;
        while pos < samples.len() {
            if self.block.is_empty() {
                self.block_start = start + pos as u64;
            }
            let take = (self.block_len - self.block.len()).min(samples.len() - pos);
            self.block.extend_from_slice(&samples[pos..pos + take]);
            pos += take;
            if self.block.len() == self.block_len {
                self.process_block(out);
            }
        }
    }

    pub(crate) fn flush(&mut self, last_sample: Option<u64>, out: &mut Vec<DetectionEvent>) {
        if !self.block.is_empty() {
            self.process_block(out);
        }
        if let Some(mut ev) = self.open.take() {
            if let Some(last) = last_sample {
                ev.close_at(last);
            }
            out.push(ev.finish(self.variant));
        }
    }

    fn fit(&self) -> Result<LpcModel> {
        let r = match self.warp {
            Some(warp) => warped_autocorrelation(&self.block, warp, self.order)?,
            None => autocorrelation(&self.block, self.order)?,
        };
        levinson_durbin(&r, self.order)
    }

    fn process_block(&mut self, out: &mut Vec<DetectionEvent>) {
        match self.fit() {
            Ok(model) => self.model = Some(model),
            Err(err) => log::trace!(
                "{} block at {}: keeping previous model ({err})",
                self.variant,
                self.block_start
            ),
        }
        self.sigma = if self.background.len() == self.history_len {
            Some(robust_deviation(&self.background, &mut self.scratch))
        } else {
            None
        };
        let threshold = self
            .sigma
            .filter(|s| *s >= SILENCE_FLOOR)
            .map(|s| self.k * s);

        let Self {
            variant,
            history_len,
            merge_gap,
            delay,
            taps,
            block,
            block_start,
            model,
            background,
            open,
            ..
        } = self;

        for (i, &x) in block.iter().enumerate() {
            let n = *block_start + i as u64;
            delay.step(x, taps);
            if open.as_ref().is_some_and(|ev| n - ev.last() >= *merge_gap) {
                out.push(open.take().unwrap().finish(*variant));
            }
            let Some(model) = model.as_ref() else {
                continue;
            };
            let e = model.error_at(x, taps);
            match threshold {
                Some(t) if e.abs() > t => {
                    let score = e.abs() / t;
                    match open {
                        Some(ev) => ev.extend(n, score),
                        None => *open = Some(EventBuilder::new(n, n, score)),
                    }
                }
                _ => {
                    if background.len() == *history_len {
                        background.pop_front();
                    }
                    background.push_back(e);
                }
            }
        }
        block.clear();
    }
}

/// MAD-based standard deviation estimate of `values`.
fn robust_deviation(values: &VecDeque<f64>, scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend(values.iter().copied());
    let med = median(scratch);
    for v in scratch.iter_mut() {
        *v = (*v - med).abs();
    }
    MAD_TO_STD * median(scratch)
}

fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    debug_assert!(n > 0);
    let mid = n / 2;
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (below + upper)
    }
}
