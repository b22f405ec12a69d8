/// A delay structure feeding the predictor: on each input sample it yields
/// the tap values `t_1..t_N` that the model weights at that instant, then
/// advances its internal state.
pub trait TapLine {
    fn depth(&self) -> usize;

    fn step(&mut self, x: f64, taps: &mut [f64]);

    fn reset(&mut self);
}

/// Plain unit delays: `t_i[n] = x[n - i]`.
#[derive(Debug, Clone)]
pub struct PlainDelay {
    history: Vec<f64>,
}

impl PlainDelay {
    pub fn new(depth: usize) -> Self {
        Self {
            history: vec![0.0; depth],
        }
    }
}

impl TapLine for PlainDelay {
    fn depth(&self) -> usize {
        self.history.len()
    }

    #[inline]
    fn step(&mut self, x: f64, taps: &mut [f64]) {
        taps.copy_from_slice(&self.history);
        let n = self.history.len();
        if n > 0 {
            self.history.copy_within(0..n - 1, 1);
            self.history[0] = x;
        }
    }

    fn reset(&mut self) {
        self.history.fill(0.0);
    }
}

/// Cascade of first-order all-pass sections
/// `D(z) = (z^-1 - lambda) / (1 - lambda z^-1)`; `t_k` is the output of
/// section `k`, i.e. the input passed through `k` sections.
#[derive(Debug, Clone)]
pub struct WarpedDelay {
    lambda: f64,
    // prev[k] holds the previous output of section k (prev[0] is the previous input).
    prev: Vec<f64>,
}

impl WarpedDelay {
    /// `lambda` must satisfy `|lambda| < 1`; see [`super::WarpParams`].
    pub fn new(lambda: f64, depth: usize) -> Self {
        Self {
            lambda,
            prev: vec![0.0; depth + 1],
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl TapLine for WarpedDelay {
    fn depth(&self) -> usize {
        self.prev.len() - 1
    }

    #[inline]
    fn step(&mut self, x: f64, taps: &mut [f64]) {
        let lambda = self.lambda;
        let mut u = x;
        for k in 1..self.prev.len() {
            let y = (-lambda * u + self.prev[k - 1]) + lambda * self.prev[k];
            self.prev[k - 1] = u;
            taps[k - 1] = y;
            u = y;
        }
        let last = self.prev.len() - 1;
        self.prev[last] = u;
    }

    fn reset(&mut self) {
        self.prev.fill(0.0);
    }
}
