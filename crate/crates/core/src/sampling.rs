use crate::error::{Error, Result};

/// Uniform output instants `t_k = k * T / K`, `k = 0..=K`, with `K` chosen
/// so the spacing does not exceed the requested interval.
///
/// Solvers sharing a clock emit bit-identical sample times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleClock {
    t_end: f64,
    intervals: usize,
}

impl SampleClock {
    pub fn new(t_end: f64, max_interval: f64) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::Config(format!(
                "t_end must be finite and > 0, got {t_end}"
            )));
        }
        if !(max_interval.is_finite() && max_interval > 0.0) {
            return Err(Error::Config(format!(
                "sample interval must be finite and > 0, got {max_interval}"
            )));
        }
        let intervals = ((t_end / max_interval) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Ok(Self { t_end, intervals })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of intervals `K`; there are `K + 1` samples.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn interval(&self) -> f64 {
        self.t_end / self.intervals as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k >= self.intervals {
            self.t_end
        } else {
            k as f64 * self.interval()
        }
    }

    /// Splits one sample interval into equal sub-steps no longer than `dt`.
    pub fn substeps(&self, dt: f64) -> (usize, f64) {
        let interval = self.interval();
        let n = ((interval / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (n, interval / n as f64)
    }
}
