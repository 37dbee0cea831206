//! Explicit one-step integrators for autonomous systems `y' = f(y)`.

use crate::error::{Error, Result};

/// Classic four-stage Runge-Kutta step, in place.
pub(crate) struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            stage: vec![0.0; dim],
        }
    }

    pub(crate) fn step<F>(&mut self, f: &mut F, y: &mut [f64], h: f64)
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        f(y, &mut self.k1);
        axpy_into(&mut self.stage, y, 0.5 * h, &self.k1);
        f(&self.stage, &mut self.k2);
        axpy_into(&mut self.stage, y, 0.5 * h, &self.k2);
        f(&self.stage, &mut self.k3);
        axpy_into(&mut self.stage, y, h, &self.k3);
        f(&self.stage, &mut self.k4);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

fn axpy_into(out: &mut [f64], y: &[f64], h: f64, k: &[f64]) {
    for ((o, &yi), &ki) in out.iter_mut().zip(y).zip(k) {
        *o = yi + h * ki;
    }
}

// Dormand-Prince 5(4) tableau; the system is autonomous so the nodes c_i are unused.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand-Prince 5(4) with local extrapolation and FSAL.
pub(crate) struct DormandPrince {
    rtol: f64,
    atol: f64,
    h: Option<f64>,
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
    y_new: Vec<f64>,
    fsal_valid: bool,
    pub(crate) accepted: usize,
    pub(crate) rejected: usize,
}

impl DormandPrince {
    pub(crate) fn new(dim: usize, rtol: f64, atol: f64, initial_step: Option<f64>) -> Self {
        Self {
            rtol,
            atol,
            h: initial_step,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
            y_new: vec![0.0; dim],
            fsal_valid: false,
            accepted: 0,
            rejected: 0,
        }
    }

    fn initial_step<F>(&mut self, f: &mut F, y: &[f64], span: f64) -> f64
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        f(y, &mut self.k[0]);
        self.fsal_valid = true;
        let scale = |i: usize| self.atol + self.rtol * y[i].abs();
        let n = y.len() as f64;
        let d0 = (y
            .iter()
            .enumerate()
            .map(|(i, v)| (v / scale(i)).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        let d1 = (self.k[0]
            .iter()
            .enumerate()
            .map(|(i, v)| (v / scale(i)).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h.min(span)
    }

    /// Advances `y` from `t` to exactly `t_target`.
    pub(crate) fn advance<F>(
        &mut self,
        f: &mut F,
        y: &mut [f64],
        t: f64,
        t_target: f64,
    ) -> Result<()>
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        if t_target <= t {
            return Ok(());
        }
        let mut t = t;
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(f, y, t_target - t),
        };
        while t < t_target {
            let remaining = t_target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step < 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::Stiffness { t, h: step });
            }
            if !self.fsal_valid {
                f(y, &mut self.k[0]);
                self.fsal_valid = true;
            }
            let err = self.try_step(f, y, step);
            if !err.is_finite() {
                self.rejected += 1;
                h = step * 0.2;
                continue;
            }
            if err <= 1.0 {
                y.copy_from_slice(&self.y_new);
                self.k.swap(0, 6);
                t = if last { t_target } else { t + step };
                self.accepted += 1;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // A clipped final step says nothing about the natural step size.
                if !last || step * factor > h {
                    h = step * factor;
                }
            } else {
                self.rejected += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            }
        }
        self.h = Some(h);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        Ok(())
    }

    /// One trial step from `y` (with `k[0] = f(y)`); result in `y_new`,
    /// returns the scaled RMS error estimate.
    fn try_step<F>(&mut self, f: &mut F, y: &[f64], h: f64) -> f64
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let dim = y.len();
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let stage = &mut self.stage;
        for i in 0..dim {
            stage[i] = y[i] + h * A21 * k1[i];
        }
        f(stage, k2);
        for i in 0..dim {
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(stage, k3);
        for i in 0..dim {
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(stage, k4);
        for i in 0..dim {
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(stage, k5);
        for i in 0..dim {
            stage[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(stage, k6);
        for i in 0..dim {
            self.y_new[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(&self.y_new, k7);
        let mut acc = 0.0;
        for i in 0..dim {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(self.y_new[i].abs());
            acc += (e / sc).powi(2);
        }
        (acc / dim as f64).sqrt()
    }
}
