//! Spectral Galerkin solver on the sine basis `sin(n pi x / l)`.
//!
//! Projecting the equation of motion onto mode `n` gives
//!
//! ```text
//! b_n'' = -2 delta b_n' - (a^2 + b S) (n pi / l)^2 b_n,
//! S = integral |u_x|^2 dx = (pi^2 / 2l) sum n^2 |b_n|^2
//! ```
//!
//! so all modes couple through the single Kirchhoff scalar `S`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{Grid, GridState, ModalState, Vec2};
use crate::ode::{DormandPrince, Rk4};
use crate::params::WaveParameters;
use crate::sampling::SampleClock;

/// Default number of retained modes.
pub const DEFAULT_MODES: usize = 32;

/// Per-mode time derivative `(b_n', b_n'')`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalDerivative {
    pub velocity: Vec<Vec2>,
    pub acceleration: Vec<Vec2>,
}

/// Minimum number of quadrature points used to project onto `num_modes` modes.
pub fn min_quadrature_points(num_modes: usize) -> usize {
    8 * num_modes + 1
}

/// Projects initial displacement `u0` and velocity `u1` onto the first
/// `num_modes` sine modes.
///
/// Uses composite Simpson on at least `8N + 1` points (an even request is
/// bumped to the next odd count). Both profiles must vanish at `x = 0` and
/// `x = l`.
pub fn project_initial_data<F, G>(
    u0: F,
    u1: G,
    length: f64,
    num_modes: usize,
    quadrature_points: usize,
) -> Result<ModalState>
where
    F: Fn(f64) -> Vec2,
    G: Fn(f64) -> Vec2,
{
    if num_modes == 0 {
        return Err(Error::Config("num_modes must be >= 1".into()));
    }
    let mut points = quadrature_points.max(min_quadrature_points(num_modes));
    if points.is_multiple_of(2) {
        points += 1;
    }
    let grid = Grid::new(length, points)?;
    let sampled = GridState::from_profiles(grid, u0, u1)?;
    project_grid(&sampled, num_modes)
}

/// Projects sampled grid data onto the sine basis.
///
/// Simpson weights are used when the number of intervals is even, the
/// trapezoid rule otherwise. Both are exact for band-limited data whose
/// highest mode plus `num_modes` stays below the interval count.
pub fn project_grid(state: &GridState, num_modes: usize) -> Result<ModalState> {
    if num_modes == 0 {
        return Err(Error::Config("num_modes must be >= 1".into()));
    }
    let intervals = state.num_points() - 1;
    let weights = quadrature_weights(intervals);
    let h = state.spacing();
    let length = state.grid().length();
    let scale = 2.0 / length * h;

    let mut coeffs = vec![Vec2::ZERO; num_modes];
    let mut rates = vec![Vec2::ZERO; num_modes];
    for (k, (c, r)) in coeffs.iter_mut().zip(rates.iter_mut()).enumerate() {
        let n = (k + 1) as f64;
        for (j, w) in weights.iter().enumerate().take(intervals).skip(1) {
            let s = w * (n * PI * j as f64 / intervals as f64).sin();
            *c += s * state.u()[j];
            *r += s * state.ut()[j];
        }
        *c = scale * *c;
        *r = scale * *r;
    }
    ModalState::new(state.time, length, coeffs, rates)
}

fn quadrature_weights(intervals: usize) -> Vec<f64> {
    let mut w = vec![1.0; intervals + 1];
    if intervals.is_multiple_of(2) {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj = if j == 0 || j == intervals {
                1.0 / 3.0
            } else if j % 2 == 1 {
                4.0 / 3.0
            } else {
                2.0 / 3.0
            };
        }
    } else {
        w[0] = 0.5;
        w[intervals] = 0.5;
    }
    w
}

/// Kirchhoff scalar `S = integral_0^l |u_x|^2 dx` via Parseval.
pub fn gradient_norm_sq(state: &ModalState) -> f64 {
    parseval_gradient(state.length(), state.coeffs())
}

fn parseval_gradient(length: f64, coeffs: &[Vec2]) -> f64 {
    let sum: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| ((k + 1) * (k + 1)) as f64 * b.norm_sq())
        .sum();
    PI * PI / (2.0 * length) * sum
}

/// Right-hand side of the modal system.
pub fn modal_rhs(state: &ModalState, params: &WaveParameters) -> ModalDerivative {
    let y = to_flat(state);
    let mut dy = vec![0.0; y.len()];
    flat_rhs(params, &y, &mut dy);
    let n = state.num_modes();
    ModalDerivative {
        velocity: (0..n)
            .map(|k| Vec2::new(dy[4 * k], dy[4 * k + 1]))
            .collect(),
        acceleration: (0..n)
            .map(|k| Vec2::new(dy[4 * k + 2], dy[4 * k + 3]))
            .collect(),
    }
}

// Flat layout: y[4k..4k+4] = (b.v, b.w, b'.v, b'.w) for mode n = k + 1.
fn to_flat(state: &ModalState) -> Vec<f64> {
    state
        .coeffs()
        .iter()
        .zip(state.rates())
        .flat_map(|(b, r)| [b.v, b.w, r.v, r.w])
        .collect()
}

fn from_flat(time: f64, length: f64, y: &[f64]) -> ModalState {
    let coeffs = y.chunks_exact(4).map(|c| Vec2::new(c[0], c[1])).collect();
    let rates = y.chunks_exact(4).map(|c| Vec2::new(c[2], c[3])).collect();
    ModalState::from_parts_unchecked(time, length, coeffs, rates)
}

fn flat_rhs(params: &WaveParameters, y: &[f64], dy: &mut [f64]) {
    let length = params.length();
    let wavenumber = PI / length;
    let mut sum = 0.0;
    for (k, c) in y.chunks_exact(4).enumerate() {
        let n = (k + 1) as f64;
        sum += n * n * (c[0] * c[0] + c[1] * c[1]);
    }
    let s = PI * PI / (2.0 * length) * sum;
    let tension = params.tension_factor(s);
    let two_delta = 2.0 * params.damping();
    for (k, (c, d)) in y.chunks_exact(4).zip(dy.chunks_exact_mut(4)).enumerate() {
        let kn = (k + 1) as f64 * wavenumber;
        let stiffness = tension * kn * kn;
        d[0] = c[2];
        d[1] = c[3];
        d[2] = -two_delta * c[2] - stiffness * c[0];
        d[3] = -two_delta * c[3] - stiffness * c[1];
    }
}

/// Evaluates the sine series on `num_points` uniform nodes.
pub fn reconstruct(state: &ModalState, num_points: usize) -> Result<GridState> {
    let grid = Grid::new(state.length(), num_points)?;
    let intervals = (num_points - 1) as f64;
    let mut u = vec![Vec2::ZERO; num_points];
    let mut ut = vec![Vec2::ZERO; num_points];
    for j in 1..num_points - 1 {
        for (k, (b, r)) in state.coeffs().iter().zip(state.rates()).enumerate() {
            let s = ((k + 1) as f64 * PI * j as f64 / intervals).sin();
            u[j] += s * *b;
            ut[j] += s * *r;
        }
    }
    Ok(GridState::from_parts_unchecked(state.time, grid, u, ut))
}

/// Time discretization of the modal system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Classic four-stage Runge-Kutta with fixed step.
    Rk4 { dt: f64 },
    /// Dormand-Prince 5(4) with per-component tolerance `atol + rtol |y|`.
    Adaptive { rtol: f64, atol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub t_end: f64,
    /// Upper bound on the spacing between emitted samples.
    pub sample_interval: f64,
}

impl IntegratorConfig {
    /// Fixed-step RK4 emitting every `sample_stride` steps.
    pub fn rk4(dt: f64, t_end: f64, sample_stride: usize) -> Self {
        Self {
            scheme: Scheme::Rk4 { dt },
            t_end,
            sample_interval: dt * sample_stride.max(1) as f64,
        }
    }

    pub fn adaptive(tolerance: f64, t_end: f64, sample_interval: f64) -> Self {
        Self {
            scheme: Scheme::Adaptive {
                rtol: tolerance,
                atol: tolerance,
            },
            t_end,
            sample_interval,
        }
    }

    pub fn validate(&self) -> Result<SampleClock> {
        match self.scheme {
            Scheme::Rk4 { dt } if !(dt.is_finite() && dt > 0.0) => {
                return Err(Error::Config(format!(
                    "dt must be finite and > 0, got {dt}"
                )));
            }
            Scheme::Adaptive { rtol, atol }
                if !(rtol.is_finite() && rtol > 0.0 && atol.is_finite() && atol > 0.0) =>
            {
                return Err(Error::Config(format!(
                    "tolerances must be finite and > 0, got rtol = {rtol}, atol = {atol}"
                )));
            }
            _ => {}
        }
        SampleClock::new(self.t_end, self.sample_interval)
    }
}

/// Step-size heuristic `0.1 (l / (N pi)) / sqrt(a^2 + b S0)`: a tenth of the
/// period scale of the highest retained mode at the initial amplitude.
pub fn default_time_step(state: &ModalState, params: &WaveParameters) -> f64 {
    let s0 = gradient_norm_sq(state);
    0.1 * (params.length() / (state.num_modes() as f64 * PI)) / params.tension_factor(s0).sqrt()
}

/// Integrates from `state0`, handing every sample (the initial state
/// included) to `on_sample`.
pub fn integrate_with<F>(
    state0: &ModalState,
    params: &WaveParameters,
    cfg: &IntegratorConfig,
    mut on_sample: F,
) -> Result<()>
where
    F: FnMut(&ModalState) -> Result<()>,
{
    if (state0.length() - params.length()).abs() > 1e-12 * params.length() {
        return Err(Error::Config(format!(
            "state length {} does not match parameter length {}",
            state0.length(),
            params.length()
        )));
    }
    let clock = cfg.validate()?;
    let length = state0.length();
    let t0 = state0.time;
    let mut y = to_flat(state0);
    let mut rhs = |y: &[f64], dy: &mut [f64]| flat_rhs(params, y, dy);

    on_sample(state0)?;
    match cfg.scheme {
        Scheme::Rk4 { dt } => {
            let (substeps, h) = clock.substeps(dt);
            let mut rk = Rk4::new(y.len());
            for k in 1..=clock.intervals() {
                for _ in 0..substeps {
                    rk.step(&mut rhs, &mut y, h);
                }
                let t = t0 + clock.time(k);
                if y.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Divergence { t });
                }
                on_sample(&from_flat(t, length, &y))?;
            }
        }
        Scheme::Adaptive { rtol, atol } => {
            let mut dp = DormandPrince::new(y.len(), rtol, atol, None);
            for k in 1..=clock.intervals() {
                dp.advance(&mut rhs, &mut y, clock.time(k - 1), clock.time(k))
                    .map_err(|e| shift_time(e, t0))?;
                on_sample(&from_flat(t0 + clock.time(k), length, &y))?;
            }
        }
    }
    Ok(())
}

fn shift_time(e: Error, t0: f64) -> Error {
    match e {
        Error::Stiffness { t, h } => Error::Stiffness { t: t + t0, h },
        Error::Divergence { t } => Error::Divergence { t: t + t0 },
        other => other,
    }
}

/// Integrates and collects the sampled trajectory; the first element is `state0`.
pub fn integrate(
    state0: &ModalState,
    params: &WaveParameters,
    cfg: &IntegratorConfig,
) -> Result<Vec<ModalState>> {
    let mut out = Vec::new();
    integrate_with(state0, params, cfg, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}
