//! Energy, Lyapunov functionals and the inequality chain behind the decay
//! estimate, evaluated as runtime monitors.
//!
//! With `K = int |u_t|^2`, `S = int |u_x|^2`, `A = int |u|^2`:
//!
//! ```text
//! E = (K + a^2 S) / 2 + b S^2 / 4
//! G = int u.u_t dx + delta A
//! V = E + eps G
//! dE/dt = -2 delta K
//! dG/dt = K - (a^2 + b S) S  <=  2K - 2E
//! ```
//!
//! On [`ModalState`] every integral is a Parseval sum; on [`GridState`] the
//! trapezoid rule with second-order difference gradients is used.

use std::f64::consts::PI;

use crate::certificate::mu0;
use crate::error::{Error, Result};
use crate::fd;
use crate::field::{GridState, ModalState, Vec2};
use crate::modal::{gradient_norm_sq, modal_rhs};
use crate::params::WaveParameters;

/// Quadratic integrals of a field snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldIntegrals {
    /// `int |u_t|^2 dx`
    pub kinetic: f64,
    /// `int |u_x|^2 dx`, the Kirchhoff scalar `S`.
    pub grad_sq: f64,
    /// `int |u|^2 dx`
    pub amp_sq: f64,
    /// `int u . u_t dx`
    pub cross: f64,
}

/// A field snapshot the monitors can evaluate.
pub trait FieldState {
    fn time(&self) -> f64;

    fn integrals(&self) -> FieldIntegrals;

    /// Instantaneous `dG/dt` from the equation of motion.
    fn lyapunov_g_rate(&self, params: &WaveParameters) -> f64;
}

impl FieldState for ModalState {
    fn time(&self) -> f64 {
        self.time
    }

    fn integrals(&self) -> FieldIntegrals {
        let half = 0.5 * self.length();
        let (mut kinetic, mut amp_sq, mut cross) = (0.0, 0.0, 0.0);
        for (b, r) in self.coeffs().iter().zip(self.rates()) {
            kinetic += r.norm_sq();
            amp_sq += b.norm_sq();
            cross += b.dot(*r);
        }
        FieldIntegrals {
            kinetic: half * kinetic,
            grad_sq: gradient_norm_sq(self),
            amp_sq: half * amp_sq,
            cross: half * cross,
        }
    }

    fn lyapunov_g_rate(&self, params: &WaveParameters) -> f64 {
        // d/dt (l/2) sum (b.b' + delta |b|^2) = (l/2) sum (|b'|^2 + b.b'' + 2 delta b.b')
        let d = modal_rhs(self, params);
        let two_delta = 2.0 * params.damping();
        let sum: f64 = self
            .coeffs()
            .iter()
            .zip(self.rates())
            .zip(&d.acceleration)
            .map(|((b, r), acc)| r.norm_sq() + b.dot(*acc) + two_delta * b.dot(*r))
            .sum();
        0.5 * self.length() * sum
    }
}

impl FieldState for GridState {
    fn time(&self) -> f64 {
        self.time
    }

    fn integrals(&self) -> FieldIntegrals {
        let h = self.spacing();
        let u = self.u();
        let ut = self.ut();
        FieldIntegrals {
            kinetic: fd::trapezoid(h, ut.iter().map(|v| v.norm_sq())),
            grad_sq: fd::kirchhoff_scalar(u, h),
            amp_sq: fd::trapezoid(h, u.iter().map(|v| v.norm_sq())),
            cross: fd::trapezoid(h, u.iter().zip(ut).map(|(a, b)| a.dot(*b))),
        }
    }

    fn lyapunov_g_rate(&self, params: &WaveParameters) -> f64 {
        let h = self.spacing();
        let acc = fd::acceleration(self.u(), self.ut(), params, h);
        let two_delta = 2.0 * params.damping();
        fd::trapezoid(
            h,
            self.u()
                .iter()
                .zip(self.ut())
                .zip(&acc)
                .map(|((u, ut), a)| ut.norm_sq() + u.dot(*a) + two_delta * u.dot(*ut)),
        )
    }
}

fn energy_from(i: &FieldIntegrals, params: &WaveParameters) -> f64 {
    0.5 * (i.kinetic + params.a_sq() * i.grad_sq) + 0.25 * params.b_coeff() * i.grad_sq * i.grad_sq
}

fn lyapunov_g_from(i: &FieldIntegrals, params: &WaveParameters) -> f64 {
    i.cross + params.damping() * i.amp_sq
}

/// Total energy `E = (1/2) int (|u_t|^2 + a^2 |u_x|^2) + (b/4) (int |u_x|^2)^2`.
pub fn energy<S: FieldState + ?Sized>(state: &S, params: &WaveParameters) -> f64 {
    energy_from(&state.integrals(), params)
}

/// `G = int (u . u_t + delta |u|^2) dx`.
pub fn lyapunov_g<S: FieldState + ?Sized>(state: &S, params: &WaveParameters) -> f64 {
    lyapunov_g_from(&state.integrals(), params)
}

/// `V = E + eps G`.
pub fn lyapunov_v<S: FieldState + ?Sized>(state: &S, params: &WaveParameters, epsilon: f64) -> f64 {
    let i = state.integrals();
    energy_from(&i, params) + epsilon * lyapunov_g_from(&i, params)
}

/// Energy of initial data `(u0, u1)` evaluated directly from the profiles.
///
/// Composite Simpson on `quadrature_points` nodes (bumped to odd, at least
/// 3); `u0'` is taken by a fourth-order central difference, so `u0` must be
/// evaluable slightly outside `[0, l]`.
pub fn initial_energy<F, G>(u0: F, u1: G, params: &WaveParameters, quadrature_points: usize) -> f64
where
    F: Fn(f64) -> Vec2,
    G: Fn(f64) -> Vec2,
{
    let l = params.length();
    let mut points = quadrature_points.max(3);
    if points.is_multiple_of(2) {
        points += 1;
    }
    let m = points - 1;
    let h = l / m as f64;
    let d = 1e-4 * l;
    let derivative = |x: f64| {
        (u0(x - 2.0 * d) - 8.0 * u0(x - d) + 8.0 * u0(x + d) - u0(x + 2.0 * d)) * (1.0 / (12.0 * d))
    };
    let (mut kinetic, mut grad) = (0.0, 0.0);
    for j in 0..=m {
        let x = if j == m { l } else { j as f64 * h };
        let w = if j == 0 || j == m {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        kinetic += w * u1(x).norm_sq();
        grad += w * derivative(x).norm_sq();
    }
    kinetic *= h / 3.0;
    grad *= h / 3.0;
    energy_from(
        &FieldIntegrals {
            kinetic,
            grad_sq: grad,
            amp_sq: 0.0,
            cross: 0.0,
        },
        params,
    )
}

/// Slacks of the inequality chain; each is non-negative when the
/// corresponding inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InequalityMargins {
    /// `(l^2/pi^2) int |u_x|^2 - int |u|^2`
    pub scheefer: f64,
    /// `(l / pi a) E - |int u . u_t|`
    pub schwarz: f64,
    /// `mu0 E - |G|`
    pub g_upper: f64,
    /// `G + (l / pi a) E`
    pub g_lower: f64,
    /// `V - (1 - eps l / pi a) E`
    pub sandwich_lo: f64,
    /// `(1 + eps mu0) E - V`
    pub sandwich_hi: f64,
    /// `(2K - 2E) - dG/dt`, with `dG/dt` from the equation of motion.
    pub dg_bound: f64,
}

impl InequalityMargins {
    /// Each margin divided by the magnitude of its bounding side.
    ///
    /// Scales are floored at the smallest normal double so that the zero
    /// state reports zero margins.
    pub fn relative(&self, scales: &MarginScales) -> InequalityMargins {
        let r = |m: f64, s: f64| m / s.max(f64::MIN_POSITIVE);
        InequalityMargins {
            scheefer: r(self.scheefer, scales.scheefer),
            schwarz: r(self.schwarz, scales.schwarz),
            g_upper: r(self.g_upper, scales.g_upper),
            g_lower: r(self.g_lower, scales.g_lower),
            sandwich_lo: r(self.sandwich_lo, scales.energy),
            sandwich_hi: r(self.sandwich_hi, scales.energy),
            dg_bound: r(self.dg_bound, scales.energy),
        }
    }

    pub fn min(&self) -> f64 {
        [
            self.scheefer,
            self.schwarz,
            self.g_upper,
            self.g_lower,
            self.sandwich_lo,
            self.sandwich_hi,
            self.dg_bound,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &InequalityMargins) -> InequalityMargins {
        InequalityMargins {
            scheefer: self.scheefer.min(other.scheefer),
            schwarz: self.schwarz.min(other.schwarz),
            g_upper: self.g_upper.min(other.g_upper),
            g_lower: self.g_lower.min(other.g_lower),
            sandwich_lo: self.sandwich_lo.min(other.sandwich_lo),
            sandwich_hi: self.sandwich_hi.min(other.sandwich_hi),
            dg_bound: self.dg_bound.min(other.dg_bound),
        }
    }

    pub fn unbounded() -> InequalityMargins {
        let inf = f64::INFINITY;
        InequalityMargins {
            scheefer: inf,
            schwarz: inf,
            g_upper: inf,
            g_lower: inf,
            sandwich_lo: inf,
            sandwich_hi: inf,
            dg_bound: inf,
        }
    }
}

/// Natural magnitudes used to normalize [`InequalityMargins`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MarginScales {
    pub scheefer: f64,
    pub schwarz: f64,
    pub g_upper: f64,
    pub g_lower: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorConfig {
    /// Lyapunov mixing parameter `eps`.
    pub epsilon: f64,
    /// Relative slack below which a margin counts as violated.
    pub margin_tolerance: f64,
}

impl MonitorConfig {
    pub fn new(epsilon: f64, margin_tolerance: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::ParameterDomain {
                name: "epsilon",
                value: epsilon,
                reason: "must be finite and > 0",
            });
        }
        if !(margin_tolerance.is_finite() && margin_tolerance >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "margin_tolerance",
                value: margin_tolerance,
                reason: "must be finite and >= 0",
            });
        }
        Ok(Self {
            epsilon,
            margin_tolerance,
        })
    }
}

/// Inequality margins of one state, plus the scales to normalize them.
pub fn inequality_margins<S: FieldState + ?Sized>(
    state: &S,
    params: &WaveParameters,
    epsilon: f64,
) -> (InequalityMargins, MarginScales) {
    let i = state.integrals();
    margins_from(&i, state.lyapunov_g_rate(params), params, epsilon)
}

fn margins_from(
    i: &FieldIntegrals,
    g_rate: f64,
    params: &WaveParameters,
    epsilon: f64,
) -> (InequalityMargins, MarginScales) {
    let l = params.length();
    let e = energy_from(i, params);
    let g = lyapunov_g_from(i, params);
    let v = e + epsilon * g;
    let inv_freq = 1.0 / params.fundamental_frequency();
    let mu0 = mu0(params);
    let poincare = l * l / (PI * PI);
    let margins = InequalityMargins {
        scheefer: poincare * i.grad_sq - i.amp_sq,
        schwarz: inv_freq * e - i.cross.abs(),
        g_upper: mu0 * e - g.abs(),
        g_lower: g + inv_freq * e,
        sandwich_lo: v - (1.0 - epsilon * inv_freq) * e,
        sandwich_hi: (1.0 + epsilon * mu0) * e - v,
        dg_bound: (2.0 * i.kinetic - 2.0 * e) - g_rate,
    };
    let scales = MarginScales {
        scheefer: poincare * i.grad_sq,
        schwarz: inv_freq * e,
        g_upper: mu0 * e,
        g_lower: inv_freq * e,
        energy: e,
    };
    (margins, scales)
}

/// Monitor values at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub time: f64,
    pub energy: f64,
    pub lyapunov_g: f64,
    pub lyapunov_v: f64,
    pub kinetic: f64,
    pub grad_sq: f64,
    pub amp_sq: f64,
    pub cross: f64,
    /// Instantaneous `dG/dt`.
    pub g_rate: f64,
    /// Filled by [`attach_dissipation_residuals`]; `None` at the endpoints.
    pub dissipation_residual: Option<f64>,
    pub margins: InequalityMargins,
    pub scales: MarginScales,
}

impl EnergySample {
    pub fn relative_margins(&self) -> InequalityMargins {
        self.margins.relative(&self.scales)
    }
}

pub fn energy_sample<S: FieldState + ?Sized>(
    state: &S,
    params: &WaveParameters,
    monitor: &MonitorConfig,
) -> EnergySample {
    let i = state.integrals();
    let g_rate = state.lyapunov_g_rate(params);
    let e = energy_from(&i, params);
    let g = lyapunov_g_from(&i, params);
    let (margins, scales) = margins_from(&i, g_rate, params, monitor.epsilon);
    EnergySample {
        time: state.time(),
        energy: e,
        lyapunov_g: g,
        lyapunov_v: e + monitor.epsilon * g,
        kinetic: i.kinetic,
        grad_sq: i.grad_sq,
        amp_sq: i.amp_sq,
        cross: i.cross,
        g_rate,
        dissipation_residual: None,
        margins,
        scales,
    }
}

/// Uniform spacing of the sample times, or an alignment error.
fn uniform_step(samples: &[EnergySample]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::Alignment(format!(
            "need at least 3 samples for a central difference, got {}",
            samples.len()
        )));
    }
    let h = (samples[samples.len() - 1].time - samples[0].time) / (samples.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::Alignment("sample times are not increasing".into()));
    }
    for (k, w) in samples.windows(2).enumerate() {
        let dt = w[1].time - w[0].time;
        if (dt - h).abs() > 1e-9 * h.max(w[1].time.abs() * 1e-6) {
            return Err(Error::Alignment(format!(
                "non-uniform sampling: step {k} is {dt}, expected {h}"
            )));
        }
    }
    Ok(h)
}

/// `|dE/dt + 2 delta K|` at interior samples, `dE/dt` by central difference.
pub fn dissipation_residuals_abs(
    samples: &[EnergySample],
    params: &WaveParameters,
) -> Result<Vec<f64>> {
    let h = uniform_step(samples)?;
    let two_delta = 2.0 * params.damping();
    Ok(samples
        .windows(3)
        .map(|w| ((w[2].energy - w[0].energy) / (2.0 * h) + two_delta * w[1].kinetic).abs())
        .collect())
}

/// Dissipation residual at interior samples relative to `max(E(0), 1)`.
pub fn dissipation_residual(samples: &[EnergySample], params: &WaveParameters) -> Result<Vec<f64>> {
    let scale = samples.first().map_or(1.0, |s| s.energy.max(1.0));
    Ok(dissipation_residuals_abs(samples, params)?
        .into_iter()
        .map(|r| r / scale)
        .collect())
}

/// Stores [`dissipation_residual`] into the interior samples.
pub fn attach_dissipation_residuals(
    samples: &mut [EnergySample],
    params: &WaveParameters,
) -> Result<()> {
    let residuals = dissipation_residual(samples, params)?;
    for (s, r) in samples[1..].iter_mut().zip(residuals) {
        s.dissipation_residual = Some(r);
    }
    Ok(())
}

/// `(2K - 2E) - dG/dt` at interior samples with `dG/dt` by central difference.
pub fn dg_bound_check(samples: &[EnergySample]) -> Result<Vec<f64>> {
    let h = uniform_step(samples)?;
    Ok(samples
        .windows(3)
        .map(|w| {
            let rate = (w[2].lyapunov_g - w[0].lyapunov_g) / (2.0 * h);
            (2.0 * w[1].kinetic - 2.0 * w[1].energy) - rate
        })
        .collect())
}
