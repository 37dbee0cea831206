//! Explicit decay constants and sample-based certification of
//!
//! ```text
//! E(t) <= M exp(-mu t) E(0),
//! mu0 = (l / pi a)(1 + 2 delta l / pi a),
//! mu  = 2 eps / (1 + eps mu0),
//! M   = (1 + eps mu0) / (1 - eps l / pi a),
//! ```
//!
//! valid for `0 < eps <= delta` and `eps < pi a / l`, together with the
//! amplitude bound on `int |u|^2` that follows from it.

use std::f64::consts::{PI, SQRT_2};

use crate::energy::EnergySample;
use crate::error::{Error, Result};
use crate::params::WaveParameters;

/// Default fraction of `pi a / l` that caps `eps`.
pub const DEFAULT_KAPPA: f64 = 0.99;

/// Default sample density: points per decay time `1 / mu`.
pub const SAMPLES_PER_DECAY_TIME: f64 = 200.0;

/// `mu0 = (l / pi a)(1 + 2 delta l / pi a)`.
pub fn mu0(params: &WaveParameters) -> f64 {
    let inv_freq = 1.0 / params.fundamental_frequency();
    inv_freq * (1.0 + 2.0 * params.damping() * inv_freq)
}

/// `eps = min(delta, kappa pi a / l)`.
pub fn choose_epsilon(params: &WaveParameters, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::ParameterDomain {
            name: "kappa",
            value: kappa,
            reason: "must lie in (0, 1)",
        });
    }
    let delta = params.damping();
    if !(delta > 0.0) {
        return Err(Error::NoCertificate { delta });
    }
    Ok(delta.min(kappa * params.fundamental_frequency()))
}

/// `mu = 2 eps / (1 + eps mu0)`.
pub fn decay_rate(epsilon: f64, mu0: f64) -> f64 {
    2.0 * epsilon / (1.0 + epsilon * mu0)
}

/// `M = (1 + eps mu0) / (1 - eps l / pi a)`; requires `0 < eps < pi a / l`.
pub fn overshoot_m(epsilon: f64, mu0: f64, params: &WaveParameters) -> Result<f64> {
    let limit = params.fundamental_frequency();
    if !(epsilon > 0.0 && epsilon < limit) {
        return Err(Error::EpsilonDomain { epsilon, limit });
    }
    Ok((1.0 + epsilon * mu0) / (1.0 - epsilon / limit))
}

/// Universal cap `2 / (1 + 2 sqrt 2)` on `mu_max / (pi a / l)`.
pub const MU_MAX_CAP_FACTOR: f64 = 2.0 / (1.0 + 2.0 * SQRT_2);

/// Best rate over `eps <= delta`, attained at `eps = delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuMax {
    /// `2 delta / (1 + (delta l / pi a)(1 + 2 delta l / pi a))`
    pub value: f64,
    /// `(2 / (1 + 2 sqrt 2)) pi a / l`
    pub cap: f64,
    /// `delta <= pi a / l`; the optimization assumes it.
    pub hypothesis_holds: bool,
}

pub fn mu_max(params: &WaveParameters) -> MuMax {
    let d = params.dimensionless_damping();
    MuMax {
        value: 2.0 * params.damping() / (1.0 + d * (1.0 + 2.0 * d)),
        cap: MU_MAX_CAP_FACTOR * params.fundamental_frequency(),
        hypothesis_holds: d <= 1.0,
    }
}

/// Message attached to constants computed with `delta > pi a / l`.
pub const STRONG_DAMPING_NOTE: &str =
    "delta exceeds pi*a/l: eps is capped at kappa*pi*a/l; a decay rate of pi*a/l suffices in this regime";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConstants {
    pub epsilon: f64,
    pub mu0: f64,
    pub mu: f64,
    pub big_m: f64,
    /// `delta l / (pi a)`
    pub dimensionless_damping: f64,
}

impl DecayConstants {
    /// Constants for an explicit `eps`, which must satisfy `0 < eps <= delta`
    /// and `eps < pi a / l`.
    pub fn new(params: &WaveParameters, epsilon: f64) -> Result<Self> {
        let delta = params.damping();
        if !(delta > 0.0) {
            return Err(Error::NoCertificate { delta });
        }
        if epsilon > delta {
            return Err(Error::ParameterDomain {
                name: "epsilon",
                value: epsilon,
                reason: "must not exceed the damping delta",
            });
        }
        let mu0 = mu0(params);
        let big_m = overshoot_m(epsilon, mu0, params)?;
        Ok(Self {
            epsilon,
            mu0,
            mu: decay_rate(epsilon, mu0),
            big_m,
            dimensionless_damping: params.dimensionless_damping(),
        })
    }

    /// Constants with `eps` from [`choose_epsilon`].
    pub fn auto(params: &WaveParameters, kappa: f64) -> Result<Self> {
        Self::new(params, choose_epsilon(params, kappa)?)
    }

    /// Set when `delta > pi a / l`.
    pub fn note(&self) -> Option<&'static str> {
        (self.dimensionless_damping > 1.0).then_some(STRONG_DAMPING_NOTE)
    }

    /// `M exp(-mu t) E0`.
    pub fn energy_bound(&self, t: f64, e0: f64) -> f64 {
        self.big_m * (-self.mu * t).exp() * e0
    }

    /// Sample spacing giving [`SAMPLES_PER_DECAY_TIME`] points per `1 / mu`.
    pub fn sample_interval(&self) -> f64 {
        1.0 / (SAMPLES_PER_DECAY_TIME * self.mu)
    }
}

/// Outcome of the energy-decay check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCheck {
    /// `max_t E(t) exp(mu t) / E(0)`
    pub max_normalized_ratio: f64,
    pub worst_sample_time: f64,
    pub pass: bool,
}

/// Outcome of the amplitude check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeCheck {
    /// `max_t int|u|^2 / bound(t)`
    pub max_ratio: f64,
    pub worst_sample_time: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateReport {
    pub constants: DecayConstants,
    pub max_normalized_ratio: f64,
    pub worst_sample_time: f64,
    pub verdict: bool,
    pub amplitude_verdict: bool,
    pub amplitude_max_ratio: f64,
    pub amplitude_worst_time: f64,
}

fn initial_energy_of(samples: &[EnergySample]) -> Result<(f64, f64)> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InconsistentTrajectory("empty trajectory".into()))?;
    let e0 = first.energy;
    if e0 == 0.0 {
        if let Some(s) = samples.iter().find(|s| s.energy != 0.0) {
            return Err(Error::InconsistentTrajectory(format!(
                "E(0) = 0 but E = {} at t = {}",
                s.energy, s.time
            )));
        }
    }
    Ok((e0, first.time))
}

/// Checks `E(t) exp(mu t) / E(0) <= M (1 + tolerance)` at every sample;
/// time is measured from the first sample.
pub fn certify_decay(
    samples: &[EnergySample],
    constants: &DecayConstants,
    tolerance: f64,
) -> Result<DecayCheck> {
    let (e0, t0) = initial_energy_of(samples)?;
    if e0 == 0.0 {
        return Ok(DecayCheck {
            max_normalized_ratio: 0.0,
            worst_sample_time: t0,
            pass: true,
        });
    }
    let (mut worst, mut worst_t) = (f64::NEG_INFINITY, t0);
    for s in samples {
        let ratio = s.energy * (constants.mu * (s.time - t0)).exp() / e0;
        if !(ratio <= worst) {
            worst = ratio;
            worst_t = s.time;
        }
    }
    Ok(DecayCheck {
        max_normalized_ratio: worst,
        worst_sample_time: worst_t,
        pass: worst <= constants.big_m * (1.0 + tolerance),
    })
}

/// Bound on `int_0^l |u|^2 dx` at time `t`:
/// `(l^2 a^2 / pi^2 b)(sqrt(1 + (4b/a^4) M E0 exp(-mu t)) - 1)`, and
/// `(2 l^2 / pi^2 a^2) M E0 exp(-mu t)` when `b = 0`.
pub fn amplitude_bound(
    t: f64,
    constants: &DecayConstants,
    params: &WaveParameters,
    e0: f64,
) -> f64 {
    let l = params.length();
    let a_sq = params.a_sq();
    let b = params.b_coeff();
    let r = constants.energy_bound(t, e0);
    if b == 0.0 {
        2.0 * l * l / (PI * PI * a_sq) * r
    } else {
        let x = 4.0 * b / (a_sq * a_sq) * r;
        // sqrt(1 + x) - 1 = x / (sqrt(1 + x) + 1), free of cancellation
        l * l * a_sq / (PI * PI * b) * (x / ((1.0 + x).sqrt() + 1.0))
    }
}

/// Checks `int |u|^2 <= bound(t) (1 + tolerance)` at every sample.
pub fn certify_amplitude(
    samples: &[EnergySample],
    constants: &DecayConstants,
    params: &WaveParameters,
    e0: f64,
    tolerance: f64,
) -> Result<AmplitudeCheck> {
    let (_, t0) = initial_energy_of(samples)?;
    let (mut worst, mut worst_t, mut pass) = (0.0_f64, t0, true);
    for s in samples {
        let bound = amplitude_bound(s.time - t0, constants, params, e0);
        if !(s.amp_sq <= bound * (1.0 + tolerance)) {
            pass = false;
        }
        let ratio = if s.amp_sq == 0.0 {
            0.0
        } else if bound > 0.0 {
            s.amp_sq / bound
        } else {
            f64::INFINITY
        };
        if ratio > worst {
            worst = ratio;
            worst_t = s.time;
        }
    }
    Ok(AmplitudeCheck {
        max_ratio: worst,
        worst_sample_time: worst_t,
        pass,
    })
}

/// Runs both checks; `E0` is the energy of the first sample.
pub fn certify(
    samples: &[EnergySample],
    constants: &DecayConstants,
    params: &WaveParameters,
    tolerance: f64,
) -> Result<CertificateReport> {
    let decay = certify_decay(samples, constants, tolerance)?;
    let amplitude = certify_amplitude(samples, constants, params, samples[0].energy, tolerance)?;
    Ok(CertificateReport {
        constants: *constants,
        max_normalized_ratio: decay.max_normalized_ratio,
        worst_sample_time: decay.worst_sample_time,
        verdict: decay.pass,
        amplitude_verdict: amplitude.pass,
        amplitude_max_ratio: amplitude.max_ratio,
        amplitude_worst_time: amplitude.worst_sample_time,
    })
}
