//! Simulation and decay certification for the damped nonlinear Kirchhoff
//! string
//!
//! ```text
//! u_tt + 2 delta u_t = (a^2 + b * integral_0^l |u_x|^2 dx) u_xx,
//! u(0, t) = u(l, t) = 0,
//! ```
//!
//! where `u = (v, w)` is the transverse displacement.
//!
//! * [`modal`] integrates the sine-basis Galerkin system.
//! * [`fd`] is an independent finite-difference solver used as a cross-check.
//! * [`energy`] evaluates the energy `E`, the cross functional `G`, the
//!   Lyapunov functional `V = E + eps G` and the inequality margins along a
//!   trajectory.
//! * [`certificate`] computes the decay constants `(eps, mu0, mu, M)` and
//!   checks `E(t) <= M exp(-mu t) E(0)` and the amplitude bound sample by
//!   sample.

// Negated comparisons such as `!(x > 0.0)` are used on purpose so that NaN
// fails every validity check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod energy;
pub mod error;
pub mod fd;
pub mod field;
pub mod modal;
mod ode;
pub mod params;
pub mod sampling;

pub use error::{Error, Result};
pub use field::{Grid, GridState, ModalState, Vec2};
pub use params::{derive_wave_parameters, PhysicalString, WaveParameters};
