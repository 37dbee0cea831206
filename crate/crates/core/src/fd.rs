//! Finite-difference solver on a uniform grid.
//!
//! Shares no numerical machinery with the spectral solver: `u_xx` uses the
//! three-point stencil, `S = int |u_x|^2` uses the trapezoid rule on
//! central-difference gradients (second-order one-sided at the ends), and
//! time stepping is a velocity-Verlet splitting with the damping term split
//! trapezoidally between the two half kicks.

use crate::error::{Error, Result};
use crate::field::{Grid, GridState, ModalState, Vec2};
use crate::modal::reconstruct;
use crate::params::WaveParameters;
use crate::sampling::SampleClock;

/// Default Courant safety factor.
pub const DEFAULT_SAFETY: f64 = 0.5;

pub fn trapezoid(h: f64, values: impl Iterator<Item = f64>) -> f64 {
    let mut first = None;
    let mut last = 0.0;
    let mut sum = 0.0;
    for v in values {
        if first.is_none() {
            first = Some(v);
        }
        sum += v;
        last = v;
    }
    match first {
        None => 0.0,
        Some(f) => h * (sum - 0.5 * (f + last)),
    }
}

/// `u_x` at every node.
pub fn gradient(u: &[Vec2], h: f64) -> Vec<Vec2> {
    let n = u.len();
    if n < 3 {
        let g = if n == 2 {
            (u[1] - u[0]) * (1.0 / h)
        } else {
            Vec2::ZERO
        };
        return vec![g; n];
    }
    let inv2h = 0.5 / h;
    let mut g = Vec::with_capacity(n);
    g.push((-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2h);
    for j in 1..n - 1 {
        g.push((u[j + 1] - u[j - 1]) * inv2h);
    }
    g.push((3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2h);
    g
}

/// Kirchhoff scalar `S` by trapezoid quadrature of `|u_x|^2`.
pub fn kirchhoff_scalar(u: &[Vec2], h: f64) -> f64 {
    trapezoid(h, gradient(u, h).iter().map(|g| g.norm_sq()))
}

/// `(a^2 + b S) u_xx` at interior nodes (zero at the ends); also returns `S`.
fn conservative_acceleration(u: &[Vec2], params: &WaveParameters, h: f64, out: &mut [Vec2]) -> f64 {
    let s = kirchhoff_scalar(u, h);
    let factor = params.tension_factor(s) / (h * h);
    let n = u.len();
    out[0] = Vec2::ZERO;
    out[n - 1] = Vec2::ZERO;
    for j in 1..n - 1 {
        out[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * factor;
    }
    s
}

/// Full acceleration `(a^2 + b S) u_xx - 2 delta u_t`.
pub fn acceleration(u: &[Vec2], ut: &[Vec2], params: &WaveParameters, h: f64) -> Vec<Vec2> {
    let mut acc = vec![Vec2::ZERO; u.len()];
    if u.len() >= 2 {
        conservative_acceleration(u, params, h, &mut acc);
    }
    let two_delta = 2.0 * params.damping();
    for j in 1..u.len().saturating_sub(1) {
        acc[j] = acc[j] - two_delta * ut[j];
    }
    acc
}

/// Largest admissible step `safety * dx / sqrt(a^2 + b S)`.
pub fn cfl_limit(kirchhoff_scalar: f64, params: &WaveParameters, dx: f64, safety: f64) -> f64 {
    safety * dx / params.tension_factor(kirchhoff_scalar).sqrt()
}

/// Upper bound on `S` implied by `E >= a^2 S / 2 + b S^2 / 4` and a
/// non-increasing energy.
pub fn kirchhoff_scalar_bound(energy: f64, params: &WaveParameters) -> f64 {
    let a_sq = params.a_sq();
    let b = params.b_coeff();
    if b == 0.0 {
        2.0 * energy / a_sq
    } else {
        // positive root of (b/4) S^2 + (a^2/2) S - E = 0, rationalized
        4.0 * energy / (a_sq + (a_sq * a_sq + 4.0 * b * energy).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub num_interior_points: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Courant safety factor in `(0, 1]`.
    pub safety_factor: f64,
    /// Upper bound on the spacing between emitted samples.
    pub sample_interval: f64,
}

impl FdConfig {
    /// Picks `dt` at 90% of the stability limit for the largest `S` the
    /// initial energy allows.
    pub fn from_energy_bound(
        params: &WaveParameters,
        num_interior_points: usize,
        initial_energy: f64,
        safety_factor: f64,
        t_end: f64,
        sample_interval: f64,
    ) -> Self {
        let dx = params.length() / (num_interior_points + 1) as f64;
        let s_max = kirchhoff_scalar_bound(initial_energy, params);
        Self {
            num_interior_points,
            dt: 0.9 * cfl_limit(s_max, params, dx, safety_factor),
            t_end,
            safety_factor,
            sample_interval,
        }
    }

    pub fn grid(&self, length: f64) -> Result<Grid> {
        Grid::new(length, self.num_interior_points + 2)
    }

    fn validate(&self) -> Result<SampleClock> {
        if self.num_interior_points == 0 {
            return Err(Error::Config("need at least one interior point".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!(
                "dt must be finite and > 0, got {}",
                self.dt
            )));
        }
        if !(self.safety_factor > 0.0 && self.safety_factor <= 1.0) {
            return Err(Error::Config(format!(
                "safety factor must lie in (0, 1], got {}",
                self.safety_factor
            )));
        }
        SampleClock::new(self.t_end, self.sample_interval)
    }
}

struct Stepper {
    acc: Vec<Vec2>,
    s: f64,
    scratch: Vec<Vec2>,
    h: f64,
    safety: f64,
}

impl Stepper {
    fn new(u: &[Vec2], params: &WaveParameters, h: f64, safety: f64) -> Self {
        let mut acc = vec![Vec2::ZERO; u.len()];
        let s = conservative_acceleration(u, params, h, &mut acc);
        Self {
            acc,
            s,
            scratch: vec![Vec2::ZERO; u.len()],
            h,
            safety,
        }
    }

    fn step(
        &mut self,
        u: &mut [Vec2],
        ut: &mut [Vec2],
        params: &WaveParameters,
        dt: f64,
        t: f64,
    ) -> Result<()> {
        let h = self.h;
        let limit = cfl_limit(self.s, params, h, self.safety);
        if dt > limit {
            return Err(Error::Stability { t, dt, limit });
        }
        let n = u.len();
        let delta = params.damping();
        let half = 0.5 * dt;
        for ((uj, vj), aj) in u[1..n - 1]
            .iter_mut()
            .zip(&mut ut[1..n - 1])
            .zip(&self.acc[1..n - 1])
        {
            *vj += half * (*aj - 2.0 * delta * *vj);
            *uj += dt * *vj;
        }
        self.s = conservative_acceleration(u, params, h, &mut self.scratch);
        std::mem::swap(&mut self.acc, &mut self.scratch);
        let denom = 1.0 / (1.0 + delta * dt);
        for (vj, aj) in ut[1..n - 1].iter_mut().zip(&self.acc[1..n - 1]) {
            *vj = (*vj + half * *aj) * denom;
        }
        if !self.s.is_finite() {
            return Err(Error::Divergence { t: t + dt });
        }
        Ok(())
    }
}

/// One explicit step of size `dt`.
pub fn fd_step(
    state: &GridState,
    params: &WaveParameters,
    dt: f64,
    safety_factor: f64,
) -> Result<GridState> {
    let h = state.spacing();
    let mut u = state.u().to_vec();
    let mut ut = state.ut().to_vec();
    let mut stepper = Stepper::new(&u, params, h, safety_factor);
    stepper.step(&mut u, &mut ut, params, dt, state.time)?;
    if u.iter().chain(&ut).any(|v| !v.is_finite()) {
        return Err(Error::Divergence { t: state.time + dt });
    }
    Ok(GridState::from_parts_unchecked(
        state.time + dt,
        *state.grid(),
        u,
        ut,
    ))
}

/// Integrates from `state0`, handing every sample (the initial state
/// included) to `on_sample`.
pub fn fd_integrate_with<F>(
    state0: &GridState,
    params: &WaveParameters,
    cfg: &FdConfig,
    mut on_sample: F,
) -> Result<()>
where
    F: FnMut(&GridState) -> Result<()>,
{
    let clock = cfg.validate()?;
    if state0.num_points() != cfg.num_interior_points + 2 {
        return Err(Error::Config(format!(
            "state has {} points, config expects {}",
            state0.num_points(),
            cfg.num_interior_points + 2
        )));
    }
    let h = state0.spacing();
    let grid = *state0.grid();
    let t0 = state0.time;
    let (substeps, dt) = clock.substeps(cfg.dt);
    let mut u = state0.u().to_vec();
    let mut ut = state0.ut().to_vec();
    let mut stepper = Stepper::new(&u, params, h, cfg.safety_factor);

    on_sample(state0)?;
    for k in 1..=clock.intervals() {
        let start = t0 + clock.time(k - 1);
        for i in 0..substeps {
            stepper.step(&mut u, &mut ut, params, dt, start + i as f64 * dt)?;
        }
        let t = t0 + clock.time(k);
        if u.iter().chain(&ut).any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        on_sample(&GridState::from_parts_unchecked(
            t,
            grid,
            u.clone(),
            ut.clone(),
        ))?;
    }
    Ok(())
}

pub fn fd_integrate(
    state0: &GridState,
    params: &WaveParameters,
    cfg: &FdConfig,
) -> Result<Vec<GridState>> {
    let mut out = Vec::new();
    fd_integrate_with(state0, params, cfg, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Displacement discrepancy between the two solvers at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub time: f64,
    /// `max_j |u_modal(x_j) - u_fd(x_j)|`
    pub max_abs: f64,
    /// `(int |u_modal - u_fd|^2 dx)^(1/2)`, trapezoid on the FD grid.
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub samples: Vec<Discrepancy>,
    pub max_abs: f64,
    pub max_l2: f64,
}

/// Discrepancy of one snapshot pair, the modal field evaluated on the FD grid.
pub fn snapshot_discrepancy(modal: &ModalState, fd: &GridState) -> Result<Discrepancy> {
    if (modal.time - fd.time).abs() > 1e-9 * modal.time.abs().max(1.0) {
        return Err(Error::Alignment(format!(
            "modal sample at t = {} paired with FD sample at t = {}",
            modal.time, fd.time
        )));
    }
    if (modal.length() - fd.grid().length()).abs() > 1e-12 * modal.length() {
        return Err(Error::Alignment(
            "solvers use different string lengths".into(),
        ));
    }
    let on_grid = reconstruct(modal, fd.num_points())?;
    let diff: Vec<f64> = on_grid
        .u()
        .iter()
        .zip(fd.u())
        .map(|(a, b)| (*a - *b).norm_sq())
        .collect();
    Ok(Discrepancy {
        time: fd.time,
        max_abs: diff.iter().copied().fold(0.0, f64::max).sqrt(),
        l2: trapezoid(fd.spacing(), diff.into_iter()).sqrt(),
    })
}

/// Pairs the trajectories sample by sample; both must share sample times.
pub fn compare_solvers(modal: &[ModalState], fd: &[GridState]) -> Result<DiscrepancyReport> {
    if modal.len() != fd.len() {
        return Err(Error::Alignment(format!(
            "modal trajectory has {} samples, FD trajectory {}",
            modal.len(),
            fd.len()
        )));
    }
    let samples = modal
        .iter()
        .zip(fd)
        .map(|(m, f)| snapshot_discrepancy(m, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscrepancyReport {
        max_abs: samples.iter().map(|d| d.max_abs).fold(0.0, f64::max),
        max_l2: samples.iter().map(|d| d.l2).fold(0.0, f64::max),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::energy;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn mode_state(params: &WaveParameters, interior: usize, mode: f64, amp: f64) -> GridState {
        let l = params.length();
        let grid = Grid::new(l, interior + 2).unwrap();
        GridState::from_profiles(
            grid,
            |x| Vec2::new(amp * (mode * PI * x / l).sin(), 0.0),
            |_| Vec2::ZERO,
        )
        .unwrap()
    }

    #[test]
    fn trapezoid_and_gradient_are_exact_on_low_degree() {
        let h = 0.25;
        assert_abs_diff_eq!(
            trapezoid(h, [0.0, 1.0, 2.0, 3.0, 4.0].into_iter()),
            2.0,
            epsilon = 1e-15
        );
        assert_eq!(trapezoid(h, std::iter::empty()), 0.0);
        // u = x^2: one-sided second-order stencils are exact for quadratics
        let u: Vec<Vec2> = (0..5)
            .map(|j| Vec2::new((j as f64 * h).powi(2), 0.0))
            .collect();
        for (j, g) in gradient(&u, h).iter().enumerate() {
            assert_abs_diff_eq!(g.v, 2.0 * j as f64 * h, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_state_is_fixed() {
        let p = WaveParameters::new(1.0, 0.1, 1.0, 1.0).unwrap();
        let s = GridState::zeros(Grid::new(1.0, 11).unwrap());
        let next = fd_step(&s, &p, 0.01, 0.5).unwrap();
        assert!(next.u().iter().chain(next.ut()).all(|v| *v == Vec2::ZERO));
        let cfg = FdConfig {
            num_interior_points: 9,
            dt: 0.01,
            t_end: 0.5,
            safety_factor: 0.5,
            sample_interval: 0.1,
        };
        let traj = fd_integrate(&s, &p, &cfg).unwrap();
        assert_eq!(traj.len(), 6);
        assert!(traj.iter().all(|g| g.u().iter().all(|v| *v == Vec2::ZERO)));
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let p = WaveParameters::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let s = mode_state(&p, 9, 1.0, 0.1);
        let err = fd_step(&s, &p, 0.2, 0.5).unwrap_err();
        assert!(matches!(err, Error::Stability { .. }));
    }

    #[test]
    fn boundaries_stay_zero_and_energy_conserved_without_damping() {
        let p = WaveParameters::new(PI, 0.0, 1.0, 0.0).unwrap();
        // refine dx and dt together at fixed Courant number
        let drift = |interior: usize| {
            let s0 = mode_state(&p, interior, 1.0, 1.0);
            let e0 = energy(&s0, &p);
            let cfg = FdConfig::from_energy_bound(&p, interior, e0, 0.5, 1.0, 0.05);
            let traj = fd_integrate(&s0, &p, &cfg).unwrap();
            for g in &traj {
                assert_eq!(g.u()[0], Vec2::ZERO);
                assert_eq!(*g.u().last().unwrap(), Vec2::ZERO);
            }
            traj.iter()
                .map(|g| (energy(g, &p) - e0).abs() / e0)
                .fold(0.0, f64::max)
        };
        let coarse = drift(63);
        let fine = drift(127);
        assert!(coarse < 1e-3, "drift {coarse}");
        assert!((coarse / fine).log2() > 1.8, "ratio {}", coarse / fine);
    }

    #[test]
    fn damped_single_mode_matches_closed_form() {
        let delta = 0.1;
        let p = WaveParameters::new(PI, delta, 1.0, 0.0).unwrap();
        let omega = (1.0 - delta * delta).sqrt();
        let err = |interior: usize| {
            let s0 = mode_state(&p, interior, 1.0, 1.0);
            let cfg = FdConfig::from_energy_bound(&p, interior, energy(&s0, &p), 0.5, 2.0, 2.0);
            let last = fd_integrate(&s0, &p, &cfg).unwrap().pop().unwrap();
            let t = last.time;
            let amp = (-delta * t).exp() * ((omega * t).cos() + delta / omega * (omega * t).sin());
            let mid = interior.div_ceil(2);
            (last.u()[mid].v - amp).abs()
        };
        let (e1, e2) = (err(63), err(127));
        assert!(e2 < 1e-4);
        assert!(((e1 / e2).log2() - 2.0).abs() < 0.2, "ratio {}", e1 / e2);
    }

    #[test]
    fn damping_dissipates_energy() {
        let p = WaveParameters::new(1.0, 0.3, 1.0, 2.0).unwrap();
        let grid = Grid::new(1.0, 101).unwrap();
        let s0 = GridState::from_profiles(
            grid,
            |x| Vec2::new(0.2 * (PI * x).sin(), 0.1 * (2.0 * PI * x).sin()),
            |x| Vec2::new(0.0, 0.3 * (PI * x).sin()),
        )
        .unwrap();
        let cfg = FdConfig::from_energy_bound(&p, 99, energy(&s0, &p), 0.5, 2.0, 0.01);
        let e: Vec<f64> = fd_integrate(&s0, &p, &cfg)
            .unwrap()
            .iter()
            .map(|g| energy(g, &p))
            .collect();
        let e0 = e[0];
        for w in e.windows(2) {
            assert!(w[1] <= w[0] + 1e-5 * e0);
        }
        assert!(e.last().unwrap() < &(0.5 * e0));
    }

    #[test]
    fn scalar_bound_inverts_energy_relation() {
        let p = WaveParameters::new(1.0, 0.0, 2.0, 3.0).unwrap();
        let s = kirchhoff_scalar_bound(5.0, &p);
        assert_abs_diff_eq!(0.5 * 2.0 * s + 0.25 * 3.0 * s * s, 5.0, epsilon = 1e-13);
        let lin = p.with_b_coeff(0.0).unwrap();
        assert_abs_diff_eq!(kirchhoff_scalar_bound(5.0, &lin), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn identical_zero_trajectories_have_no_discrepancy() {
        let m = vec![ModalState::zeros(1.0, 4).unwrap()];
        let f = vec![GridState::zeros(Grid::new(1.0, 9).unwrap())];
        let r = compare_solvers(&m, &f).unwrap();
        assert_eq!((r.max_abs, r.max_l2), (0.0, 0.0));
    }

    #[test]
    fn misaligned_trajectories_are_rejected() {
        let mut late = ModalState::zeros(1.0, 4).unwrap();
        late.time = 0.5;
        let f = vec![GridState::zeros(Grid::new(1.0, 9).unwrap())];
        assert!(matches!(
            compare_solvers(&[late], &f),
            Err(Error::Alignment(_))
        ));
        assert!(matches!(compare_solvers(&[], &f), Err(Error::Alignment(_))));
    }
}
