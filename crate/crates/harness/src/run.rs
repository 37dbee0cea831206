//! Simulation and certification runs and their rendered outputs.

use std::io::Write;

use kirchhoff_core::certificate::{
    amplitude_bound, certify, mu0, mu_max, CertificateReport, DecayConstants,
};
use kirchhoff_core::energy::{
    attach_dissipation_residuals, energy, energy_sample, EnergySample, InequalityMargins,
    MonitorConfig,
};
use kirchhoff_core::fd::{
    fd_integrate, fd_integrate_with, snapshot_discrepancy, Discrepancy, FdConfig,
};
use kirchhoff_core::modal::{
    default_time_step, integrate_with, project_initial_data, IntegratorConfig, Scheme,
};
use kirchhoff_core::{Error as CoreError, Grid, GridState, WaveParameters};

use crate::config::{EpsilonPolicy, RunConfig, SchemeChoice, SolverKind};
use crate::error::HarnessError;

/// Time-series columns written for every run.
pub const TIME_SERIES_HEADER: [&str; 13] = [
    "t",
    "E",
    "G",
    "V",
    "kinetic",
    "grad_sq",
    "amp_sq",
    "dE_residual",
    "scheefer_margin",
    "sandwich_lo",
    "sandwich_hi",
    "bound_ME_exp",
    "amp_bound",
];

/// Extra columns appended when both solvers run.
pub const DISCREPANCY_HEADER: [&str; 3] = ["E_fd", "u_max_diff", "u_l2_diff"];

/// Default horizon in decay times `1 / mu` when certifying.
pub const DECAY_TIMES: f64 = 10.0;

/// Horizon and sample count used when no certificate is available.
const UNCERTIFIED_T_END: f64 = 10.0;
const UNCERTIFIED_SAMPLES: f64 = 1000.0;

/// Renders a double with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// Everything a simulation produced.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub params: WaveParameters,
    pub solver: SolverKind,
    /// Samples of the modal solver, or of the FD solver in an FD-only run.
    pub samples: Vec<EnergySample>,
    /// Per-sample FD energy and discrepancy when both solvers ran.
    pub comparison: Option<Vec<(f64, Discrepancy)>>,
    pub constants: Option<DecayConstants>,
    /// Weight of `G` in the monitored `V = E + eps G`.
    pub epsilon: f64,
    pub certificate: Option<CertificateReport>,
    /// Pointwise minimum of the relative inequality margins.
    pub min_margins: InequalityMargins,
    pub margin_tolerance: f64,
    pub t_end: f64,
    pub sample_interval: f64,
}

impl Simulation {
    pub fn initial_energy(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.energy)
    }

    /// Inequality verdict of the modal trajectory. `None` for FD-only runs,
    /// whose grid functionals satisfy the inequalities only up to O(dx^2).
    pub fn margins_pass(&self) -> Option<bool> {
        (self.solver != SolverKind::Fd).then(|| self.min_margins.min() >= -self.margin_tolerance)
    }

    /// True when every verdict that was evaluated passed.
    pub fn passed(&self) -> bool {
        self.margins_pass().unwrap_or(true)
            && self
                .certificate
                .as_ref()
                .is_none_or(|c| c.verdict && c.amplitude_verdict)
    }

    pub fn max_l2_discrepancy(&self) -> Option<f64> {
        self.comparison
            .as_ref()
            .map(|c| c.iter().map(|(_, d)| d.l2).fold(0.0, f64::max))
    }
}

fn decay_constants(cfg: &RunConfig) -> Result<Option<DecayConstants>, CoreError> {
    let p = &cfg.params;
    if p.damping() == 0.0 {
        return Ok(None);
    }
    match cfg.monitor.epsilon {
        EpsilonPolicy::Auto => DecayConstants::auto(p, cfg.monitor.kappa).map(Some),
        EpsilonPolicy::Explicit(eps) => DecayConstants::new(p, eps).map(Some),
    }
}

fn monitor_epsilon(cfg: &RunConfig, constants: Option<&DecayConstants>) -> f64 {
    match (constants, cfg.monitor.epsilon) {
        (Some(c), _) => c.epsilon,
        (None, EpsilonPolicy::Explicit(eps)) => eps,
        (None, EpsilonPolicy::Auto) => cfg.monitor.kappa * cfg.params.fundamental_frequency(),
    }
}

fn fd_config(cfg: &RunConfig, g0: &GridState, t_end: f64, interval: f64) -> FdConfig {
    let fd = &cfg.solver.fd;
    let mut out = FdConfig::from_energy_bound(
        &cfg.params,
        fd.interior_points,
        energy(g0, &cfg.params),
        fd.safety,
        t_end,
        interval,
    );
    if let Some(dt) = fd.dt {
        out.dt = dt;
    }
    out
}

/// Runs the configured solver(s) and evaluates every monitor.
pub fn run_simulate(cfg: &RunConfig) -> Result<Simulation, HarnessError> {
    let p = &cfg.params;
    let constants = decay_constants(cfg)?;
    let epsilon = monitor_epsilon(cfg, constants.as_ref());
    let monitor = MonitorConfig::new(epsilon, cfg.monitor.margin_tolerance)?;
    let t_end = cfg
        .solver
        .t_end
        .unwrap_or_else(|| constants.map_or(UNCERTIFIED_T_END, |c| DECAY_TIMES / c.mu));
    let interval = cfg.solver.sample_interval.unwrap_or_else(|| {
        constants.map_or(t_end / UNCERTIFIED_SAMPLES, |c| {
            c.sample_interval().min(t_end)
        })
    });

    let profile = cfg.initial.profile(p.length());
    let u0 = |x: f64| profile.displacement(x);
    let u1 = |x: f64| profile.velocity(x);

    let fd_run = if cfg.solver.kind == SolverKind::Modal {
        None
    } else {
        let grid = Grid::new(p.length(), cfg.solver.fd.interior_points + 2)?;
        let g0 = GridState::from_profiles(grid, u0, u1)?;
        Some((g0.clone(), fd_config(cfg, &g0, t_end, interval)))
    };

    let mut samples = Vec::new();
    let mut comparison = None;
    if cfg.solver.kind == SolverKind::Fd {
        let (g0, fd_cfg) = fd_run.as_ref().expect("FD run configured");
        fd_integrate_with(g0, p, fd_cfg, |s| {
            samples.push(energy_sample(s, p, &monitor));
            Ok(())
        })?;
    } else {
        let fd_states = match &fd_run {
            Some((g0, fd_cfg)) => Some(fd_integrate(g0, p, fd_cfg)?),
            None => None,
        };
        let s0 = project_initial_data(u0, u1, p.length(), cfg.solver.modes, 0)?;
        let scheme = match cfg.solver.scheme {
            SchemeChoice::Rk4 { dt } => Scheme::Rk4 {
                dt: dt.unwrap_or_else(|| default_time_step(&s0, p)),
            },
            SchemeChoice::Adaptive { tolerance } => Scheme::Adaptive {
                rtol: tolerance,
                atol: tolerance,
            },
        };
        let integrator = IntegratorConfig {
            scheme,
            t_end,
            sample_interval: interval,
        };
        let mut pairs = Vec::new();
        integrate_with(&s0, p, &integrator, |s| {
            if let Some(fd) = &fd_states {
                let g = &fd[samples.len()];
                pairs.push((energy(g, p), snapshot_discrepancy(s, g)?));
            }
            samples.push(energy_sample(s, p, &monitor));
            Ok(())
        })?;
        if fd_states.is_some() {
            comparison = Some(pairs);
        }
    }

    if samples.len() >= 3 {
        attach_dissipation_residuals(&mut samples, p)?;
    }
    let certificate = match &constants {
        Some(c) => Some(certify(&samples, c, p, cfg.monitor.tolerance)?),
        None => None,
    };
    let min_margins = samples
        .iter()
        .fold(InequalityMargins::unbounded(), |acc, s| {
            acc.meet(&s.relative_margins())
        });
    Ok(Simulation {
        params: *p,
        solver: cfg.solver.kind,
        samples,
        comparison,
        constants,
        epsilon,
        certificate,
        min_margins,
        margin_tolerance: cfg.monitor.margin_tolerance,
        t_end,
        sample_interval: interval,
    })
}

/// Runs a simulation that must end in a certificate; zero damping is an error.
pub fn run_certify(cfg: &RunConfig) -> Result<Simulation, HarnessError> {
    if cfg.params.damping() == 0.0 {
        return Err(CoreError::NoCertificate { delta: 0.0 }.into());
    }
    run_simulate(cfg)
}

/// Writes the time series with 17 significant digits.
pub fn write_time_series<W: Write>(sim: &Simulation, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = TIME_SERIES_HEADER.to_vec();
    if sim.comparison.is_some() {
        header.extend(DISCREPANCY_HEADER);
    }
    w.write_record(&header)?;
    let e0 = sim.initial_energy();
    let t0 = sim.samples.first().map_or(0.0, |s| s.time);
    for (k, s) in sim.samples.iter().enumerate() {
        let bound = sim.constants.map(|c| c.energy_bound(s.time - t0, e0));
        let amp = sim
            .constants
            .map(|c| amplitude_bound(s.time - t0, &c, &sim.params, e0));
        let mut row = vec![
            num(s.time),
            num(s.energy),
            num(s.lyapunov_g),
            num(s.lyapunov_v),
            num(s.kinetic),
            num(s.grad_sq),
            num(s.amp_sq),
            opt(s.dissipation_residual),
            num(s.margins.scheefer),
            num(s.margins.sandwich_lo),
            num(s.margins.sandwich_hi),
            opt(bound),
            opt(amp),
        ];
        if let Some(c) = &sim.comparison {
            let (e_fd, d) = c[k];
            row.extend([num(e_fd), num(d.max_abs), num(d.l2)]);
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| HarnessError::io("<csv>", e))?;
    Ok(())
}

fn push(out: &mut String, key: &str, value: impl std::fmt::Display) {
    out.push_str(&format!("{key} = {value}\n"));
}

fn push_constants(out: &mut String, c: &DecayConstants, params: &WaveParameters) {
    push(out, "epsilon", num(c.epsilon));
    push(out, "mu0", num(c.mu0));
    push(out, "mu", num(c.mu));
    push(
        out,
        "mu_over_pi_a_over_l",
        num(c.mu / params.fundamental_frequency()),
    );
    push(out, "M", num(c.big_m));
}

/// Key-value summary of a run: inputs, constants and verdicts.
pub fn render_summary(sim: &Simulation) -> String {
    let mut out = String::new();
    let solver = match sim.solver {
        SolverKind::Modal => "modal",
        SolverKind::Fd => "fd",
        SolverKind::Both => "both",
    };
    push(&mut out, "solver", solver);
    push(&mut out, "samples", sim.samples.len());
    push(&mut out, "t_end", num(sim.t_end));
    push(&mut out, "sample_interval", num(sim.sample_interval));
    push(&mut out, "E0", num(sim.initial_energy()));
    push(
        &mut out,
        "dimensionless_damping",
        num(sim.params.dimensionless_damping()),
    );
    push(&mut out, "monitor_epsilon", num(sim.epsilon));
    match (&sim.constants, &sim.certificate) {
        (Some(c), Some(r)) => {
            push_constants(&mut out, c, &sim.params);
            push(
                &mut out,
                "max_normalized_ratio",
                num(r.max_normalized_ratio),
            );
            push(&mut out, "worst_sample_time", num(r.worst_sample_time));
            push(&mut out, "decay_verdict", verdict(r.verdict));
            push(&mut out, "amplitude_max_ratio", num(r.amplitude_max_ratio));
            push(
                &mut out,
                "amplitude_worst_time",
                num(r.amplitude_worst_time),
            );
            push(&mut out, "amplitude_verdict", verdict(r.amplitude_verdict));
            if let Some(note) = c.note() {
                push(&mut out, "note", note);
            }
        }
        _ => push(
            &mut out,
            "decay_verdict",
            "n/a (delta = 0, no decay certificate)",
        ),
    }
    push(&mut out, "min_relative_margin", num(sim.min_margins.min()));
    match sim.margins_pass() {
        Some(pass) => push(&mut out, "margin_verdict", verdict(pass)),
        None => push(&mut out, "margin_verdict", "n/a (grid functionals)"),
    }
    if let Some(l2) = sim.max_l2_discrepancy() {
        push(&mut out, "max_l2_discrepancy", num(l2));
    }
    push(&mut out, "verdict", verdict(sim.passed()));
    out
}

/// Columns of the one-row certificate CSV.
pub const CERTIFICATE_HEADER: [&str; 16] = [
    "length",
    "damping",
    "a_sq",
    "b",
    "dimensionless_damping",
    "epsilon",
    "mu0",
    "mu",
    "M",
    "E0",
    "max_normalized_ratio",
    "worst_sample_time",
    "decay_verdict",
    "amplitude_max_ratio",
    "amplitude_verdict",
    "min_relative_margin",
];

/// Writes the certificate as a header plus one row.
pub fn write_certificate_row<W: Write>(sim: &Simulation, out: W) -> Result<(), HarnessError> {
    let (c, r) = match (&sim.constants, &sim.certificate) {
        (Some(c), Some(r)) => (c, r),
        _ => {
            return Err(CoreError::NoCertificate {
                delta: sim.params.damping(),
            }
            .into())
        }
    };
    let p = &sim.params;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CERTIFICATE_HEADER)?;
    w.write_record([
        num(p.length()),
        num(p.damping()),
        num(p.a_sq()),
        num(p.b_coeff()),
        num(c.dimensionless_damping),
        num(c.epsilon),
        num(c.mu0),
        num(c.mu),
        num(c.big_m),
        num(sim.initial_energy()),
        num(r.max_normalized_ratio),
        num(r.worst_sample_time),
        verdict(r.verdict).to_string(),
        num(r.amplitude_max_ratio),
        verdict(r.amplitude_verdict).to_string(),
        num(sim.min_margins.min()),
    ])?;
    w.flush().map_err(|e| HarnessError::io("<csv>", e))?;
    Ok(())
}

/// Closed-form constants for a parameter set, no simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsTable {
    pub dimensionless_damping: f64,
    pub mu0: f64,
    /// `None` when `delta = 0`.
    pub constants: Option<DecayConstants>,
    pub mu_max: f64,
    pub cap: f64,
    pub fundamental_frequency: f64,
}

pub fn constants_table(cfg: &RunConfig) -> Result<ConstantsTable, HarnessError> {
    let p = &cfg.params;
    let m = mu_max(p);
    Ok(ConstantsTable {
        dimensionless_damping: p.dimensionless_damping(),
        mu0: mu0(p),
        constants: decay_constants(cfg)?,
        mu_max: m.value,
        cap: m.cap,
        fundamental_frequency: p.fundamental_frequency(),
    })
}

pub fn render_constants(t: &ConstantsTable) -> String {
    let mut out = String::new();
    push(
        &mut out,
        "dimensionless_damping",
        num(t.dimensionless_damping),
    );
    push(&mut out, "pi_a_over_l", num(t.fundamental_frequency));
    push(&mut out, "mu0", num(t.mu0));
    match &t.constants {
        Some(c) => {
            push(&mut out, "epsilon", num(c.epsilon));
            push(&mut out, "mu", num(c.mu));
            push(
                &mut out,
                "mu_over_pi_a_over_l",
                num(c.mu / t.fundamental_frequency),
            );
            push(&mut out, "M", num(c.big_m));
        }
        None => {
            for key in ["epsilon", "mu", "mu_over_pi_a_over_l", "M"] {
                push(&mut out, key, "n/a");
            }
        }
    }
    push(&mut out, "mu_max", num(t.mu_max));
    push(&mut out, "mu_max_cap", num(t.cap));
    if let Some(note) = t.constants.and_then(|c| c.note()) {
        push(&mut out, "note", note);
    } else if t.constants.is_none() {
        push(
            &mut out,
            "note",
            "delta = 0: no exponential decay certificate",
        );
    }
    out
}

/// Reads `key = value` lines back into pairs.
pub fn parse_key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|line| line.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use approx::assert_relative_eq;
    use kirchhoff_core::certificate::{decay_rate, overshoot_m};
    use std::f64::consts::PI;

    fn cfg(extra: &str, damping: f64, b: f64) -> RunConfig {
        parse_config(&format!(
            "[parameters]\nlength = {PI}\ndamping = {damping}\na_sq = 1\nb = {b}\n{extra}"
        ))
        .unwrap()
    }

    #[test]
    fn zero_initial_data_gives_zero_rows_and_passes() {
        let c = cfg(
            "[initial]\npreset = \"single_mode\"\namplitude = 0\n[solver]\nt_end = 1\nsample_interval = 0.1\n",
            0.2,
            1.0,
        );
        let sim = run_simulate(&c).unwrap();
        assert!(sim.passed());
        for s in &sim.samples {
            assert_eq!(s.energy, 0.0);
            assert_eq!(s.amp_sq, 0.0);
        }
        let mut buf = Vec::new();
        write_time_series(&sim, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), TIME_SERIES_HEADER.join(","));
        assert_eq!(text.lines().count(), 12);
    }

    #[test]
    fn single_mode_energy_matches_closed_form() {
        let delta = 0.1;
        let c = cfg(
            "[initial]\npreset = \"single_mode\"\namplitude = 0.5\n[solver]\nmodes = 4\ndt = 1e-3\nt_end = 5\nsample_interval = 0.05\n",
            delta,
            0.0,
        );
        let sim = run_simulate(&c).unwrap();
        let omega = (1.0 - delta * delta).sqrt();
        for s in &sim.samples {
            let t = s.time;
            let e = (-delta * t).exp();
            let b = 0.5 * e * ((omega * t).cos() + delta / omega * (omega * t).sin());
            let bd = -0.5 * e * (1.0 + delta * delta / (omega * omega)) * omega * (omega * t).sin();
            let exact = 0.5 * (PI / 2.0) * (bd * bd + b * b);
            assert!((s.energy - exact).abs() <= 1e-6, "t = {t}");
        }
    }

    #[test]
    fn both_solvers_add_discrepancy_columns() {
        let c = cfg(
            "[initial]\npreset = \"single_mode\"\namplitude = 0.3\n[solver]\nkind = \"both\"\nmodes = 8\nt_end = 0.5\nsample_interval = 0.1\nfd_points = 63\n",
            0.1,
            0.5,
        );
        let sim = run_simulate(&c).unwrap();
        let mut buf = Vec::new();
        write_time_series(&sim, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .lines()
            .next()
            .unwrap()
            .ends_with("amp_bound,E_fd,u_max_diff,u_l2_diff"));
        assert!(sim.max_l2_discrepancy().unwrap() < 1e-2);
        assert!(render_summary(&sim).contains("max_l2_discrepancy = "));
    }

    #[test]
    fn fd_only_run_certifies() {
        let c = cfg(
            "[initial]\npreset = \"polynomial_bump\"\namplitude = 0.2\n[solver]\nkind = \"fd\"\nfd_points = 63\nt_end = 2\n",
            0.3,
            1.0,
        );
        let sim = run_simulate(&c).unwrap();
        assert!(sim.passed(), "{}", render_summary(&sim));
    }

    #[test]
    fn certify_rejects_zero_damping() {
        let c = cfg("[initial]\npreset = \"single_mode\"\n", 0.0, 1.0);
        let err = run_certify(&c).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("delta > 0"), "{err}");
    }

    #[test]
    fn default_horizon_is_ten_decay_times() {
        let c = cfg(
            "[initial]\npreset = \"random_modes\"\nseed = 3\n[solver]\nmodes = 8\n",
            0.5,
            0.5,
        );
        let sim = run_certify(&c).unwrap();
        let mu = sim.constants.unwrap().mu;
        assert_relative_eq!(sim.t_end, 10.0 / mu, max_relative = 1e-15);
        assert!(sim.samples.len() >= 2001);
        assert!(sim.passed(), "{}", render_summary(&sim));
    }

    #[test]
    fn constants_at_optimum() {
        let d = std::f64::consts::FRAC_1_SQRT_2;
        let c = cfg("[initial]\npreset = \"single_mode\"\n", d, 0.0);
        let table = constants_table(&c).unwrap();
        let k = table.constants.unwrap();
        assert!((k.big_m - (1.0 + 2.0 * 2f64.sqrt()) / (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((k.mu - 2.0 / (1.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let kv = parse_key_values(&render_constants(&table));
        let m: f64 = kv
            .iter()
            .find(|(k, _)| k == "M")
            .unwrap()
            .1
            .parse()
            .unwrap();
        assert_eq!(m, k.big_m);
    }

    #[test]
    fn constants_match_direct_calls_and_small_damping_limit() {
        let c = cfg("[initial]\npreset = \"single_mode\"\n", 1e-6, 2.0);
        let t = constants_table(&c).unwrap();
        let k = t.constants.unwrap();
        assert_eq!(k.mu, decay_rate(k.epsilon, mu0(&c.params)));
        assert_eq!(k.big_m, overshoot_m(k.epsilon, k.mu0, &c.params).unwrap());
        assert_relative_eq!(k.mu, 2e-6, max_relative = 1e-5);
        assert_relative_eq!(k.big_m, 1.0, max_relative = 1e-5);

        let zero = cfg("[initial]\npreset = \"single_mode\"\n", 0.0, 2.0);
        let text = render_constants(&constants_table(&zero).unwrap());
        assert!(text.contains("M = n/a"));
    }

    #[test]
    fn strong_damping_carries_note() {
        let c = cfg("[initial]\npreset = \"single_mode\"\n", 1.5, 0.0);
        assert!(render_constants(&constants_table(&c).unwrap()).contains("note = delta exceeds"));
    }
}
