//! Run and sweep configuration.
//!
//! A configuration is a TOML document with the sections `[parameters]` (or
//! `[physical]`), `[initial]`, `[solver]`, `[monitor]`, `[output]` and an
//! optional `[sweep]`. Unknown keys are rejected and every validation error
//! carries the dotted key path of the offending entry.

use std::path::PathBuf;

use kirchhoff_core::certificate::DEFAULT_KAPPA;
use kirchhoff_core::fd::DEFAULT_SAFETY;
use kirchhoff_core::modal::DEFAULT_MODES;
use kirchhoff_core::{derive_wave_parameters, Error as CoreError, PhysicalString, WaveParameters};
use serde::Deserialize;

use crate::initial::{Component, InitialCondition};

/// A configuration problem located at a dotted key path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

fn from_core(section: &str, err: CoreError) -> ConfigError {
    match err {
        CoreError::ParameterDomain { name, .. } => {
            ConfigError::new(format!("{section}.{name}"), err.to_string())
        }
        other => ConfigError::new(section, other.to_string()),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    parameters: Option<RawWave>,
    physical: Option<RawPhysical>,
    initial: RawInitial,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    monitor: RawMonitor,
    #[serde(default)]
    output: RawOutput,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWave {
    length: f64,
    damping: f64,
    a_sq: f64,
    b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysical {
    tension: f64,
    density: f64,
    area: f64,
    youngs_modulus: f64,
    length: f64,
    damping: f64,
}

fn one() -> f64 {
    1.0
}

fn first_mode() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum RawInitial {
    SingleMode {
        #[serde(default = "first_mode")]
        mode: usize,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        component: Component,
    },
    PolynomialBump {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        component: Component,
    },
    RandomModes {
        #[serde(default = "four")]
        count: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default = "one")]
        amplitude: f64,
    },
}

fn four() -> usize {
    4
}

/// Which solver a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Modal,
    Fd,
    Both,
}

/// Time-stepping scheme of the modal solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    #[default]
    Rk4,
    Adaptive,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    #[serde(default)]
    kind: SolverKind,
    #[serde(default = "default_modes")]
    modes: usize,
    #[serde(default)]
    scheme: SchemeKind,
    dt: Option<f64>,
    #[serde(default = "default_tolerance")]
    tolerance: f64,
    t_end: Option<f64>,
    sample_interval: Option<f64>,
    #[serde(default = "default_fd_points")]
    fd_points: usize,
    #[serde(default = "default_safety")]
    fd_safety: f64,
    fd_dt: Option<f64>,
}

fn default_modes() -> usize {
    DEFAULT_MODES
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_fd_points() -> usize {
    255
}

fn default_safety() -> f64 {
    DEFAULT_SAFETY
}

impl Default for RawSolver {
    fn default() -> Self {
        RawSolver {
            kind: SolverKind::default(),
            modes: default_modes(),
            scheme: SchemeKind::default(),
            dt: None,
            tolerance: default_tolerance(),
            t_end: None,
            sample_interval: None,
            fd_points: default_fd_points(),
            fd_safety: default_safety(),
            fd_dt: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawEpsilon {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonitor {
    epsilon: Option<RawEpsilon>,
    #[serde(default = "default_kappa")]
    kappa: f64,
    #[serde(default = "default_certificate_tolerance")]
    tolerance: f64,
    #[serde(default = "default_margin_tolerance")]
    margin_tolerance: f64,
}

fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}

fn default_certificate_tolerance() -> f64 {
    1e-6
}

fn default_margin_tolerance() -> f64 {
    1e-10
}

impl Default for RawMonitor {
    fn default() -> Self {
        RawMonitor {
            epsilon: None,
            kappa: default_kappa(),
            tolerance: default_certificate_tolerance(),
            margin_tolerance: default_margin_tolerance(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<PathBuf>,
    report: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    damping: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    amplitude: Option<Vec<f64>>,
    seed: Option<Vec<u64>>,
    #[serde(default = "first_mode")]
    workers: usize,
}

/// Modal time-stepping choice after validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeChoice {
    /// Fixed-step RK4; `None` picks a step from the initial state.
    Rk4 {
        dt: Option<f64>,
    },
    Adaptive {
        tolerance: f64,
    },
}

/// Finite-difference settings after validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSettings {
    pub interior_points: usize,
    pub safety: f64,
    /// `None` derives the step from the energy bound on the CFL limit.
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub kind: SolverKind,
    pub modes: usize,
    pub scheme: SchemeChoice,
    pub t_end: Option<f64>,
    pub sample_interval: Option<f64>,
    pub fd: FdSettings,
}

/// How the Lyapunov weight is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    Auto,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSettings {
    pub epsilon: EpsilonPolicy,
    pub kappa: f64,
    pub tolerance: f64,
    pub margin_tolerance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// A validated single-run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: WaveParameters,
    pub initial: InitialCondition,
    pub solver: SolverSettings,
    pub monitor: MonitorSettings,
    pub output: OutputPaths,
}

/// A validated sweep: the cartesian product of the axes applied to a template.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub template: RunConfig,
    pub damping: Vec<f64>,
    pub b: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub seed: Vec<u64>,
    pub workers: usize,
}

/// Command-line overrides applied on top of a parsed document.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub modes: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub kappa: Option<f64>,
}

fn parse_document(text: &str) -> Result<RawDocument, ConfigError> {
    let de = toml::Deserializer::parse(text)
        .map_err(|e| ConfigError::new("<document>", e.to_string()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            "<document>".to_string()
        } else {
            path
        };
        ConfigError::new(path, e.into_inner().to_string())
    })
}

fn positive(path: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::new(
            path,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

fn non_negative(path: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::new(
            path,
            format!("must be finite and >= 0, got {value}"),
        ))
    }
}

fn finite(path: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::new(
            path,
            format!("must be finite, got {value}"),
        ))
    }
}

fn kappa(path: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(ConfigError::new(
            path,
            format!("must lie in (0, 1), got {value}"),
        ))
    }
}

fn validate_parameters(doc: &RawDocument) -> Result<WaveParameters, ConfigError> {
    match (&doc.parameters, &doc.physical) {
        (Some(w), None) => WaveParameters::new(w.length, w.damping, w.a_sq, w.b)
            .map_err(|e| from_core("parameters", e)),
        (None, Some(p)) => derive_wave_parameters(&PhysicalString {
            tension: p.tension,
            density: p.density,
            area: p.area,
            youngs_modulus: p.youngs_modulus,
            length: p.length,
            damping: p.damping,
        })
        .map_err(|e| from_core("physical", e)),
        (Some(_), Some(_)) => Err(ConfigError::new(
            "parameters",
            "give exactly one of [parameters] and [physical], not both",
        )),
        (None, None) => Err(ConfigError::new(
            "parameters",
            "missing: give [parameters] or [physical]",
        )),
    }
}

fn validate_initial(raw: &RawInitial) -> Result<InitialCondition, ConfigError> {
    match *raw {
        RawInitial::SingleMode {
            mode,
            amplitude,
            component,
        } => {
            if mode == 0 {
                return Err(ConfigError::new("initial.mode", "mode numbers start at 1"));
            }
            Ok(InitialCondition::SingleMode {
                mode,
                amplitude: finite("initial.amplitude", amplitude)?,
                component,
            })
        }
        RawInitial::PolynomialBump {
            amplitude,
            component,
        } => Ok(InitialCondition::PolynomialBump {
            amplitude: finite("initial.amplitude", amplitude)?,
            component,
        }),
        RawInitial::RandomModes {
            count,
            seed,
            amplitude,
        } => {
            if count == 0 {
                return Err(ConfigError::new("initial.count", "must be at least 1"));
            }
            Ok(InitialCondition::RandomModes {
                count,
                seed,
                amplitude: finite("initial.amplitude", amplitude)?,
            })
        }
    }
}

fn validate_solver(raw: &RawSolver) -> Result<SolverSettings, ConfigError> {
    if raw.modes == 0 {
        return Err(ConfigError::new("solver.modes", "must be at least 1"));
    }
    if raw.fd_points == 0 {
        return Err(ConfigError::new("solver.fd_points", "must be at least 1"));
    }
    let scheme = match raw.scheme {
        SchemeKind::Rk4 => SchemeChoice::Rk4 {
            dt: raw.dt.map(|dt| positive("solver.dt", dt)).transpose()?,
        },
        SchemeKind::Adaptive => {
            if raw.dt.is_some() {
                return Err(ConfigError::new(
                    "solver.dt",
                    "fixed step given for the adaptive scheme",
                ));
            }
            SchemeChoice::Adaptive {
                tolerance: positive("solver.tolerance", raw.tolerance)?,
            }
        }
    };
    let fd_safety = positive("solver.fd_safety", raw.fd_safety)?;
    if fd_safety > 1.0 {
        return Err(ConfigError::new(
            "solver.fd_safety",
            format!("must not exceed 1, got {fd_safety}"),
        ));
    }
    if raw.kind == SolverKind::Modal && raw.fd_dt.is_some() {
        return Err(ConfigError::new(
            "solver.fd_dt",
            "finite-difference step given for a modal-only run",
        ));
    }
    Ok(SolverSettings {
        kind: raw.kind,
        modes: raw.modes,
        scheme,
        t_end: raw.t_end.map(|t| positive("solver.t_end", t)).transpose()?,
        sample_interval: raw
            .sample_interval
            .map(|s| positive("solver.sample_interval", s))
            .transpose()?,
        fd: FdSettings {
            interior_points: raw.fd_points,
            safety: fd_safety,
            dt: raw
                .fd_dt
                .map(|dt| positive("solver.fd_dt", dt))
                .transpose()?,
        },
    })
}

fn validate_monitor(raw: &RawMonitor) -> Result<MonitorSettings, ConfigError> {
    let epsilon = match &raw.epsilon {
        None => EpsilonPolicy::Auto,
        Some(RawEpsilon::Keyword(k)) if k == "auto" => EpsilonPolicy::Auto,
        Some(RawEpsilon::Keyword(k)) => {
            return Err(ConfigError::new(
                "monitor.epsilon",
                format!("expected \"auto\" or a number, got \"{k}\""),
            ))
        }
        Some(RawEpsilon::Value(v)) => EpsilonPolicy::Explicit(positive("monitor.epsilon", *v)?),
    };
    Ok(MonitorSettings {
        epsilon,
        kappa: kappa("monitor.kappa", raw.kappa)?,
        tolerance: non_negative("monitor.tolerance", raw.tolerance)?,
        margin_tolerance: non_negative("monitor.margin_tolerance", raw.margin_tolerance)?,
    })
}

fn validate_run(doc: &RawDocument) -> Result<RunConfig, ConfigError> {
    let params = validate_parameters(doc)?;
    let monitor = validate_monitor(&doc.monitor)?;
    if let EpsilonPolicy::Explicit(eps) = monitor.epsilon {
        let limit = params.fundamental_frequency();
        if eps >= limit {
            return Err(ConfigError::new(
                "monitor.epsilon",
                format!("must be below pi*a/l = {limit}, got {eps}"),
            ));
        }
    }
    Ok(RunConfig {
        params,
        initial: validate_initial(&doc.initial)?,
        solver: validate_solver(&doc.solver)?,
        monitor,
        output: OutputPaths {
            csv: doc.output.csv.clone(),
            report: doc.output.report.clone(),
        },
    })
}

/// Parses and validates a single-run configuration. A `[sweep]` section is
/// accepted and ignored.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    validate_run(&parse_document(text)?)
}

fn axis<T: Copy>(path: &str, values: &Option<Vec<T>>, template: T) -> Result<Vec<T>, ConfigError> {
    match values {
        None => Ok(vec![template]),
        Some(v) if v.is_empty() => Err(ConfigError::new(path, "empty grid axis")),
        Some(v) => Ok(v.clone()),
    }
}

/// Parses and validates a sweep. Axes missing from `[sweep]` (or a missing
/// section) fall back to the single value in the template.
pub fn parse_sweep(text: &str) -> Result<SweepConfig, ConfigError> {
    let doc = parse_document(text)?;
    let template = validate_run(&doc)?;
    let empty = RawSweep {
        damping: None,
        b: None,
        amplitude: None,
        seed: None,
        workers: 1,
    };
    let raw = doc.sweep.as_ref().unwrap_or(&empty);
    let sweep = SweepConfig {
        damping: axis("sweep.damping", &raw.damping, template.params.damping())?,
        b: axis("sweep.b", &raw.b, template.params.b_coeff())?,
        amplitude: axis(
            "sweep.amplitude",
            &raw.amplitude,
            template.initial.amplitude(),
        )?,
        seed: axis(
            "sweep.seed",
            &raw.seed,
            template.initial.seed().unwrap_or(0),
        )?,
        workers: raw.workers,
        template,
    };
    if sweep.workers == 0 {
        return Err(ConfigError::new("sweep.workers", "must be at least 1"));
    }
    for (i, &d) in sweep.damping.iter().enumerate() {
        non_negative(&format!("sweep.damping[{i}]"), d)?;
    }
    for (i, &b) in sweep.b.iter().enumerate() {
        non_negative(&format!("sweep.b[{i}]"), b)?;
    }
    for (i, &a) in sweep.amplitude.iter().enumerate() {
        finite(&format!("sweep.amplitude[{i}]"), a)?;
    }
    Ok(sweep)
}

impl RunConfig {
    /// Applies command-line overrides and re-checks the affected invariants.
    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(seed) = o.seed {
            self.initial = self.initial.with_seed(seed);
        }
        if let Some(modes) = o.modes {
            if modes == 0 {
                return Err(ConfigError::new("--modes", "must be at least 1"));
            }
            self.solver.modes = modes;
        }
        if let Some(dt) = o.dt {
            let dt = positive("--dt", dt)?;
            match self.solver.scheme {
                SchemeChoice::Rk4 { .. } => self.solver.scheme = SchemeChoice::Rk4 { dt: Some(dt) },
                SchemeChoice::Adaptive { .. } => {
                    return Err(ConfigError::new(
                        "--dt",
                        "fixed step given for the adaptive scheme",
                    ))
                }
            }
        }
        if let Some(t) = o.t_end {
            self.solver.t_end = Some(positive("--t-end", t)?);
        }
        if let Some(k) = o.kappa {
            self.monitor.kappa = kappa("--kappa", k)?;
        }
        Ok(())
    }
}

impl SweepConfig {
    /// Applies overrides to the template; `--seed` replaces the seed axis.
    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        self.template.apply(o)?;
        if let Some(seed) = o.seed {
            self.seed = vec![seed];
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.damping.len() * self.b.len() * self.amplitude.len() * self.seed.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [parameters]
        length = 3.141592653589793
        damping = 0.1
        a_sq = 1
        b = 0.5

        [initial]
        preset = "single_mode"
    "#;

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.solver.kind, SolverKind::Modal);
        assert_eq!(cfg.solver.modes, DEFAULT_MODES);
        assert_eq!(cfg.solver.scheme, SchemeChoice::Rk4 { dt: None });
        assert_eq!(cfg.monitor.epsilon, EpsilonPolicy::Auto);
        assert_eq!(cfg.monitor.kappa, DEFAULT_KAPPA);
        assert_eq!(
            cfg.initial,
            InitialCondition::SingleMode {
                mode: 1,
                amplitude: 1.0,
                component: Component::V
            }
        );
        assert_eq!(cfg.params.a_sq(), 1.0);
    }

    #[test]
    fn negative_damping_is_rejected_with_path() {
        let err = parse_config(&MINIMAL.replace("damping = 0.1", "damping = -1")).unwrap_err();
        assert_eq!(err.path, "parameters.damping");
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let err = parse_config(&format!("{MINIMAL}\n[solver]\nmodez = 3\n")).unwrap_err();
        assert_eq!(err.path, "solver.modez");
        assert!(err.message.contains("modez"), "{err}");
        let err = parse_config(&format!("{MINIMAL}\n[extra]\n")).unwrap_err();
        assert!(err.message.contains("extra"), "{err}");
    }

    #[test]
    fn wrong_types_report_the_key() {
        let err = parse_config(&format!("{MINIMAL}\n[solver]\nmodes = \"many\"\n")).unwrap_err();
        assert_eq!(err.path, "solver.modes");
    }

    #[test]
    fn exactly_one_parameter_source() {
        let both = format!(
            "{MINIMAL}\n[physical]\ntension = 1\ndensity = 1\narea = 1\nyoungs_modulus = 1\nlength = 1\ndamping = 0\n"
        );
        assert_eq!(parse_config(&both).unwrap_err().path, "parameters");
        let none = "[initial]\npreset = \"single_mode\"\n";
        assert_eq!(parse_config(none).unwrap_err().path, "parameters");
    }

    #[test]
    fn physical_parameters_are_derived() {
        let text = r#"
            [physical]
            tension = 4
            density = 1
            area = 1
            youngs_modulus = 2
            length = 2
            damping = 0.3
            [initial]
            preset = "polynomial_bump"
            amplitude = 0.5
            component = "w"
        "#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.params.a_sq(), 4.0);
        assert_eq!(cfg.params.b_coeff(), 0.5);
        assert_eq!(cfg.params.damping(), 0.3);
    }

    #[test]
    fn both_solvers_round_trip() {
        let text = format!(
            "{MINIMAL}\n[solver]\nkind = \"both\"\nscheme = \"adaptive\"\ntolerance = 1e-9\nfd_points = 127\n"
        );
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.solver.kind, SolverKind::Both);
        assert_eq!(
            cfg.solver.scheme,
            SchemeChoice::Adaptive { tolerance: 1e-9 }
        );
        assert_eq!(cfg.solver.fd.interior_points, 127);
    }

    #[test]
    fn epsilon_policy_parses() {
        let explicit = parse_config(&format!("{MINIMAL}\n[monitor]\nepsilon = 0.05\n")).unwrap();
        assert_eq!(explicit.monitor.epsilon, EpsilonPolicy::Explicit(0.05));
        let auto = parse_config(&format!("{MINIMAL}\n[monitor]\nepsilon = \"auto\"\n")).unwrap();
        assert_eq!(auto.monitor.epsilon, EpsilonPolicy::Auto);
        let bad = parse_config(&format!("{MINIMAL}\n[monitor]\nepsilon = \"fast\"\n")).unwrap_err();
        assert_eq!(bad.path, "monitor.epsilon");
        let too_big = parse_config(&format!("{MINIMAL}\n[monitor]\nepsilon = 1.5\n")).unwrap_err();
        assert_eq!(too_big.path, "monitor.epsilon");
        let kappa = parse_config(&format!("{MINIMAL}\n[monitor]\nkappa = 1.0\n")).unwrap_err();
        assert_eq!(kappa.path, "monitor.kappa");
    }

    #[test]
    fn adaptive_scheme_rejects_fixed_step() {
        let text = format!("{MINIMAL}\n[solver]\nscheme = \"adaptive\"\ndt = 0.01\n");
        assert_eq!(parse_config(&text).unwrap_err().path, "solver.dt");
    }

    #[test]
    fn random_preset_and_overrides() {
        let text = MINIMAL.replace(
            "preset = \"single_mode\"",
            "preset = \"random_modes\"\ncount = 3\nseed = 9",
        );
        let mut cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.initial.seed(), Some(9));
        cfg.apply(&Overrides {
            seed: Some(4),
            modes: Some(8),
            dt: Some(1e-3),
            t_end: Some(2.0),
            kappa: Some(0.5),
        })
        .unwrap();
        assert_eq!(cfg.initial.seed(), Some(4));
        assert_eq!(cfg.solver.modes, 8);
        assert_eq!(cfg.solver.scheme, SchemeChoice::Rk4 { dt: Some(1e-3) });
        assert_eq!(cfg.solver.t_end, Some(2.0));
        assert_eq!(cfg.monitor.kappa, 0.5);
        assert_eq!(
            cfg.apply(&Overrides {
                kappa: Some(2.0),
                ..Overrides::default()
            })
            .unwrap_err()
            .path,
            "--kappa"
        );
    }

    #[test]
    fn sweep_axes_default_to_template() {
        let s = parse_sweep(MINIMAL).unwrap();
        assert_eq!(s.num_cells(), 1);
        assert_eq!(s.damping, vec![0.1]);
        assert_eq!(s.b, vec![0.5]);

        let text = format!(
            "{MINIMAL}\n[sweep]\ndamping = [0.05, 0.2, 0.5]\nb = [0, 0.5, 2]\nworkers = 3\n"
        );
        let s = parse_sweep(&text).unwrap();
        assert_eq!(s.num_cells(), 9);
        assert_eq!(s.workers, 3);

        let empty = format!("{MINIMAL}\n[sweep]\nb = []\n");
        assert_eq!(parse_sweep(&empty).unwrap_err().path, "sweep.b");
        let negative = format!("{MINIMAL}\n[sweep]\ndamping = [0.1, -0.2]\n");
        assert_eq!(parse_sweep(&negative).unwrap_err().path, "sweep.damping[1]");
    }
}
