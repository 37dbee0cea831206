use thiserror::Error;

/// Errors raised by the solvers, monitors and certificate evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {name} = {value} ({reason})")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "boundary condition violated: field is {value:e} at x = {x} (fixed ends require zero)"
    )]
    BoundaryCondition { x: f64, value: f64 },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("step size underflow at t = {t}: h = {h:e}")]
    Stiffness { t: f64, h: f64 },

    #[error("solution diverged (non-finite state) at t = {t}")]
    Divergence { t: f64 },

    #[error("stability limit exceeded at t = {t}: dt = {dt:e} > {limit:e}")]
    Stability { t: f64, dt: f64, limit: f64 },

    #[error("sample alignment: {0}")]
    Alignment(String),

    #[error("no decay certificate: damping must satisfy delta > 0 for exponential decay, got delta = {delta}")]
    NoCertificate { delta: f64 },

    #[error("epsilon = {epsilon} must lie in (0, pi*a/l = {limit})")]
    EpsilonDomain { epsilon: f64, limit: f64 },

    #[error("inconsistent trajectory: {0}")]
    InconsistentTrajectory(String),
}

pub type Result<T> = std::result::Result<T, Error>;
