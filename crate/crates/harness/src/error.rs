use std::path::{Path, PathBuf};

use kirchhoff_core::Error as CoreError;

use crate::config::ConfigError;

/// Failures of a harness command, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Numerical(#[from] CoreError),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("worker pool: {0}")]
    Pool(String),
}

impl HarnessError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    /// 2 for anything the user can fix in the configuration, 3 for
    /// numerical breakdown of a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_)
            | HarnessError::Io { .. }
            | HarnessError::Csv(_)
            | HarnessError::Pool(_) => 2,
            HarnessError::Numerical(e) => match e {
                CoreError::ParameterDomain { .. }
                | CoreError::BoundaryCondition { .. }
                | CoreError::Config(_)
                | CoreError::NoCertificate { .. }
                | CoreError::EpsilonDomain { .. } => 2,
                CoreError::Stiffness { .. }
                | CoreError::Divergence { .. }
                | CoreError::Stability { .. }
                | CoreError::Alignment(_)
                | CoreError::InconsistentTrajectory(_) => 3,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(
            HarnessError::from(ConfigError::new("a", "b")).exit_code(),
            2
        );
        assert_eq!(
            HarnessError::from(CoreError::NoCertificate { delta: 0.0 }).exit_code(),
            2
        );
        assert_eq!(
            HarnessError::from(CoreError::Divergence { t: 1.0 }).exit_code(),
            3
        );
        assert_eq!(
            HarnessError::from(CoreError::Stability {
                t: 1.0,
                dt: 0.1,
                limit: 0.01
            })
            .exit_code(),
            3
        );
    }
}
