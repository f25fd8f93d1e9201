use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}:{line}:{column}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config key `{key}`: {message}")]
    Invalid { key: String, message: String },
    /// A library failure while acting on the named config key.
    #[error("config key `{key}`: {source}")]
    Model {
        key: String,
        #[source]
        source: slowlight_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl ScenarioError {
    pub(crate) fn model(key: &str) -> impl FnOnce(slowlight_core::Error) -> Self + '_ {
        move |source| ScenarioError::Model { key: key.into(), source }
    }

    /// True for failures of the physics itself (no root, blow-up), as opposed
    /// to malformed input.
    pub fn is_no_solution(&self) -> bool {
        use slowlight_core::Error as E;
        matches!(
            self,
            ScenarioError::Model {
                source: E::NoSolution(_) | E::NoRealRoot { .. } | E::Diverged { .. } | E::Numeric { .. },
                ..
            }
        )
    }
}

pub type ScenarioResult<T> = std::result::Result<T, ScenarioError>;
