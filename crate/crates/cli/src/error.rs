use std::path::PathBuf;

/// CLI failure classes; each maps to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{stage} failed: {source}")]
    Numeric {
        stage: &'static str,
        #[source]
        source: tube_diffusion::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: &str, err: tube_diffusion::Error) -> Self {
        CliError::Config {
            field: field.into(),
            reason: err.to_string(),
        }
    }

    pub fn numeric(stage: &'static str) -> impl FnOnce(tube_diffusion::Error) -> Self {
        move |source| CliError::Numeric { stage, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numeric { .. } | CliError::Io { .. } => 3,
        }
    }
}
