use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("csv format error at line {line}: {message}")]
    CsvFormat { line: usize, message: String },

    #[error("scenario `{scenario}`: {source}")]
    Engine {
        scenario: String,
        source: catphase_core::CoreError,
    },

    #[error(transparent)]
    Core(#[from] catphase_core::CoreError),

    #[error("plot error: {0}")]
    Plot(String),
}

impl HarnessError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for configuration problems, 3 for numerical
    /// aborts, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use catphase_core::CoreError;
        match self {
            HarnessError::Config(_) | HarnessError::ConfigParse(_) | HarnessError::CsvFormat { .. } => 2,
            HarnessError::Engine { source, .. } | HarnessError::Core(source) => match source {
                CoreError::TraceDrift { .. } | CoreError::NonFinite { .. } | CoreError::BrokenDensity { .. } => 3,
                _ => 2,
            },
            _ => 1,
        }
    }
}
