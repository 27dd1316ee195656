use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {path}: {msg}")]
    Config { path: String, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("numerical failure in frame v/c = {beta}: {source}")]
    Numerical { beta: f64, source: abflux_core::Error },

    #[error("{failed} of {total} verification cases failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 1 for a failed verification or computation, 2 for bad input or IO.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => 2,
            CliError::Numerical { .. } | CliError::Verification { .. } => 1,
        }
    }
}
