//! CLI error type carrying the process exit code.

use qrm_core::QrmError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration (exit 2).
    Config(String),
    /// A truncation scan hit its cap (exit 3).
    Convergence(String),
    /// A gauge-audit residual exceeded its tolerance (exit 4).
    AuditFailed(String),
    /// Filesystem trouble (exit 1).
    Io(std::io::Error),
    /// Any other solver failure (exit 1).
    Core(QrmError),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::AuditFailed(_) => 4,
            CliError::Io(_) | CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Convergence(msg) => write!(f, "convergence failure: {msg}"),
            CliError::AuditFailed(msg) => write!(f, "gauge audit failed: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<QrmError> for CliError {
    fn from(e: QrmError) -> Self {
        match e {
            QrmError::Convergence(msg) => CliError::Convergence(msg),
            other => CliError::Core(other),
        }
    }
}
