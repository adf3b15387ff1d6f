use rsp_core::Error;

/// Failures surfaced by the command-line driver.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { field: field.into(), message: message.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io { path: path.as_ref().display().to_string(), source }
    }

    /// 2 config, 3 numeric domain, 4 precision or validation domain, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            Self::Core(e) => core_exit_code(e),
            Self::Io { .. } => 1,
        }
    }

    /// One line: `error kind=<kind> field=<field> message=<text>`.
    pub fn line(&self) -> String {
        let (kind, field, msg) = match self {
            Self::Config { field, message } => ("config", field.clone(), message.clone()),
            Self::Core(e) => (core_kind(e), "-".to_string(), e.to_string()),
            Self::Io { path, source } => ("io", path.clone(), source.to_string()),
        };
        format!("error kind={kind} field={field} message={}", msg.replace(['\n', '\r'], " "))
    }
}

pub fn core_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) => "invalid_argument",
        Error::OutOfBand { .. } => "out_of_band",
        Error::GridMismatch(_) => "grid_mismatch",
        Error::Precision(_) => "precision",
        Error::NonConvergence(_) => "non_convergence",
        Error::MIndexTooSmall { .. } => "m_index_too_small",
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::OutOfBand { .. } | Error::GridMismatch(_) => 3,
        Error::Precision(_) | Error::NonConvergence(_) | Error::MIndexTooSmall { .. } => 4,
    }
}
