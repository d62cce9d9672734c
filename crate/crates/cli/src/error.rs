use std::process::ExitCode;

use thiserror::Error;
use tracemap_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// 0 pass, 1 mismatch, 2 usage or bad input, 3 resource cap.
pub fn core_code(e: &CoreError) -> u8 {
    match e {
        CoreError::ConductorCap { .. }
        | CoreError::NotExhausted { .. }
        | CoreError::DegreeCap { .. }
        | CoreError::ClosureBound { .. }
        | CoreError::SearchCap(_) => 3,
        _ => 2,
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Core(e) => core_code(e),
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Io(_) => 2,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}
