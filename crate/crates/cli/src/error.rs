use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("numerical error: {0}")]
    Numeric(#[from] qfock::Error),
}

impl CliError {
    /// 1 for failures inside an experiment, 2 for configuration and I/O problems.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
