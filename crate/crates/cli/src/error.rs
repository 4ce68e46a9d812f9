use shadowkin::oracle::OracleError;
use shadowkin::record::RecordError;
use shadowkin::signaling::SweepError;
use shadowkin::SceneError;
use std::io;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Gap(String),
    #[error("counterexample found")]
    Counterexample(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Gap(_) => 4,
            CliError::Counterexample(_) => 5,
        }
    }

    /// Text printed to stdout alongside the error, if any.
    pub fn payload(&self) -> Option<&str> {
        match self {
            CliError::Counterexample(json) => Some(json),
            _ => None,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<SceneError> for CliError {
    fn from(err: SceneError) -> Self {
        CliError::Invalid(format!("invalid scene: {err}"))
    }
}

impl From<RecordError> for CliError {
    fn from(err: RecordError) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(err: OracleError) -> Self {
        let msg = err.to_string();
        match err {
            OracleError::InvalidGrid { .. } => CliError::Invalid(msg),
            OracleError::GridBudget { .. } => CliError::Budget(msg),
            OracleError::EmptyTimeline
            | OracleError::NoShadow
            | OracleError::WorldlineGap { .. } => CliError::Gap(msg),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(err: SweepError) -> Self {
        let msg = err.to_string();
        match err {
            SweepError::InvalidSpeed { .. } => CliError::Invalid(msg),
            SweepError::GridBudget { .. } => CliError::Budget(msg),
        }
    }
}
