use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] stochastic_mathieu::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("empty input: {0}")]
    EmptyInput(String),
}

/// Machine-readable error record printed to stderr on failure.
#[derive(Serialize)]
pub struct ErrorRecord<'a> {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<&'a str>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(stochastic_mathieu::Error::InvalidParams(_)) => "invalid-params",
            CliError::Core(stochastic_mathieu::Error::EmbeddingNotPsd { .. }) => {
                "embedding-not-psd"
            }
            CliError::Core(stochastic_mathieu::Error::Overflow { .. }) => "overflow",
            CliError::Core(stochastic_mathieu::Error::NotConverged { .. }) => "not-converged",
            CliError::Core(stochastic_mathieu::Error::InvalidRegime(_)) => "invalid-regime",
            CliError::Core(stochastic_mathieu::Error::QuadratureFailure(_)) => {
                "quadrature-failure"
            }
            CliError::Core(stochastic_mathieu::Error::EmptyInput(_)) => "empty-input",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::EmptyInput(_) => "empty-input",
        }
    }
}
