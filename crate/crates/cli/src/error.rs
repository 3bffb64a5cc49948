use thiserror::Error;

/// Anything wrong with the input rather than with the mathematics. Maps to
/// exit code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("SchemaError at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("NonCanonicalWord: {0}")]
    NonCanonicalWord(String),
    #[error("DegreeRuleViolation: {0}")]
    DegreeRule(String),
    #[error("UnknownCommand: {0}")]
    UnknownCommand(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Core(#[from] linfty_core::Error),
}

pub fn schema(path: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Schema {
        path: path.into(),
        message: message.into(),
    }
}
