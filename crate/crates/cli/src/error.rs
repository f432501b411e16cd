use thiserror::Error;

/// Errors carry their exit status: 1 usage, 2 input/output, 3 internal.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<morseward::persist::PersistError> for CliError {
    fn from(e: morseward::persist::PersistError) -> Self {
        use morseward::persist::PersistError as P;
        match e {
            P::Internal(_) | P::Linalg(_) | P::Chain(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<morseward::morse::MorseError> for CliError {
    fn from(e: morseward::morse::MorseError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<morseward::image::ImageError> for CliError {
    fn from(e: morseward::image::ImageError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use morseward::persist::PersistError;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Input(String::new()).exit_code(), 2);
        assert_eq!(CliError::from(PersistError::Internal("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(PersistError::StepOutOfRange { step: 9, steps: 4 }).exit_code(), 1);
    }
}
