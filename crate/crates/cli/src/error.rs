use std::fmt;

/// An error with a machine-readable category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub category: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(category: &'static str, message: impl Into<String>) -> Self {
        CliError {
            category,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.category {
            "invalid-parameter" => 2,
            "parse" => 3,
            "resource" => 4,
            "numeric" => 5,
            "unsupported" => 6,
            "precondition" => 7,
            "cache-mismatch" => 8,
            "io" => 9,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.category, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<hscomp::Error> for CliError {
    fn from(e: hscomp::Error) -> Self {
        CliError::new(e.category(), e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("io", e.to_string())
    }
}
