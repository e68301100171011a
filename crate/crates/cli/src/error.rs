use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Model(#[from] contour_jets::Error),
}

impl CliError {
    /// 1 for I/O, schema and input errors; 2 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Schema(_) => 1,
            CliError::Model(e) if e.is_input_error() => 1,
            CliError::Model(_) => 2,
        }
    }

    pub fn class(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Schema(_) => "schema",
            CliError::Model(e) if e.is_input_error() => "input",
            CliError::Model(_) => "math",
        }
    }

    /// Machine-readable error record written to standard error.
    pub fn record(&self) -> Value {
        json!({
            "version": 1,
            "error": {
                "class": self.class(),
                "message": self.to_string(),
                "exit_status": self.exit_code(),
            }
        })
    }
}

pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}
