use std::fmt;

/// Which exit code an error maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad configuration or expression: exit 2.
    Input,
    /// Numerical failure or I/O while producing results: exit 1.
    Failure,
}

/// Error surfaced by the pipeline, tagged with the stage that raised it.
#[derive(Debug, Clone, PartialEq)]
pub struct StageError {
    pub stage: &'static str,
    pub kind: ErrorKind,
    pub message: String,
}

impl StageError {
    pub fn input(stage: &'static str, message: impl fmt::Display) -> StageError {
        StageError {
            stage,
            kind: ErrorKind::Input,
            message: message.to_string(),
        }
    }

    pub fn failure(stage: &'static str, message: impl fmt::Display) -> StageError {
        StageError {
            stage,
            kind: ErrorKind::Failure,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Failure => 1,
        }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error [{}]: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

/// Shortest decimal that round-trips, with an exponent for very large or
/// small magnitudes.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}
