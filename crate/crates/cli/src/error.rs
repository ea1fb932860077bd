use std::fmt;

pub const EXIT_IO: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_COMPUTE: i32 = 1;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Config(String),
    Verification(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }

    pub fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(s) => write!(f, "I/O error: {s}"),
            CliError::Config(s) => write!(f, "configuration error: {s}"),
            CliError::Verification(s) => write!(f, "verification failed: {s}"),
            CliError::Compute(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<sieve::SieveError> for CliError {
    fn from(e: sieve::SieveError) -> Self {
        match e {
            sieve::SieveError::Io(e) => CliError::Io(e.to_string()),
            sieve::SieveError::Checkpoint(s) => CliError::Io(format!("checkpoint: {s}")),
            sieve::SieveError::Domain(s) => CliError::Config(s),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<bounds::BoundsError> for CliError {
    fn from(e: bounds::BoundsError) -> Self {
        match e {
            bounds::BoundsError::Domain(s) => CliError::Config(s),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<threelog::ThreeLogError> for CliError {
    fn from(e: threelog::ThreeLogError) -> Self {
        match e {
            threelog::ThreeLogError::Domain(s) => CliError::Config(s),
            other => CliError::Compute(other.to_string()),
        }
    }
}
