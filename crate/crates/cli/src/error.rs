use std::path::PathBuf;

use sch::distributions::DistributionError;
use sch::HullError;
use thiserror::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for unusable input: bad flags, unreadable or malformed files,
/// degenerate point sets.
pub const EXIT_BAD_INPUT: i32 = 1;
/// Exit status for failures that indicate a bug.
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{}: {msg}", path.display())]
    BadBinary { path: PathBuf, msg: String },
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Dataset(#[from] DistributionError),
    #[error("{0}")]
    Usage(String),
    #[error("could not encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Hull(HullError::Internal(_)) | CliError::Encode(_) => EXIT_INTERNAL,
            _ => EXIT_BAD_INPUT,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_BAD_INPUT);
        assert_eq!(
            CliError::Hull(HullError::DegenerateInput("flat".into())).exit_code(),
            EXIT_BAD_INPUT
        );
        assert_eq!(
            CliError::Hull(HullError::Internal("oops".into())).exit_code(),
            EXIT_INTERNAL
        );
        let parse = CliError::Parse {
            path: "pts.txt".into(),
            line: 7,
            msg: "expected 3 values".into(),
        };
        assert_eq!(parse.to_string(), "pts.txt:7: expected 3 values");
    }
}
