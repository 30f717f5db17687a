//! Result of checking one identity instance.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedTruncation,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedTruncation => "skipped-truncation",
        }
    }
}

/// Both sides of a failed identity, in canonical text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(Witness),
    Skipped(String),
}

impl Outcome {
    pub fn status(&self) -> Status {
        match self {
            Outcome::Pass => Status::Pass,
            Outcome::Fail(_) => Status::Fail,
            Outcome::Skipped(_) => Status::SkippedTruncation,
        }
    }

    /// Truncation errors become skips; any other error is a failure.
    pub fn from_result(input: impl FnOnce() -> String, r: Result<Option<(String, String)>>) -> Self {
        match r {
            Ok(None) => Outcome::Pass,
            Ok(Some((lhs, rhs))) => Outcome::Fail(Witness {
                input: input(),
                lhs,
                rhs,
            }),
            Err(Error::Truncation(msg)) => Outcome::Skipped(msg),
            Err(e) => Outcome::Fail(Witness {
                input: input(),
                lhs: format!("error: {e}"),
                rhs: String::new(),
            }),
        }
    }
}
