use std::path::PathBuf;

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Core(slpelim::Error),
    Io(PathBuf, std::io::Error),
    Json(serde_json::Error),
    Input(String),
}

impl From<slpelim::Error> for CliError {
    fn from(e: slpelim::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io(..) => "Io",
            CliError::Json(_) => "JsonError",
            CliError::Input(_) => "InvalidInput",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(p, e) => format!("{}: {e}", p.display()),
            CliError::Json(e) => e.to_string(),
            CliError::Input(m) => m.clone(),
        }
    }

    /// 3 for budget exhaustion, 1 when a certificate precondition fails,
    /// 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(
                slpelim::Error::NotInvariant { .. } | slpelim::Error::NotAGeneralSolution(_) | slpelim::Error::NotR,
            ) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        json!({"error": self.kind(), "message": self.message()}).to_string()
    }
}
