use std::fmt;
use std::path::Path;

use siteplan::{GeometryError, PlacementError, RadioError, RenderError, ScenarioError};

/// Failure with its process exit code and a stable stderr token.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub token: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: u8, token: &'static str, message: impl Into<String>) -> Self {
        CliError { code, token, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(2, "E_USAGE", message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(2, "E_PARSE", message)
    }

    pub fn input(path: &Path, err: std::io::Error) -> Self {
        Self::new(2, "E_INPUT", format!("{}: {err}", path.display()))
    }

    pub fn param(message: impl Into<String>) -> Self {
        Self::new(3, "E_PARAM", message)
    }

    pub fn stations(message: impl Into<String>) -> Self {
        Self::new(4, "E_STATIONS", message)
    }

    pub fn roi_mismatch(message: impl Into<String>) -> Self {
        Self::new(5, "E_ROI_MISMATCH", message)
    }

    pub fn output(path: &Path, err: impl fmt::Display) -> Self {
        Self::new(1, "E_OUTPUT", format!("{}: {err}", path.display()))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(1, "E_INTERNAL", message)
    }

    /// The single stderr line for this error.
    pub fn line(&self) -> String {
        let msg = self.message.replace('\n', " ");
        format!("error[{}]: {msg}", self.token)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Parse { .. } => CliError::parse(e.to_string()),
            ScenarioError::DuplicateStation(..) => CliError::stations(e.to_string()),
            _ => CliError::param(e.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::TooFewPoints(_) | GeometryError::DegenerateInput | GeometryError::DuplicatePoint(_) => {
                CliError::stations(e.to_string())
            }
            GeometryError::Parse(_) => CliError::parse(e.to_string()),
            GeometryError::InvalidRect { .. } | GeometryError::NonFinite => CliError::param(e.to_string()),
            _ => CliError::internal(e.to_string()),
        }
    }
}

impl From<PlacementError> for CliError {
    fn from(e: PlacementError) -> Self {
        match e {
            PlacementError::Geometry(g) => g.into(),
            PlacementError::Scenario(s) => s.into(),
            PlacementError::Parse { .. } => CliError::parse(e.to_string()),
        }
    }
}

impl From<RadioError> for CliError {
    fn from(e: RadioError) -> Self {
        match e {
            RadioError::EmptySet => CliError::stations(e.to_string()),
            RadioError::InvalidParameter(_) => CliError::param(e.to_string()),
            _ => CliError::internal(e.to_string()),
        }
    }
}

impl From<siteplan::MetricsError> for CliError {
    fn from(e: siteplan::MetricsError) -> Self {
        use siteplan::MetricsError::*;
        match e {
            EmptySet => CliError::stations(e.to_string()),
            BadResolution(_) => CliError::param(e.to_string()),
            MismatchedConfig(_) => CliError::roi_mismatch(e.to_string()),
            BadIndex { .. } => CliError::internal(e.to_string()),
        }
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::InvalidSpec(_) => CliError::usage(e.to_string()),
            RenderError::Metrics(m) => m.into(),
            RenderError::Scenario(s) => s.into(),
        }
    }
}
