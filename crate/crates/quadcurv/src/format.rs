//! The metric file format.
//!
//! ```json
//! {
//!   "format": 1,
//!   "labels": ["p", "x", "y", "z"],
//!   "distances": [[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 0.1], [1, 2, 0.1, 0]]
//! }
//! ```
//!
//! `labels` may be omitted, in which case points are named by index.

use std::fmt;
use std::fs;
use std::path::Path;

use quadcurv_core::{FiniteMetricSpace, MetricError};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub distances: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputError {
    Io { path: String, message: String },
    Parse { message: String },
    UnsupportedFormat { found: u32 },
    Metric { violation: MetricError, message: String },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { path, message } => write!(f, "{path}: {message}"),
            InputError::Parse { message } => write!(f, "malformed metric file: {message}"),
            InputError::UnsupportedFormat { found } => {
                write!(f, "unsupported metric file format {found} (expected {FORMAT_VERSION})")
            }
            InputError::Metric { message, .. } => write!(f, "not a metric: {message}"),
        }
    }
}

impl std::error::Error for InputError {}

impl From<MetricError> for InputError {
    fn from(e: MetricError) -> Self {
        InputError::Metric { message: e.to_string(), violation: e }
    }
}

impl MetricFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let file: MetricFile =
            serde_json::from_str(text).map_err(|e| InputError::Parse { message: e.to_string() })?;
        if file.format != FORMAT_VERSION {
            return Err(InputError::UnsupportedFormat { found: file.format });
        }
        Ok(file)
    }

    pub fn into_space(self) -> Result<FiniteMetricSpace, InputError> {
        let space = match self.labels {
            Some(labels) => FiniteMetricSpace::new(self.distances, labels)?,
            None => FiniteMetricSpace::unlabeled(self.distances)?,
        };
        Ok(space)
    }

    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        MetricFile {
            format: FORMAT_VERSION,
            labels: Some(space.labels().to_vec()),
            distances: space.distances().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite distances serialize");
        s.push('\n');
        s
    }
}

pub fn read_metric_file(path: &Path) -> Result<FiniteMetricSpace, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })?;
    MetricFile::parse(&text)?.into_space()
}

pub fn write_metric_file(path: &Path, space: &FiniteMetricSpace) -> Result<(), InputError> {
    fs::write(path, MetricFile::from_space(space).to_json())
        .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })
}
