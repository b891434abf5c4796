//! File formats and reporting for the `quadcurv` command-line tool.

pub mod format;
pub mod report;

pub use format::{read_metric_file, write_metric_file, InputError, MetricFile};
