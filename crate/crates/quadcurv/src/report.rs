//! JSON reports and CSV histograms.

use std::io::Write;

use quadcurv_core::experiments::Campaign;
use serde::Serialize;
use serde_json::{Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().expect("formatted float parses")
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|f| Number::from_f64(round_significant(f)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Serializes `report` with every float rounded; non-finite values become
/// `null`.
pub fn to_report<T: Serialize>(report: &T) -> Value {
    round_value(serde_json::to_value(report).expect("report serializes"))
}

/// Writes the rounded report to standard output. A closed pipe is not an
/// error.
pub fn print_report<T: Serialize>(report: &T) {
    let text = serde_json::to_string_pretty(&to_report(report)).expect("value serializes");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// One row per histogram bin of every condition in `campaign`.
pub fn write_histograms<W: Write>(campaign: &Campaign, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["condition", "lower", "upper", "count"])?;
    for s in &campaign.stats {
        let edges = &s.histogram.edges;
        for (i, count) in s.histogram.counts.iter().enumerate() {
            let lower = if i == 0 { "-inf".to_string() } else { edges[i - 1].to_string() };
            let upper = edges.get(i).map_or("inf".to_string(), f64::to_string);
            w.write_record([s.condition.name().to_string(), lower, upper, count.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
