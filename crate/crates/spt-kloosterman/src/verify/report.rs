//! Deterministic serialization of verification reports: aligned text, CSV
//! with a fixed column set, and JSON mirroring the report fields (keys are
//! emitted in sorted order, so byte-identical across runs).

use super::BoundReport;
use crate::ball::{Enclosure, Trilean};
use crate::error::Result;
use serde_json::{json, Value};
use std::io::Write;

pub const CSV_HEADER: &str = "theorem,n,error_mid,error_rad,bound_mid,bound_rad,margin,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other}; expected text|csv|json")),
        }
    }
}

fn trilean_str(t: Trilean) -> &'static str {
    match t {
        Trilean::True => "pass",
        Trilean::False => "fail",
        Trilean::Unknown => "unknown",
    }
}

fn mid_str(e: &Enclosure) -> String {
    e.mid().to_decimal_sci(17)
}

fn rad_str(e: &Enclosure) -> String {
    if e.rad().is_zero() {
        "0".into()
    } else {
        e.rad().to_decimal_sci(2)
    }
}

pub fn report_to_json(r: &BoundReport) -> Value {
    json!({
        "theorem": r.theorem,
        "n": r.n,
        "exact": r.exact,
        "main_mid": mid_str(&r.main),
        "main_rad": rad_str(&r.main),
        "error_mid": mid_str(&r.error),
        "error_rad": rad_str(&r.error),
        "bound_mid": mid_str(&r.bound),
        "bound_rad": rad_str(&r.bound),
        "margin": mid_str(&r.margin_ratio),
        "pass": trilean_str(r.pass),
    })
}

pub fn report_to_csv_line(r: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.theorem,
        r.n,
        mid_str(&r.error),
        rad_str(&r.error),
        mid_str(&r.bound),
        rad_str(&r.bound),
        mid_str(&r.margin_ratio),
        trilean_str(r.pass)
    )
}

pub fn report_to_text_line(r: &BoundReport) -> String {
    format!(
        "{:8} n={:<8} |E| = {:<26} bound = {:<26} margin = {:<12} {}",
        r.theorem,
        r.n,
        r.error.display_string(8),
        r.bound.display_string(8),
        r.margin_ratio.mid().to_decimal_sci(3),
        trilean_str(r.pass)
    )
}

/// Serialize a report list to the sink in the requested format.
pub fn emit_report(reports: &[BoundReport], format: Format, sink: &mut dyn Write) -> Result<()> {
    match format {
        Format::Text => {
            for r in reports {
                writeln!(sink, "{}", report_to_text_line(r))?;
            }
        }
        Format::Csv => {
            writeln!(sink, "{CSV_HEADER}")?;
            for r in reports {
                writeln!(sink, "{}", report_to_csv_line(r))?;
            }
        }
        Format::Json => {
            let arr = Value::Array(reports.iter().map(report_to_json).collect());
            writeln!(sink, "{}", serde_json::to_string_pretty(&arr)?)?;
        }
    }
    Ok(())
}

impl From<serde_json::Error> for crate::error::Error {
    fn from(e: serde_json::Error) -> Self {
        crate::error::Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}
