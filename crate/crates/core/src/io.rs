//! CSV and JSON artifacts.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{RatioRow, ResourceReport};
use crate::error::Result;
use crate::search::SearchTrace;

pub const TRACE_HEADER: &str = "iteration,marked_probability";
pub const RATIO_HEADER: &str = "I,K,C,mode,space_size,solutions,sqrt_ratio";

/// `x` in fixed notation with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn trace_csv(trace: &SearchTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = writeln!(out, "{},{}", r.iteration, sig10(r.marked_probability));
    }
    out
}

pub fn ratio_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from(RATIO_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.machines,
            r.jobs,
            r.window,
            r.mode,
            r.space_size,
            r.solutions,
            sig10(r.sqrt_ratio)
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn trace_json(trace: &SearchTrace) -> Result<String> {
    to_json(trace)
}

pub fn resource_json(report: &ResourceReport) -> Result<String> {
    to_json(report)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
