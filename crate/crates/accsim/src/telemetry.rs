//! Trace and summary serialization.
//!
//! CSV is the canonical trace format: diff-able in tests and plottable by
//! anything. Floats print with six decimals, booleans as 0/1, and the column
//! order below is fixed, so determinism can be checked at the text level.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::{RunSummary, TraceRecord};

pub const TRACE_HEADER: &str = "tick,time_s,ego_speed_true_kmh,ego_speed_perceived_kmh,\
lead_speed_kmh,gap_m,ssd_m,margin_m,u,command_mode,intrusion_active,frames_injected,collision";

fn bool01(b: bool) -> u8 {
    if b {
        1
    } else {
        0
    }
}

/// Render a trace as CSV text, header row first.
pub fn trace_to_csv(trace: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in trace {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{},{}",
            r.tick,
            r.time_s,
            r.ego_speed_true,
            r.ego_speed_perceived,
            r.lead_speed,
            r.gap,
            r.ssd,
            r.margin,
            r.u,
            r.command_mode,
            bool01(r.intrusion_active),
            r.frames_injected,
            bool01(r.collision),
        );
    }
    out
}

/// Parse CSV text produced by [`trace_to_csv`]; values come back at the
/// printed six-decimal precision.
pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty trace file".into()))?;
    if header != TRACE_HEADER {
        return Err(Error::Config(format!("unexpected trace header `{header}`")));
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 13 {
            return Err(Error::Config(format!(
                "trace row {} has {} fields, expected 13",
                idx + 2,
                fields.len()
            )));
        }
        let bad = |what: &str| Error::Config(format!("trace row {}: bad {what}", idx + 2));
        let f = |i: usize, what: &str| -> Result<f64> {
            fields[i].parse().map_err(|_| bad(what))
        };
        let b = |i: usize, what: &str| -> Result<bool> {
            match fields[i] {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad(what)),
            }
        };
        records.push(TraceRecord {
            tick: fields[0].parse().map_err(|_| bad("tick"))?,
            time_s: f(1, "time_s")?,
            ego_speed_true: f(2, "ego_speed_true_kmh")?,
            ego_speed_perceived: f(3, "ego_speed_perceived_kmh")?,
            lead_speed: f(4, "lead_speed_kmh")?,
            gap: f(5, "gap_m")?,
            ssd: f(6, "ssd_m")?,
            margin: f(7, "margin_m")?,
            u: f(8, "u")?,
            command_mode: fields[9].parse()?,
            intrusion_active: b(10, "intrusion_active")?,
            frames_injected: fields[11].parse().map_err(|_| bad("frames_injected"))?,
            collision: b(12, "collision")?,
        });
    }
    Ok(records)
}

/// Write the trace CSV to `path`.
pub fn write_trace(trace: &[TraceRecord], path: &Path) -> Result<()> {
    fs::write(path, trace_to_csv(trace)).map_err(|e| Error::io(path, e))
}

/// Render the summary as a JSON object with stable key order.
pub fn summary_to_json(summary: &RunSummary) -> String {
    // Struct field order is the key order; serde_json preserves it.
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

/// Write the summary JSON to `path`.
pub fn write_summary(summary: &RunSummary, path: &Path) -> Result<()> {
    fs::write(path, summary_to_json(summary)).map_err(|e| Error::io(path, e))
}
