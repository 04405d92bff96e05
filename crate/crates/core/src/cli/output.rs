//! File writers and console formatting for the batch front end.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{AmbiguitySurface, CorrelationReport, CorrelationVector, Decibels};
use crate::optimizer::TraceRecord;

/// Decibels to two decimals.
pub fn format_db(db: Decibels) -> String {
    if db.is_no_sidelobes() {
        "-inf".to_string()
    } else {
        format!("{:.2}", db.value())
    }
}

/// A linear value to four significant figures, in plain decimal notation.
pub fn format_linear(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    let scale = 10f64.powi(3 - magnitude);
    let rounded = (x * scale).round() / scale;
    // Rounding can carry into a new digit (0.099996 -> 0.1000).
    let magnitude_after = rounded.abs().log10().floor() as i32;
    let decimals = if magnitude_after > magnitude { decimals.saturating_sub(1) } else { decimals };
    format!("{rounded:.decimals$}")
}

/// The ASP/CP matrix in linear and dB form, one row per waveform.
pub fn format_report_table(report: &CorrelationReport) -> String {
    let l = report.n_waveforms();
    let mut s = String::new();
    let header: String = (1..=l).map(|q| format!("{:>10}", format!("s{q}"))).collect();
    let _ = writeln!(s, "ASP (diagonal) / CP (off-diagonal), linear");
    let _ = writeln!(s, "    {header}");
    for (p, row) in report.matrix.iter().enumerate() {
        let cells: String = row.iter().map(|v| format!("{:>10}", format_linear(*v))).collect();
        let _ = writeln!(s, "s{:<3}{cells}", p + 1);
    }
    let _ = writeln!(s, "ASP (diagonal) / CP (off-diagonal), dB");
    let _ = writeln!(s, "    {header}");
    for (p, row) in report.cp_db.iter().enumerate() {
        let cells: String = row.iter().map(|v| format!("{:>10}", format_db(*v))).collect();
        let _ = writeln!(s, "s{:<3}{cells}", p + 1);
    }
    let _ = writeln!(
        s,
        "best ASP {} dB ({}), worst ASP {} dB",
        format_db(report.best_asp_db()),
        format_linear(report.best_asp()),
        format_db(Decibels::from_amplitude_ratio(report.worst_asp())),
    );
    if let (Some(best), Some(worst)) = (report.best_cp(), report.worst_cp()) {
        let _ = writeln!(
            s,
            "best CP {} dB ({}), worst CP {} dB",
            format_db(Decibels::from_amplitude_ratio(best)),
            format_linear(best),
            format_db(Decibels::from_amplitude_ratio(worst)),
        );
    }
    let _ = writeln!(s, "cost {:.2} dB", report.cost);
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// `iteration,best_cost,mean_cost,evaluations`
pub fn write_trace_csv(path: &Path, trace: &[TraceRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for r in trace {
        w.serialize(r)?;
    }
    finish(w, path)
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// `lag,delay,magnitude` with lag in samples and delay in time units.
pub fn write_correlation_csv(path: &Path, corr: &CorrelationVector, sample_rate: f64) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["lag", "delay", "magnitude"])?;
    for (lag, value) in corr.iter_lags() {
        w.write_record([lag.to_string(), (lag as f64 / sample_rate).to_string(), value.to_string()])?;
    }
    finish(w, path)
}

/// Long-format grid: `doppler_norm,doppler,lag,delay,magnitude`.
pub fn write_ambiguity_csv(path: &Path, surface: &AmbiguitySurface, normalized: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["doppler_norm", "doppler", "lag", "delay", "magnitude"])?;
    for (d, row) in surface.magnitude.iter().enumerate() {
        let nd = normalized[d].to_string();
        let fd = surface.dopplers[d].to_string();
        for (k, value) in row.iter().enumerate() {
            w.write_record([
                nd.as_str(),
                fd.as_str(),
                &surface.lags[k].to_string(),
                &surface.delays[k].to_string(),
                &value.to_string(),
            ])?;
        }
    }
    finish(w, path)
}
