//! Plot-ready report emission: CSV tables and JSON documents.
//!
//! Every document embeds (JSON) or is accompanied by (CSV sidecar) a
//! metadata block echoing the run configuration, seed and tool version, so
//! any published number is reproducible from a single command line.
//! Writers are deterministic: no timestamps, shortest float form.

use std::io::Write;

use ndarray::Array2;
use serde::Serialize;

use crate::causality::{IntegratedCausality, LaggedCorrelation};
use crate::classify::{FirmFactorFit, GroupLabel, TransitionMatrix};
use crate::error::Result;
use crate::herding::{GroupSummary, HerdingScan};
use crate::market::{FirmId, IntervalGrid};
use crate::spectra::{EigenSpectrum, NullThresholds, SortedCorrelation};

const TS_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

/// Metadata block attached to every report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportMeta {
    pub tool_version: String,
    pub seed: u64,
    /// Run configuration echoed verbatim.
    pub config: serde_json::Value,
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

/// Spectrum report: eigenvalues against the null thresholds.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub meta: ReportMeta,
    pub n_firms: usize,
    pub n_intervals: usize,
    pub eigenvalues: Vec<f64>,
    pub thresholds: NullThresholds,
}

pub fn write_spectrum_json<W: Write>(
    mut writer: W,
    meta: ReportMeta,
    spectrum: &EigenSpectrum,
    thresholds: &NullThresholds,
    n_intervals: usize,
) -> Result<()> {
    let report = SpectrumReport {
        meta,
        n_firms: spectrum.n(),
        n_intervals,
        eigenvalues: spectrum.eigenvalues.clone(),
        thresholds: thresholds.clone(),
    };
    serde_json::to_writer_pretty(&mut writer, &report)
        .map_err(std::io::Error::other)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Correlation matrix heat-map data: firms as header, one matrix row per line.
pub fn write_matrix_csv<W: Write>(writer: W, firms: &[FirmId], entries: &Array2<f64>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["firm".to_owned()];
    header.extend(firms.iter().map(|f| f.as_str().to_owned()));
    wtr.write_record(&header)?;
    for (i, firm) in firms.iter().enumerate() {
        let mut row = vec![firm.as_str().to_owned()];
        row.extend(entries.row(i).iter().map(|v| fmt(*v)));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Sorted-matrix artifact with the 2-sigma group boundaries in a JSON tail
/// sidecar structure.
#[derive(Debug, Clone, Serialize)]
pub struct SortedMatrixMeta {
    pub meta: ReportMeta,
    /// Original column index occupying each sorted position.
    pub order: Vec<usize>,
    /// Firms below -2 sigma end here (exclusive).
    pub boundary_lower: usize,
    /// Firms up to +2 sigma end here (exclusive); the rest exceed +2 sigma.
    pub boundary_upper: usize,
    pub sigma: f64,
}

pub fn write_sorted_matrix_csv<W: Write>(writer: W, sorted: &SortedCorrelation) -> Result<()> {
    write_matrix_csv(writer, &sorted.firms, &sorted.entries)
}

/// One classification row: fit, threshold and size proxy.
pub struct ClassifyRow<'a> {
    pub fit: &'a FirmFactorFit,
    pub sigma: f64,
    pub label: GroupLabel,
    pub size_proxy: Option<f64>,
}

/// Classification table: `firm,rho,gamma,sigma,threshold,label,size_proxy`.
pub fn write_classify_csv<W: Write>(writer: W, rows: &[ClassifyRow<'_>]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["firm", "rho", "gamma", "sigma", "threshold", "label", "size_proxy"])?;
    for row in rows {
        wtr.write_record([
            row.fit.firm.as_str().to_owned(),
            fmt(row.fit.rho),
            fmt(row.fit.gamma),
            fmt(row.sigma),
            fmt(2.0 * row.sigma),
            row.label.to_string(),
            fmt_opt(row.size_proxy),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Transition report with both counts and probabilities.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionReport {
    pub meta: ReportMeta,
    pub years: Vec<i32>,
    pub sources: Vec<String>,
    pub destinations: Vec<String>,
    pub matrix: TransitionMatrix,
}

pub fn write_transitions_json<W: Write>(
    mut writer: W,
    meta: ReportMeta,
    years: Vec<i32>,
    matrix: &TransitionMatrix,
) -> Result<()> {
    let report = TransitionReport {
        meta,
        years,
        sources: GroupLabel::SOURCES.iter().map(|g| g.short().to_owned()).collect(),
        destinations: GroupLabel::DESTINATIONS
            .iter()
            .map(|g| g.short().to_owned())
            .collect(),
        matrix: matrix.clone(),
    };
    serde_json::to_writer_pretty(&mut writer, &report)
        .map_err(std::io::Error::other)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Per-firm lag profiles: `firm,lag_minutes,rho,sigma` (flagged lags keep
/// empty value fields).
pub fn write_causality_lags_csv<W: Write>(
    writer: W,
    profiles: &[(FirmId, LaggedCorrelation)],
    minutes_per_step: u32,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["firm", "lag_minutes", "rho", "sigma"])?;
    for (firm, profile) in profiles {
        for (k, lag) in profile.lags.iter().enumerate() {
            wtr.write_record([
                firm.as_str().to_owned(),
                (lag * minutes_per_step as i64).to_string(),
                fmt_opt(profile.values[k]),
                fmt_opt(profile.sigma[k]),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Integrated causality summary: `firm,sync,past_sum,future_sum`.
pub fn write_causality_integrated_csv<W: Write>(
    writer: W,
    rows: &[IntegratedCausality],
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "firm",
        "sync",
        "past_sum",
        "future_sum",
        "past_null_std",
        "future_null_std",
    ])?;
    for row in rows {
        wtr.write_record([
            row.firm.as_str().to_owned(),
            fmt(row.sync),
            fmt(row.past_sum),
            fmt(row.future_sum),
            fmt(row.past_null_std),
            fmt(row.future_null_std),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Herding ledger: `interval_start,group,n_buy,n_sell,h,label,b,n_eff`.
pub fn write_herding_ledger_csv<W: Write>(
    writer: W,
    grid: &IntervalGrid,
    scan: &HerdingScan,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["interval_start", "group", "n_buy", "n_sell", "h", "label", "b", "n_eff"])?;
    for row in &scan.rows {
        wtr.write_record([
            grid.intervals()[row.interval].start.format(TS_FORMAT).to_string(),
            row.group.to_string(),
            row.n_buy.to_string(),
            row.n_sell.to_string(),
            fmt_opt(row.h),
            row.label.to_string(),
            fmt_opt(row.b),
            fmt_opt(row.n_eff),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Herding summary document mirroring the census/validation table layout.
#[derive(Debug, Clone, Serialize)]
pub struct HerdingSummaryReport {
    pub meta: ReportMeta,
    pub horizon: String,
    pub alpha: f64,
    pub groups: Vec<GroupSummary>,
}

pub fn write_herding_summary_json<W: Write>(
    mut writer: W,
    meta: ReportMeta,
    scan: &HerdingScan,
    groups: Vec<GroupSummary>,
) -> Result<()> {
    let report = HerdingSummaryReport {
        meta,
        horizon: scan.horizon.to_string(),
        alpha: scan.alpha,
        groups,
    };
    serde_json::to_writer_pretty(&mut writer, &report)
        .map_err(std::io::Error::other)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Daily herding timeline: `date,close_price,group,label`.
pub fn write_timeline_csv<W: Write>(
    writer: W,
    grid: &IntervalGrid,
    close_prices: &[f64],
    scan: &HerdingScan,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["date", "close_price", "group", "label"])?;
    for row in &scan.rows {
        let date = grid.intervals()[row.interval].start.date();
        wtr.write_record([
            date.format("%Y-%m-%d").to_string(),
            fmt(close_prices[row.interval]),
            row.group.to_string(),
            row.label.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn matrix_csv_layout() {
        let firms = vec![FirmId::new("A"), FirmId::new("B")];
        let entries = arr2(&[[1.0, 0.25], [0.25, 1.0]]);
        let mut out = Vec::new();
        write_matrix_csv(&mut out, &firms, &entries).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "firm,A,B\nA,1,0.25\nB,0.25,1\n");
    }

    #[test]
    fn classify_csv_has_expected_columns() {
        let fit = FirmFactorFit {
            firm: FirmId::new("F1"),
            rho: -0.25,
            gamma: -1234.5,
            residual_std: 10.0,
            n_obs: 250,
        };
        let rows = vec![ClassifyRow {
            fit: &fit,
            sigma: 0.0632,
            label: GroupLabel::Reversing,
            size_proxy: Some(5.0e4),
        }];
        let mut out = Vec::new();
        write_classify_csv(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "firm,rho,gamma,sigma,threshold,label,size_proxy"
        );
        assert_eq!(lines.next().unwrap(), "F1,-0.25,-1234.5,0.0632,0.1264,Reversing,50000");
    }
}
