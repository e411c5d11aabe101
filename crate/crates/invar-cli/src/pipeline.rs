//! Command implementations: load and scope the tape, run the analysis
//! crates, emit deterministic reports with metadata sidecars.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveTime};
use serde::Serialize;

use invar_core::causality::{integrated_causality, lagged_cross_correlation, INTEGRATION_LAGS};
use invar_core::classify::{
    classify_firms, fit_one_factor, size_proxies, transition_matrix, GroupLabel,
};
use invar_core::error::{Error, Result};
use invar_core::herding::{conditional_stats, herding_scan, HerdingScan};
use invar_core::market::{
    build_inventory_panel, build_return_series, parse_trade_tape_path, select_active_firms,
    write_panel_csv, write_returns_csv, write_trade_tape, FirmId, GridMeta, Horizon, IntervalGrid,
    InventoryPanel, PanelDiagnostics, ReturnDiagnostics, ReturnSeries, Session, TradeRecord,
};
use invar_core::report::{
    write_causality_integrated_csv, write_causality_lags_csv, write_classify_csv,
    write_herding_ledger_csv, write_herding_summary_json, write_matrix_csv,
    write_sorted_matrix_csv, write_spectrum_json, write_timeline_csv, write_transitions_json,
    ClassifyRow, ReportMeta, SortedMatrixMeta,
};
use invar_core::spectra::{
    correlation_matrix, eigendecompose, first_factor_series, shuffle_null_spectrum,
    sort_matrix_by_rho,
};
use invar_core::synth::{generate_panel, generate_trade_tape, SynthConfig};

use crate::InputArgs;

/// Effective run configuration, echoed verbatim into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<String>,
    pub config_file: Option<String>,
    pub stock: String,
    pub years: Vec<i32>,
    pub horizon: String,
    pub session_open: String,
    pub session_close: String,
    pub alpha: Option<f64>,
    pub n_shuffles: Option<usize>,
    pub min_days: Option<usize>,
    pub min_transactions: Option<usize>,
    pub trades_per_interval: Option<usize>,
    pub seed: u64,
    pub out: String,
}

impl RunConfig {
    fn meta(&self) -> ReportMeta {
        ReportMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            seed: self.seed,
            config: serde_json::to_value(self).expect("config serializes"),
        }
    }
}

/// Tape scoped to one stock, split by calendar year.
struct ScopedTape {
    stock: String,
    session: Session,
    years: Vec<i32>,
    by_year: BTreeMap<i32, Vec<TradeRecord>>,
}

fn parse_session_time(s: &str) -> Result<NaiveTime> {
    NaiveTime::parse_from_str(s, "%H:%M:%S")
        .or_else(|_| NaiveTime::parse_from_str(s, "%H:%M"))
        .map_err(|_| Error::Config(format!("invalid session time `{s}`")))
}

fn load_scope(args: &InputArgs) -> Result<ScopedTape> {
    let session = Session::new(
        parse_session_time(&args.session_open)?,
        parse_session_time(&args.session_close)?,
    )?;
    let trades = parse_trade_tape_path(&args.input)?;
    if trades.is_empty() {
        return Err(Error::InsufficientData("the trade tape is empty".into()));
    }

    let mut stocks: Vec<&str> = trades.iter().map(|t| t.stock.as_str()).collect();
    stocks.sort();
    stocks.dedup();
    let stock = match &args.stock {
        Some(s) => {
            if !stocks.contains(&s.as_str()) {
                return Err(Error::Config(format!(
                    "stock `{s}` not in the tape (found: {})",
                    stocks.join(", ")
                )));
            }
            s.clone()
        }
        None if stocks.len() == 1 => stocks[0].to_owned(),
        None => {
            return Err(Error::Config(format!(
                "tape carries several stocks ({}); pick one with --stock",
                stocks.join(", ")
            )))
        }
    };

    let mut by_year: BTreeMap<i32, Vec<TradeRecord>> = BTreeMap::new();
    for trade in trades {
        if trade.stock == stock {
            by_year.entry(trade.timestamp.date().year()).or_default().push(trade);
        }
    }
    if let Some(year) = args.year {
        by_year.retain(|y, _| *y == year);
        if by_year.is_empty() {
            return Err(Error::Config(format!("no {stock} trades in {year}")));
        }
    }
    let years = by_year.keys().copied().collect();
    Ok(ScopedTape {
        stock,
        session,
        years,
        by_year,
    })
}

fn run_config(args: &InputArgs, command: &str, scope: &ScopedTape, horizon: &str) -> RunConfig {
    RunConfig {
        command: command.to_owned(),
        input: Some(args.input.display().to_string()),
        config_file: None,
        stock: scope.stock.clone(),
        years: scope.years.clone(),
        horizon: horizon.to_owned(),
        session_open: args.session_open.clone(),
        session_close: args.session_close.clone(),
        alpha: None,
        n_shuffles: None,
        min_days: Some(args.min_days),
        min_transactions: Some(args.min_transactions),
        trades_per_interval: None,
        seed: args.seed,
        out: args.out.display().to_string(),
    }
}

/// One (stock, year) analysis scope.
struct YearCtx<'a> {
    cfg: &'a RunConfig,
    args: &'a InputArgs,
    out: &'a Path,
    stock: &'a str,
    year: i32,
    trades: &'a [TradeRecord],
    session: Session,
}

impl YearCtx<'_> {
    fn meta(&self) -> ReportMeta {
        self.cfg.meta()
    }

    /// Sorted analysis universe: active firms minus auxiliary ids.
    fn universe(&self) -> Result<Vec<FirmId>> {
        let firms: Vec<FirmId> =
            select_active_firms(self.trades, self.args.min_days, self.args.min_transactions)?
                .into_iter()
                .filter(|f| !f.is_auxiliary())
                .collect();
        if firms.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no firm passes the activity filter ({} days, {} transactions)",
                self.args.min_days, self.args.min_transactions
            )));
        }
        Ok(firms)
    }

    /// Universe for cross-sectional analyses, which need a correlation
    /// matrix over at least two firms.
    fn cross_section_universe(&self) -> Result<Vec<FirmId>> {
        let firms = self.universe()?;
        if firms.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "need at least 2 firms for a correlation matrix, have {}",
                firms.len()
            )));
        }
        Ok(firms)
    }

    fn build(&self, firms: &[FirmId], horizon: Horizon) -> Result<YearData> {
        let grid = grid_from_trades(self.trades, self.session, horizon)?;
        let (panel, panel_diag) = build_inventory_panel(self.trades, firms, &grid)?;
        let (returns, returns_diag) = build_return_series(self.trades, &grid)?;
        Ok(YearData {
            panel,
            returns,
            panel_diag,
            returns_diag,
        })
    }

    /// Seed handed to this year's randomized analysis, derived from the
    /// root seed.
    fn seed(&self) -> u64 {
        self.args.seed.wrapping_add(self.year as u64)
    }

    fn csv_path(&self, prefix: &str, horizon: Horizon) -> PathBuf {
        self.out
            .join(format!("{prefix}_{}_{}_{horizon}.csv", self.stock, self.year))
    }
}

fn grid_from_trades(
    trades: &[TradeRecord],
    session: Session,
    horizon: Horizon,
) -> Result<IntervalGrid> {
    let mut dates: Vec<chrono::NaiveDate> = trades.iter().map(|t| t.timestamp.date()).collect();
    dates.sort();
    dates.dedup();
    IntervalGrid::build(dates, session, horizon)
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(std::io::Error::other)?;
    bytes.push(b'\n');
    write_file(path, &bytes)
}

#[derive(Serialize)]
struct PanelSidecar {
    meta: ReportMeta,
    grid: GridMeta,
    diagnostics: PanelDiagnostics,
}

#[derive(Serialize)]
struct ReturnsSidecar {
    meta: ReportMeta,
    grid: GridMeta,
    diagnostics: ReturnDiagnostics,
}

#[derive(Serialize)]
struct CsvSidecar {
    meta: ReportMeta,
}

#[derive(Serialize)]
struct CausalitySidecar {
    meta: ReportMeta,
    /// Pairs straddling a session break are excluded from every lag so
    /// intraday dynamics never mix with overnight gaps.
    overnight_pairs: &'static str,
    lag_window: usize,
}

struct YearData {
    panel: InventoryPanel,
    returns: ReturnSeries,
    panel_diag: PanelDiagnostics,
    returns_diag: ReturnDiagnostics,
}

/// Writes the panel and return-series files for one (stock, year, horizon).
fn emit_panel_files(
    meta: &ReportMeta,
    out: &Path,
    stock: &str,
    year: i32,
    horizon: Horizon,
    data: &YearData,
) -> Result<()> {
    let panel_path = out.join(format!("panel_{stock}_{year}_{horizon}.csv"));
    let mut buf = Vec::new();
    write_panel_csv(&mut buf, &data.panel)?;
    write_file(&panel_path, &buf)?;
    write_json(
        &sidecar_path(&panel_path),
        &PanelSidecar {
            meta: meta.clone(),
            grid: GridMeta::from_grid(data.panel.grid()),
            diagnostics: data.panel_diag.clone(),
        },
    )?;

    let returns_path = out.join(format!("returns_{stock}_{year}_{horizon}.csv"));
    let mut buf = Vec::new();
    write_returns_csv(&mut buf, &data.returns)?;
    write_file(&returns_path, &buf)?;
    write_json(
        &sidecar_path(&returns_path),
        &ReturnsSidecar {
            meta: meta.clone(),
            grid: GridMeta::from_grid(data.returns.grid()),
            diagnostics: data.returns_diag.clone(),
        },
    )?;
    Ok(())
}

fn for_each_year<F>(args: &InputArgs, command: &str, horizon: &str, mut body: F) -> Result<()>
where
    F: FnMut(&YearCtx<'_>) -> Result<()>,
{
    let scope = load_scope(args)?;
    let cfg = run_config(args, command, &scope, horizon);
    create_out(&args.out)?;
    for (year, trades) in &scope.by_year {
        body(&YearCtx {
            cfg: &cfg,
            args,
            out: &args.out,
            stock: &scope.stock,
            year: *year,
            trades,
            session: scope.session,
        })?;
    }
    Ok(())
}

pub fn ingest(args: &InputArgs, horizon: &str) -> Result<()> {
    let horizon: Horizon = horizon.parse()?;
    for_each_year(args, "ingest", &horizon.to_string(), |ctx| {
        let firms = ctx.universe()?;
        let data = ctx.build(&firms, horizon)?;
        emit_panel_files(&ctx.meta(), ctx.out, ctx.stock, ctx.year, horizon, &data)
    })
}

fn spectrum_year(ctx: &YearCtx<'_>, horizon: Horizon, shuffles: usize) -> Result<()> {
    let firms = ctx.cross_section_universe()?;
    let data = ctx.build(&firms, horizon)?;
    let c = correlation_matrix(&data.panel)?;
    let spectrum = eigendecompose(&c)?;
    let thresholds =
        shuffle_null_spectrum(ctx.trades, &firms, data.panel.grid(), shuffles, ctx.seed())?;

    let json_path = ctx
        .out
        .join(format!("spectrum_{}_{}_{horizon}.json", ctx.stock, ctx.year));
    let mut buf = Vec::new();
    write_spectrum_json(&mut buf, ctx.meta(), &spectrum, &thresholds, data.panel.n_intervals())?;
    write_file(&json_path, &buf)?;

    let matrix_path = ctx.csv_path("spectrum_matrix", horizon);
    let mut buf = Vec::new();
    write_matrix_csv(&mut buf, c.firms(), c.entries())?;
    write_file(&matrix_path, &buf)?;
    write_json(&sidecar_path(&matrix_path), &CsvSidecar { meta: ctx.meta() })?;
    Ok(())
}

pub fn spectrum(args: &InputArgs, horizon: &str, shuffles: usize) -> Result<()> {
    let horizon: Horizon = horizon.parse()?;
    let scope = load_scope(args)?;
    let mut cfg = run_config(args, "spectrum", &scope, &horizon.to_string());
    cfg.n_shuffles = Some(shuffles);
    create_out(&args.out)?;
    for (year, trades) in &scope.by_year {
        let ctx = YearCtx {
            cfg: &cfg,
            args,
            out: &args.out,
            stock: &scope.stock,
            year: *year,
            trades,
            session: scope.session,
        };
        spectrum_year(&ctx, horizon, shuffles)?;
    }
    Ok(())
}

/// Classification of one year at the given horizon; returns the labels for
/// reuse by transitions and herding.
fn classify_year(ctx: &YearCtx<'_>, horizon: Horizon) -> Result<BTreeMap<FirmId, GroupLabel>> {
    let firms = ctx.cross_section_universe()?;
    let data = ctx.build(&firms, horizon)?;
    let c = correlation_matrix(&data.panel)?;
    let fits = fit_one_factor(&data.panel, &data.returns)?;
    let sigma = 1.0 / (data.panel.n_intervals() as f64).sqrt();
    let labels = classify_firms(&fits, Some(sigma))?;
    let sizes = size_proxies(ctx.trades);

    let rows: Vec<ClassifyRow<'_>> = fits
        .iter()
        .map(|fit| ClassifyRow {
            fit,
            sigma,
            label: labels[&fit.firm],
            size_proxy: sizes.get(&fit.firm).map(|s| s.avg_daily_value),
        })
        .collect();
    let classify_path = ctx.csv_path("classify", horizon);
    let mut buf = Vec::new();
    write_classify_csv(&mut buf, &rows)?;
    write_file(&classify_path, &buf)?;
    write_json(&sidecar_path(&classify_path), &CsvSidecar { meta: ctx.meta() })?;

    let rho: Vec<f64> = fits.iter().map(|f| f.rho).collect();
    let sorted = sort_matrix_by_rho(&c, &rho, sigma)?;
    let sorted_path = ctx.csv_path("classify_sorted_matrix", horizon);
    let mut buf = Vec::new();
    write_sorted_matrix_csv(&mut buf, &sorted)?;
    write_file(&sorted_path, &buf)?;
    write_json(
        &sidecar_path(&sorted_path),
        &SortedMatrixMeta {
            meta: ctx.meta(),
            order: sorted.order.clone(),
            boundary_lower: sorted.boundaries.0,
            boundary_upper: sorted.boundaries.1,
            sigma,
        },
    )?;
    Ok(labels)
}

pub fn classify_cmd(args: &InputArgs, horizon: &str) -> Result<()> {
    let horizon: Horizon = horizon.parse()?;
    for_each_year(args, "classify", &horizon.to_string(), |ctx| {
        classify_year(ctx, horizon).map(|_| ())
    })
}

fn transitions_from_labels(
    cfg: &RunConfig,
    out: &Path,
    stock: &str,
    labels_by_year: &BTreeMap<i32, BTreeMap<FirmId, GroupLabel>>,
) -> Result<()> {
    let matrix = transition_matrix(labels_by_year)?;
    let years: Vec<i32> = labels_by_year.keys().copied().collect();
    let path = out.join(format!(
        "transitions_{stock}_{}-{}.json",
        years.first().unwrap(),
        years.last().unwrap()
    ));
    let mut buf = Vec::new();
    write_transitions_json(&mut buf, cfg.meta(), years, &matrix)?;
    write_file(&path, &buf)
}

pub fn transitions(args: &InputArgs) -> Result<()> {
    let scope = load_scope(args)?;
    let cfg = run_config(args, "transitions", &scope, "1d");
    create_out(&args.out)?;
    let mut labels_by_year = BTreeMap::new();
    for (year, trades) in &scope.by_year {
        let ctx = YearCtx {
            cfg: &cfg,
            args,
            out: &args.out,
            stock: &scope.stock,
            year: *year,
            trades,
            session: scope.session,
        };
        labels_by_year.insert(*year, classify_year(&ctx, Horizon::Days(1))?);
    }
    transitions_from_labels(&cfg, &args.out, &scope.stock, &labels_by_year)
}

fn causality_year(ctx: &YearCtx<'_>, horizon: Horizon) -> Result<()> {
    let Some(minutes) = horizon.minutes() else {
        return Err(Error::Config(
            "causality analysis needs an intraday horizon".into(),
        ));
    };
    let firms = ctx.universe()?;
    let data = ctx.build(&firms, horizon)?;
    let blocks = data.panel.grid().day_blocks();
    let window = INTEGRATION_LAGS as i64;

    let mut profiles = Vec::with_capacity(firms.len());
    let mut integrated = Vec::with_capacity(firms.len());
    for (i, firm) in data.panel.firms().iter().enumerate() {
        let v = data.panel.firm_series(i);
        let profile =
            lagged_cross_correlation(&v, data.returns.values(), -window, window, Some(&blocks))?;
        integrated.push(integrated_causality(
            firm.clone(),
            &v,
            data.returns.values(),
            Some(&blocks),
        )?);
        profiles.push((firm.clone(), profile));
    }

    let sidecar = CausalitySidecar {
        meta: ctx.meta(),
        overnight_pairs: "excluded",
        lag_window: INTEGRATION_LAGS,
    };
    let lags_path = ctx.csv_path("causality_lags", horizon);
    let mut buf = Vec::new();
    write_causality_lags_csv(&mut buf, &profiles, minutes)?;
    write_file(&lags_path, &buf)?;
    write_json(&sidecar_path(&lags_path), &sidecar)?;

    let integrated_path = ctx.csv_path("causality_integrated", horizon);
    let mut buf = Vec::new();
    write_causality_integrated_csv(&mut buf, &integrated)?;
    write_file(&integrated_path, &buf)?;
    write_json(&sidecar_path(&integrated_path), &sidecar)?;
    Ok(())
}

pub fn causality_cmd(args: &InputArgs, horizon: &str) -> Result<()> {
    let horizon: Horizon = horizon.parse()?;
    for_each_year(args, "causality", &horizon.to_string(), |ctx| {
        causality_year(ctx, horizon)
    })
}

fn herd_year(
    ctx: &YearCtx<'_>,
    horizon: Horizon,
    alpha: f64,
    labels: &BTreeMap<FirmId, GroupLabel>,
) -> Result<()> {
    let firms = ctx.universe()?;
    let scan_at = |h: Horizon| -> Result<(HerdingScan, YearData)> {
        let data = ctx.build(&firms, h)?;
        let scan = herding_scan(&data.panel, labels, h, alpha)?;
        Ok((scan, data))
    };

    let (scan, data) = scan_at(horizon)?;
    for skipped in &scan.skipped_groups {
        eprintln!(
            "warning: no {skipped} firms in {} {}; group skipped",
            ctx.stock, ctx.year
        );
    }
    let ledger_path = ctx.csv_path("herding_ledger", horizon);
    let mut buf = Vec::new();
    write_herding_ledger_csv(&mut buf, data.panel.grid(), &scan)?;
    write_file(&ledger_path, &buf)?;
    write_json(&sidecar_path(&ledger_path), &CsvSidecar { meta: ctx.meta() })?;

    let summary = conditional_stats(&scan)?;
    let summary_path = ctx
        .out
        .join(format!("herding_summary_{}_{}_{horizon}.json", ctx.stock, ctx.year));
    let mut buf = Vec::new();
    write_herding_summary_json(&mut buf, ctx.meta(), &scan, summary)?;
    write_file(&summary_path, &buf)?;

    // the timeline is a daily artifact regardless of the scan horizon
    let (daily_scan, daily_data) = if horizon == Horizon::Days(1) {
        (scan, data)
    } else {
        scan_at(Horizon::Days(1))?
    };
    let timeline_path = ctx.out.join(format!("timeline_{}_{}.csv", ctx.stock, ctx.year));
    let mut buf = Vec::new();
    write_timeline_csv(
        &mut buf,
        daily_data.panel.grid(),
        daily_data.returns.prices(),
        &daily_scan,
    )?;
    write_file(&timeline_path, &buf)?;
    write_json(&sidecar_path(&timeline_path), &CsvSidecar { meta: ctx.meta() })?;
    Ok(())
}

pub fn herd(args: &InputArgs, horizon: &str, alpha: f64) -> Result<()> {
    let horizon: Horizon = horizon.parse()?;
    let scope = load_scope(args)?;
    let mut cfg = run_config(args, "herd", &scope, &horizon.to_string());
    cfg.alpha = Some(alpha);
    create_out(&args.out)?;
    for (year, trades) in &scope.by_year {
        let ctx = YearCtx {
            cfg: &cfg,
            args,
            out: &args.out,
            stock: &scope.stock,
            year: *year,
            trades,
            session: scope.session,
        };
        let labels = classify_year(&ctx, Horizon::Days(1))?;
        herd_year(&ctx, horizon, alpha, &labels)?;
    }
    Ok(())
}

pub fn synth(config_path: &Path, trades_per_interval: usize, out: &Path) -> Result<()> {
    let raw = fs::read_to_string(config_path)?;
    let config: SynthConfig = serde_json::from_str(&raw)
        .map_err(|e| Error::Config(format!("invalid generator config: {e}")))?;
    let cfg = RunConfig {
        command: "synth".into(),
        input: None,
        config_file: Some(config_path.display().to_string()),
        stock: config.stock.clone(),
        years: vec![config.start_date.year()],
        horizon: config.horizon.to_string(),
        session_open: config.session.open.to_string(),
        session_close: config.session.close.to_string(),
        alpha: None,
        n_shuffles: None,
        min_days: None,
        min_transactions: None,
        trades_per_interval: Some(trades_per_interval),
        seed: config.seed,
        out: out.display().to_string(),
    };
    create_out(out)?;

    let (trades, truth) = generate_trade_tape(&config, trades_per_interval)?;
    let tape_path = out.join(format!("tape_{}.csv", config.stock));
    let mut buf = Vec::new();
    write_trade_tape(&mut buf, &trades)?;
    write_file(&tape_path, &buf)?;

    #[derive(Serialize)]
    struct TruthReport<'a> {
        meta: ReportMeta,
        truth: &'a invar_core::synth::GroundTruth,
    }
    write_json(
        &out.join(format!("ground_truth_{}.json", config.stock)),
        &TruthReport {
            meta: cfg.meta(),
            truth: &truth,
        },
    )?;

    let (panel, returns, _) = generate_panel(&config)?;
    let data = YearData {
        panel,
        returns,
        panel_diag: PanelDiagnostics::default(),
        returns_diag: ReturnDiagnostics::default(),
    };
    emit_panel_files(
        &cfg.meta(),
        out,
        &config.stock,
        config.start_date.year(),
        config.horizon,
        &data,
    )
}

pub fn full(args: &InputArgs, horizon: &str, alpha: f64, shuffles: usize) -> Result<()> {
    let horizon: Horizon = horizon.parse()?;
    if !horizon.is_intraday() {
        return Err(Error::Config(
            "the full pipeline needs an intraday horizon (daily artifacts are derived)".into(),
        ));
    }
    let scope = load_scope(args)?;
    let mut cfg = run_config(args, "full", &scope, &horizon.to_string());
    cfg.alpha = Some(alpha);
    cfg.n_shuffles = Some(shuffles);
    create_out(&args.out)?;

    let mut labels_by_year = BTreeMap::new();
    for (year, trades) in &scope.by_year {
        let ctx = YearCtx {
            cfg: &cfg,
            args,
            out: &args.out,
            stock: &scope.stock,
            year: *year,
            trades,
            session: scope.session,
        };
        let firms = ctx.universe()?;
        // panels and returns at the intraday and daily horizons
        let intraday = ctx.build(&firms, horizon)?;
        emit_panel_files(&ctx.meta(), ctx.out, ctx.stock, ctx.year, horizon, &intraday)?;
        let daily = ctx.build(&firms, Horizon::Days(1))?;
        emit_panel_files(&ctx.meta(), ctx.out, ctx.stock, ctx.year, Horizon::Days(1), &daily)?;

        spectrum_year(&ctx, Horizon::Days(1), shuffles)?;
        let labels = classify_year(&ctx, Horizon::Days(1))?;
        causality_year(&ctx, horizon)?;
        // herding at the intraday horizon plus the daily tables and timeline
        herd_year(&ctx, horizon, alpha, &labels)?;
        herd_year(&ctx, Horizon::Days(1), alpha, &labels)?;

        // the dominant factor tracks the return series; surface the number
        // in the log for quick inspection
        let c = correlation_matrix(&daily.panel)?;
        let spectrum = eigendecompose(&c)?;
        let factor = first_factor_series(&daily.panel, &spectrum)?;
        if let Some(rho) = invar_core::stats::pearson(&factor.values, daily.returns.values()) {
            eprintln!(
                "{} {year}: factor-return correlation {rho:.3}, lambda1 {:.3}",
                scope.stock, spectrum.eigenvalues[0]
            );
        }
        labels_by_year.insert(*year, labels);
    }

    if labels_by_year.len() >= 2
        && labels_by_year
            .keys()
            .zip(labels_by_year.keys().skip(1))
            .any(|(a, b)| b - a == 1)
    {
        transitions_from_labels(&cfg, &args.out, &scope.stock, &labels_by_year)?;
    } else if labels_by_year.len() >= 2 {
        eprintln!("warning: no consecutive year pair; transition report skipped");
    }
    Ok(())
}
