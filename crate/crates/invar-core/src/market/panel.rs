//! Inventory-variation panels and return series on an interval grid.

use std::collections::{BTreeSet, HashMap, HashSet};

use chrono::{Datelike, NaiveDate};
use ndarray::Array2;

use super::{FirmId, Horizon, IntervalGrid, TradeRecord};
use crate::error::{Error, Result};

/// T x N panel of per-interval, per-firm signed euro inventory changes.
///
/// `values[(t, i)]` is the euro value firm `i` bought minus the value it
/// sold during interval `t`; `activity[(t, i)]` records whether the firm
/// participated in at least one trade there. Inactive cells hold exactly
/// zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InventoryPanel {
    grid: IntervalGrid,
    firms: Vec<FirmId>,
    values: Array2<f64>,
    activity: Array2<bool>,
}

impl InventoryPanel {
    /// Builds a panel from raw parts, validating dimensions and the
    /// inactive-cells-are-zero invariant.
    pub fn new(
        grid: IntervalGrid,
        firms: Vec<FirmId>,
        values: Array2<f64>,
        activity: Array2<bool>,
    ) -> Result<Self> {
        if values.nrows() != grid.len() || values.ncols() != firms.len() {
            return Err(Error::Dimension(format!(
                "values are {}x{} but the grid has {} intervals and {} firms",
                values.nrows(),
                values.ncols(),
                grid.len(),
                firms.len()
            )));
        }
        if values.dim() != activity.dim() {
            return Err(Error::Dimension("activity must match values".into()));
        }
        for ((t, i), v) in values.indexed_iter() {
            if !activity[(t, i)] && *v != 0.0 {
                return Err(Error::Dimension(format!(
                    "inactive cell ({t}, {i}) holds nonzero value {v}"
                )));
            }
        }
        Ok(InventoryPanel::from_parts(grid, firms, values, activity))
    }

    pub(crate) fn from_parts(
        grid: IntervalGrid,
        firms: Vec<FirmId>,
        values: Array2<f64>,
        activity: Array2<bool>,
    ) -> Self {
        debug_assert_eq!(values.nrows(), grid.len());
        debug_assert_eq!(values.ncols(), firms.len());
        debug_assert_eq!(values.dim(), activity.dim());
        InventoryPanel {
            grid,
            firms,
            values,
            activity,
        }
    }

    pub fn grid(&self) -> &IntervalGrid {
        &self.grid
    }

    pub fn firms(&self) -> &[FirmId] {
        &self.firms
    }

    /// Number of intervals (rows).
    pub fn n_intervals(&self) -> usize {
        self.values.nrows()
    }

    /// Number of firms (columns).
    pub fn n_firms(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn activity(&self) -> &Array2<bool> {
        &self.activity
    }

    /// Inventory variation series of one firm, by column index.
    pub fn firm_series(&self, col: usize) -> Vec<f64> {
        self.values.column(col).to_vec()
    }

    pub fn firm_index(&self, firm: &FirmId) -> Option<usize> {
        self.firms.iter().position(|f| f == firm)
    }
}

/// Per-interval log-returns and last-trade prices on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    grid: IntervalGrid,
    /// Log-return ln(p_t / p_{t-1}); 0.0 for the first interval and for
    /// gap intervals.
    values: Vec<f64>,
    /// Last trade price at or before the interval's end (carried forward
    /// over gaps).
    prices: Vec<f64>,
    /// True where the interval itself contained no trade.
    gaps: Vec<bool>,
}

impl ReturnSeries {
    /// Builds a return series from raw parts, validating lengths.
    pub fn new(
        grid: IntervalGrid,
        values: Vec<f64>,
        prices: Vec<f64>,
        gaps: Vec<bool>,
    ) -> Result<Self> {
        if values.len() != grid.len() || prices.len() != grid.len() || gaps.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "return series parts must match the {}-interval grid",
                grid.len()
            )));
        }
        Ok(ReturnSeries::from_parts(grid, values, prices, gaps))
    }

    pub(crate) fn from_parts(
        grid: IntervalGrid,
        values: Vec<f64>,
        prices: Vec<f64>,
        gaps: Vec<bool>,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ReturnSeries {
            grid,
            values,
            prices,
            gaps,
        }
    }

    pub fn grid(&self) -> &IntervalGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn gaps(&self) -> &[bool] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Counters from panel construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct PanelDiagnostics {
    /// Trades whose timestamp fell outside the grid.
    pub dropped_outside_grid: usize,
}

/// Counters from return-series construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct ReturnDiagnostics {
    /// Intervals with no trade whose price was carried forward.
    pub gap_intervals: usize,
    /// Leading intervals backfilled with the first observed price.
    pub backfilled_leading: usize,
    pub dropped_outside_grid: usize,
}

/// Selects firms that traded on at least `min_days` distinct days and took
/// part in at least `min_transactions` transactions.
///
/// The trades must cover a single stock and a single calendar year; a firm
/// appearing as both buyer and seller of one trade counts once for that
/// trade and day.
pub fn select_active_firms(
    trades: &[TradeRecord],
    min_days: usize,
    min_transactions: usize,
) -> Result<BTreeSet<FirmId>> {
    if let Some(first) = trades.first() {
        let stock = &first.stock;
        let year = first.timestamp.date().year();
        for t in trades {
            if &t.stock != stock {
                return Err(Error::Config(format!(
                    "trades span multiple stocks ({stock}, {})",
                    t.stock
                )));
            }
            if t.timestamp.date().year() != year {
                return Err(Error::Config(format!(
                    "trades span multiple years ({year}, {})",
                    t.timestamp.date().year()
                )));
            }
        }
    }

    let mut days: HashMap<&FirmId, HashSet<NaiveDate>> = HashMap::new();
    let mut transactions: HashMap<&FirmId, usize> = HashMap::new();
    for t in trades {
        let date = t.timestamp.date();
        days.entry(&t.buyer).or_default().insert(date);
        *transactions.entry(&t.buyer).or_default() += 1;
        if t.seller != t.buyer {
            days.entry(&t.seller).or_default().insert(date);
            *transactions.entry(&t.seller).or_default() += 1;
        }
    }

    Ok(transactions
        .into_iter()
        .filter(|(firm, tx)| *tx >= min_transactions && days[*firm].len() >= min_days)
        .map(|(firm, _)| firm.clone())
        .collect())
}

/// Aggregates trades into an inventory panel over the given firms and grid.
///
/// Firms not appearing in any trade produce all-zero inactive columns.
/// Trades outside the grid are dropped and tallied in the diagnostics.
pub fn build_inventory_panel(
    trades: &[TradeRecord],
    firms: &[FirmId],
    grid: &IntervalGrid,
) -> Result<(InventoryPanel, PanelDiagnostics)> {
    let index: HashMap<&FirmId, usize> = firms.iter().enumerate().map(|(i, f)| (f, i)).collect();
    if index.len() != firms.len() {
        return Err(Error::Config("duplicate firm in panel universe".into()));
    }
    let t_len = grid.len();
    let mut values = Array2::zeros((t_len, firms.len()));
    let mut activity = Array2::from_elem((t_len, firms.len()), false);
    let mut diag = PanelDiagnostics::default();

    for trade in trades {
        let Some(t) = grid.locate(trade.timestamp) else {
            diag.dropped_outside_grid += 1;
            continue;
        };
        let value = trade.value();
        if let Some(&i) = index.get(&trade.buyer) {
            values[(t, i)] += value;
            activity[(t, i)] = true;
        }
        if let Some(&i) = index.get(&trade.seller) {
            values[(t, i)] -= value;
            activity[(t, i)] = true;
        }
    }

    Ok((
        InventoryPanel::from_parts(grid.clone(), firms.to_vec(), values, activity),
        diag,
    ))
}

/// Builds the last-trade price and log-return series for a grid.
///
/// Gap intervals carry the previous price forward with a zero return;
/// leading intervals before the first trade are backfilled with the first
/// observed price. The first interval's return is 0 by convention. Fewer
/// than two priced intervals is an error.
pub fn build_return_series(
    trades: &[TradeRecord],
    grid: &IntervalGrid,
) -> Result<(ReturnSeries, ReturnDiagnostics)> {
    let t_len = grid.len();
    let mut last: Vec<Option<(chrono::NaiveDateTime, f64)>> = vec![None; t_len];
    let mut diag = ReturnDiagnostics::default();

    for trade in trades {
        let Some(t) = grid.locate(trade.timestamp) else {
            diag.dropped_outside_grid += 1;
            continue;
        };
        // last trade wins; ties at the same second resolve to tape order
        match &last[t] {
            Some((ts, _)) if *ts > trade.timestamp => {}
            _ => last[t] = Some((trade.timestamp, trade.price)),
        }
    }

    let priced = last.iter().filter(|p| p.is_some()).count();
    if priced < 2 {
        return Err(Error::InsufficientData(format!(
            "return series needs at least 2 priced intervals, found {priced}"
        )));
    }

    let first_price = last.iter().flatten().next().unwrap().1;
    let mut prices = Vec::with_capacity(t_len);
    let mut values = Vec::with_capacity(t_len);
    let mut gaps = Vec::with_capacity(t_len);
    let mut prev: Option<f64> = None;
    for cell in &last {
        let (price, gap) = match cell {
            Some((_, p)) => (*p, false),
            None => {
                if prev.is_none() {
                    diag.backfilled_leading += 1;
                } else {
                    diag.gap_intervals += 1;
                }
                (prev.unwrap_or(first_price), true)
            }
        };
        let ret = match prev {
            Some(p) => (price / p).ln(),
            None => 0.0,
        };
        values.push(ret);
        prices.push(price);
        gaps.push(gap);
        prev = Some(price);
    }

    Ok((ReturnSeries::from_parts(grid.clone(), values, prices, gaps), diag))
}

/// Rolls an intraday panel up to the 1-day horizon by summing each day's
/// intervals in order. The daily cell is exactly the in-order block sum of
/// the intraday cells, so intraday and daily panels stay consistent to the
/// bit.
pub fn aggregate_daily(panel: &InventoryPanel) -> Result<InventoryPanel> {
    let grid = panel.grid();
    let Some(ranges) = grid.day_ranges() else {
        return Err(Error::GridMismatch(
            "daily aggregation requires an intraday panel".into(),
        ));
    };
    let daily_grid = IntervalGrid::build(grid.dates().to_vec(), grid.session(), Horizon::Days(1))?;
    let n = panel.n_firms();
    let mut values = Array2::zeros((daily_grid.len(), n));
    let mut activity = Array2::from_elem((daily_grid.len(), n), false);
    for (d, range) in ranges.iter().enumerate() {
        for i in 0..n {
            let mut sum = 0.0;
            let mut act = false;
            for t in range.clone() {
                sum += panel.values()[(t, i)];
                act |= panel.activity()[(t, i)];
            }
            values[(d, i)] = sum;
            activity[(d, i)] = act;
        }
    }
    Ok(InventoryPanel::from_parts(
        daily_grid,
        panel.firms().to_vec(),
        values,
        activity,
    ))
}
