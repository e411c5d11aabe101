//! Group-level herding detection and validation.
//!
//! For each interval and strategy group: the herding indicator
//! `h = buyers / (buyers + sellers)` with an exact binomial significance
//! test, the euro-weighted buy ratio `b`, and the effective number of
//! firms `N_eff = 1 / sum(w_i^2)` with `w_i = v_i / sum |v_j|`. Summary
//! statistics are reported unconditionally and conditional on buy/sell
//! herding intervals, with Welch tests on the conditional means.

mod binomial;
mod ttest;

pub use binomial::{binomial_tail_ge, min_significant_count};
pub use ttest::{welch_t_test, WelchTest};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::classify::GroupLabel;
use crate::error::{Error, Result};
use crate::market::{FirmId, Horizon, InventoryPanel};

/// Herding state of one (interval, group) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HerdingLabel {
    BuyHerd,
    SellHerd,
    NoHerd,
    /// No group member traded in the interval.
    Inactive,
}

impl fmt::Display for HerdingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            HerdingLabel::BuyHerd => "BuyHerd",
            HerdingLabel::SellHerd => "SellHerd",
            HerdingLabel::NoHerd => "NoHerd",
            HerdingLabel::Inactive => "Inactive",
        };
        f.write_str(name)
    }
}

/// Fraction of active firms that are net buyers; `None` when nobody is
/// active. Firms with exactly zero inventory change count in neither tally.
pub fn herding_indicator(n_buy: usize, n_sell: usize) -> Option<f64> {
    let n = n_buy + n_sell;
    if n == 0 {
        return None;
    }
    Some(n_buy as f64 / n as f64)
}

/// Exact binomial test of the buyer/seller split.
///
/// With n = buyers + sellers active firms the interval is buy herding when
/// P[Bin(n, p) >= buyers] < alpha, sell herding when
/// P[Bin(n, p) >= sellers] < alpha, and unremarkable otherwise.
pub fn binomial_herding_test(
    n_buy: usize,
    n_sell: usize,
    p: f64,
    alpha: f64,
) -> Result<HerdingLabel> {
    binomial::check_test_config(p, alpha)?;
    let n = (n_buy + n_sell) as u64;
    if n == 0 {
        return Ok(HerdingLabel::Inactive);
    }
    if binomial_tail_ge(n, n_buy as u64, p) < alpha {
        Ok(HerdingLabel::BuyHerd)
    } else if binomial_tail_ge(n, n_sell as u64, p) < alpha {
        Ok(HerdingLabel::SellHerd)
    } else {
        Ok(HerdingLabel::NoHerd)
    }
}

/// Euro-weighted buy ratio: bought value over total traded value.
/// `None` when every value is zero.
pub fn buy_ratio(values: &[f64]) -> Option<f64> {
    let bought: f64 = values.iter().filter(|v| **v > 0.0).sum();
    let sold: f64 = values.iter().filter(|v| **v < 0.0).map(|v| v.abs()).sum();
    let total = bought + sold;
    if total <= 0.0 {
        return None;
    }
    Some(bought / total)
}

/// Effective number of firms driving the group's inventory change:
/// `1 / sum w_i^2` with `w_i = v_i / sum |v_j|`. Ranges from 1 (one firm
/// dominates) to the number of nonzero entries (all equal). `None` when
/// every value is zero.
pub fn effective_number(values: &[f64]) -> Option<f64> {
    let total: f64 = values.iter().map(|v| v.abs()).sum();
    if total <= 0.0 {
        return None;
    }
    let sum_sq: f64 = values.iter().map(|v| (v / total) * (v / total)).sum();
    Some(1.0 / sum_sq)
}

/// One (interval, group) row of the herding ledger.
#[derive(Debug, Clone, Serialize)]
pub struct LedgerRow {
    pub interval: usize,
    pub group: GroupLabel,
    /// Annual group membership, the N of N_eff/N.
    pub group_size: usize,
    pub n_buy: usize,
    pub n_sell: usize,
    pub h: Option<f64>,
    pub label: HerdingLabel,
    pub b: Option<f64>,
    pub n_eff: Option<f64>,
}

/// Ledger plus scan-level warnings.
#[derive(Debug, Clone)]
pub struct HerdingScan {
    pub rows: Vec<LedgerRow>,
    pub horizon: Horizon,
    pub alpha: f64,
    /// Groups requested but empty, skipped with a warning.
    pub skipped_groups: Vec<GroupLabel>,
}

/// Scans a panel interval by interval for each strategy group.
///
/// `groups` maps firms to their label; every mapped firm must be a panel
/// column. The panel's grid must carry the requested horizon.
pub fn herding_scan(
    panel: &InventoryPanel,
    groups: &BTreeMap<FirmId, GroupLabel>,
    horizon: Horizon,
    alpha: f64,
) -> Result<HerdingScan> {
    binomial::check_test_config(0.5, alpha)?;
    if panel.grid().horizon() != horizon {
        return Err(Error::GridMismatch(format!(
            "panel grid is at {}, scan requested {horizon}",
            panel.grid().horizon()
        )));
    }

    let mut members: BTreeMap<GroupLabel, Vec<usize>> = BTreeMap::new();
    for (firm, label) in groups {
        let Some(col) = panel.firm_index(firm) else {
            return Err(Error::UnknownFirm(format!("{firm} is not a panel column")));
        };
        members.entry(*label).or_default().push(col);
    }

    let mut skipped_groups = Vec::new();
    for label in GroupLabel::SOURCES {
        if groups.values().any(|l| *l == label) {
            continue;
        }
        skipped_groups.push(label);
    }

    let mut rows = Vec::with_capacity(panel.n_intervals() * members.len());
    let mut values = Vec::new();
    for t in 0..panel.n_intervals() {
        for (label, cols) in &members {
            values.clear();
            values.extend(cols.iter().map(|&i| panel.values()[(t, i)]));
            let n_buy = values.iter().filter(|v| **v > 0.0).count();
            let n_sell = values.iter().filter(|v| **v < 0.0).count();
            rows.push(LedgerRow {
                interval: t,
                group: *label,
                group_size: cols.len(),
                n_buy,
                n_sell,
                h: herding_indicator(n_buy, n_sell),
                label: binomial_herding_test(n_buy, n_sell, 0.5, alpha)?,
                b: buy_ratio(&values),
                n_eff: effective_number(&values),
            });
        }
    }
    Ok(HerdingScan {
        rows,
        horizon,
        alpha,
        skipped_groups,
    })
}

/// Mean, plus-or-minus one standard deviation, and record count of one
/// summary cell. The deviation is the population standard deviation, so a
/// single record reports zero spread.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryCell {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

fn summarize(values: &[f64]) -> Option<SummaryCell> {
    if values.is_empty() {
        return None;
    }
    Some(SummaryCell {
        mean: crate::stats::mean(values),
        std: crate::stats::population_std(values),
        count: values.len(),
    })
}

/// Welch verdict comparing a conditional sample against the unconditional
/// one; `None` when either side is too small to test.
fn verdict(uncond: &[f64], cond: &[f64], confidence: f64) -> Option<WelchTest> {
    if uncond.len() < 2 || cond.len() < 2 {
        return None;
    }
    welch_t_test(uncond, cond, confidence).ok()
}

/// Per-group herding summary over one scan.
#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub group: GroupLabel,
    pub horizon: String,
    pub group_size: usize,
    pub n_intervals: usize,
    pub pct_herding: f64,
    pub pct_buy_herding: f64,
    pub pct_sell_herding: f64,
    pub pct_no_herding: f64,
    pub pct_inactive: f64,
    pub b_unconditional: Option<SummaryCell>,
    pub b_buy_herding: Option<SummaryCell>,
    pub b_sell_herding: Option<SummaryCell>,
    pub neff_ratio_unconditional: Option<SummaryCell>,
    pub neff_ratio_buy_herding: Option<SummaryCell>,
    pub neff_ratio_sell_herding: Option<SummaryCell>,
    /// Welch tests of conditional against unconditional means at the 99%
    /// level, mirroring the marker logic of the validation tables.
    pub t_b_buy: Option<WelchTest>,
    pub t_b_sell: Option<WelchTest>,
    pub t_neff_buy: Option<WelchTest>,
    pub t_neff_sell: Option<WelchTest>,
}

/// Aggregates a ledger into per-group summaries (99% confidence verdicts).
pub fn conditional_stats(scan: &HerdingScan) -> Result<Vec<GroupSummary>> {
    if scan.rows.is_empty() {
        return Err(Error::InsufficientData("empty herding ledger".into()));
    }
    let mut by_group: BTreeMap<GroupLabel, Vec<&LedgerRow>> = BTreeMap::new();
    for row in &scan.rows {
        by_group.entry(row.group).or_default().push(row);
    }

    let mut out = Vec::new();
    for (group, rows) in by_group {
        let n = rows.len();
        let count = |label: HerdingLabel| rows.iter().filter(|r| r.label == label).count();
        let n_buy = count(HerdingLabel::BuyHerd);
        let n_sell = count(HerdingLabel::SellHerd);
        let n_none = count(HerdingLabel::NoHerd);
        let n_inactive = count(HerdingLabel::Inactive);
        let pct = |k: usize| 100.0 * k as f64 / n as f64;

        let group_size = rows.first().map(|r| r.group_size).unwrap_or(0);
        let collect_b = |pred: &dyn Fn(&LedgerRow) -> bool| -> Vec<f64> {
            rows.iter().filter(|r| pred(r)).filter_map(|r| r.b).collect()
        };
        let collect_neff = |pred: &dyn Fn(&LedgerRow) -> bool| -> Vec<f64> {
            rows.iter()
                .filter(|r| pred(r))
                .filter_map(|r| r.n_eff)
                .map(|v| v / group_size as f64)
                .collect()
        };
        let b_all = collect_b(&|_| true);
        let b_bh = collect_b(&|r| r.label == HerdingLabel::BuyHerd);
        let b_sh = collect_b(&|r| r.label == HerdingLabel::SellHerd);
        let ne_all = collect_neff(&|_| true);
        let ne_bh = collect_neff(&|r| r.label == HerdingLabel::BuyHerd);
        let ne_sh = collect_neff(&|r| r.label == HerdingLabel::SellHerd);

        out.push(GroupSummary {
            group,
            horizon: scan.horizon.to_string(),
            group_size,
            n_intervals: n,
            pct_herding: pct(n_buy + n_sell),
            pct_buy_herding: pct(n_buy),
            pct_sell_herding: pct(n_sell),
            pct_no_herding: pct(n_none),
            pct_inactive: pct(n_inactive),
            t_b_buy: verdict(&b_all, &b_bh, 0.99),
            t_b_sell: verdict(&b_all, &b_sh, 0.99),
            t_neff_buy: verdict(&ne_all, &ne_bh, 0.99),
            t_neff_sell: verdict(&ne_all, &ne_sh, 0.99),
            b_unconditional: summarize(&b_all),
            b_buy_herding: summarize(&b_bh),
            b_sell_herding: summarize(&b_sh),
            neff_ratio_unconditional: summarize(&ne_all),
            neff_ratio_buy_herding: summarize(&ne_bh),
            neff_ratio_sell_herding: summarize(&ne_sh),
        });
    }
    Ok(out)
}
