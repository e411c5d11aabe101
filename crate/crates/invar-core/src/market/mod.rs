//! Trade tapes, interval grids, inventory panels and return series.
//!
//! The observable of interest is the inventory variation of a firm: euro
//! value bought minus euro value sold over an interval. This module parses
//! raw trade tapes, selects active firms, and aggregates trades onto a
//! common interval grid.

mod grid;
mod io;
mod panel;
mod tape;

pub use grid::{Horizon, Interval, IntervalGrid, Session};
pub use io::{read_panel_csv, write_panel_csv, write_returns_csv, GridMeta};
pub use panel::{
    aggregate_daily, build_inventory_panel, build_return_series, select_active_firms,
    InventoryPanel, PanelDiagnostics, ReturnDiagnostics, ReturnSeries,
};
pub use tape::{parse_trade_tape, parse_trade_tape_path, write_trade_tape};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque firm identifier, stable across years of the same dataset.
///
/// Identifiers starting with an underscore are auxiliary by convention
/// (e.g. the synthetic counterparty pool) and are excluded from analysis
/// universes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FirmId(String);

impl FirmId {
    pub fn new(id: impl Into<String>) -> Self {
        FirmId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Auxiliary ids (underscore prefix) are bookkeeping constructs, not
    /// analyzable market participants.
    pub fn is_auxiliary(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Display for FirmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FirmId {
    fn from(s: &str) -> Self {
        FirmId(s.to_owned())
    }
}

impl From<String> for FirmId {
    fn from(s: String) -> Self {
        FirmId(s)
    }
}

/// One executed transaction.
///
/// `buyer == seller` is allowed (an internal cross); such a trade nets to
/// zero inventory change but still counts as activity.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeRecord {
    pub timestamp: chrono::NaiveDateTime,
    pub stock: String,
    pub buyer: FirmId,
    pub seller: FirmId,
    /// Price per share, > 0.
    pub price: f64,
    /// Shares exchanged, > 0.
    pub volume: f64,
}

impl TradeRecord {
    /// Euro value of the trade.
    pub fn value(&self) -> f64 {
        self.price * self.volume
    }
}
