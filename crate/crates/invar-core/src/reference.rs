//! Golden reference statistics from the 2001-2004 BME/SIBE dataset.
//!
//! The originally studied exchange data is proprietary and not shipped, so
//! these published headline numbers serve as comparison constants for
//! golden reports: they are never asserted against synthetic runs, only
//! checked for internal consistency and echoed next to reproduced tables.

/// Active-firm universe sizes observed per (stock, year) set: around 70,
/// bounded by these extremes.
pub const ACTIVE_FIRMS_MIN: u32 = 54;
pub const ACTIVE_FIRMS_MAX: u32 = 82;

/// Correlation between the first spectral factor and the stock return
/// across the investigated sets.
pub const FACTOR_RETURN_CORR_MIN: f64 = 0.47;
pub const FACTOR_RETURN_CORR_MAX: f64 = 0.74;

/// Group census for one calendar year of Telefonica trading.
#[derive(Debug, Clone, Copy)]
pub struct GroupCensus {
    pub year: i32,
    pub reversing: u32,
    pub uncategorized: u32,
    pub trending: u32,
}

impl GroupCensus {
    pub fn total(&self) -> u32 {
        self.reversing + self.uncategorized + self.trending
    }
}

/// Telefonica census, 2001-2004.
pub const TELEFONICA_CENSUS: [GroupCensus; 4] = [
    GroupCensus { year: 2001, reversing: 43, uncategorized: 28, trending: 11 },
    GroupCensus { year: 2002, reversing: 39, uncategorized: 31, trending: 10 },
    GroupCensus { year: 2003, reversing: 42, uncategorized: 31, trending: 8 },
    GroupCensus { year: 2004, reversing: 37, uncategorized: 29, trending: 6 },
];

/// Year-to-year transition probabilities, rows R/U/T, columns R/U/T/E,
/// averaged over the three year changes (Telefonica).
pub const TRANSITIONS: [[f64; 4]; 3] = [
    [0.71, 0.16, 0.02, 0.10], // from Reversing
    [0.19, 0.62, 0.07, 0.12], // from Uncategorized
    [0.03, 0.34, 0.44, 0.18], // from Trending
];

/// Percent of herding intervals for one (group, horizon, year) cell.
#[derive(Debug, Clone, Copy)]
pub struct HerdingCell {
    pub year: i32,
    /// "R", "U" or "T".
    pub group: &'static str,
    /// "1d" or "15m".
    pub horizon: &'static str,
    pub pct_total: f64,
    pub pct_buy: f64,
    pub pct_sell: f64,
}

/// Percent of herding intervals, Telefonica 2001-2004 (250 daily and 8500
/// 15-minute intervals per year).
pub const TELEFONICA_HERDING: [HerdingCell; 24] = [
    HerdingCell { year: 2001, group: "R", horizon: "1d", pct_total: 68.0, pct_buy: 40.8, pct_sell: 27.2 },
    HerdingCell { year: 2002, group: "R", horizon: "1d", pct_total: 72.4, pct_buy: 50.0, pct_sell: 22.4 },
    HerdingCell { year: 2003, group: "R", horizon: "1d", pct_total: 64.0, pct_buy: 29.2, pct_sell: 34.8 },
    HerdingCell { year: 2004, group: "R", horizon: "1d", pct_total: 61.2, pct_buy: 23.6, pct_sell: 37.6 },
    HerdingCell { year: 2001, group: "U", horizon: "1d", pct_total: 23.2, pct_buy: 16.4, pct_sell: 6.8 },
    HerdingCell { year: 2002, group: "U", horizon: "1d", pct_total: 18.4, pct_buy: 13.6, pct_sell: 4.8 },
    HerdingCell { year: 2003, group: "U", horizon: "1d", pct_total: 24.8, pct_buy: 10.8, pct_sell: 14.0 },
    HerdingCell { year: 2004, group: "U", horizon: "1d", pct_total: 20.8, pct_buy: 6.8, pct_sell: 14.0 },
    HerdingCell { year: 2001, group: "T", horizon: "1d", pct_total: 10.4, pct_buy: 7.2, pct_sell: 3.2 },
    HerdingCell { year: 2002, group: "T", horizon: "1d", pct_total: 6.4, pct_buy: 2.4, pct_sell: 4.0 },
    HerdingCell { year: 2003, group: "T", horizon: "1d", pct_total: 6.0, pct_buy: 2.0, pct_sell: 4.0 },
    HerdingCell { year: 2004, group: "T", horizon: "1d", pct_total: 2.4, pct_buy: 1.2, pct_sell: 1.2 },
    HerdingCell { year: 2001, group: "R", horizon: "15m", pct_total: 36.2, pct_buy: 21.7, pct_sell: 14.5 },
    HerdingCell { year: 2002, group: "R", horizon: "15m", pct_total: 37.3, pct_buy: 24.9, pct_sell: 12.4 },
    HerdingCell { year: 2003, group: "R", horizon: "15m", pct_total: 29.2, pct_buy: 13.4, pct_sell: 15.8 },
    HerdingCell { year: 2004, group: "R", horizon: "15m", pct_total: 27.7, pct_buy: 10.8, pct_sell: 16.9 },
    HerdingCell { year: 2001, group: "U", horizon: "15m", pct_total: 10.7, pct_buy: 7.3, pct_sell: 3.4 },
    HerdingCell { year: 2002, group: "U", horizon: "15m", pct_total: 12.4, pct_buy: 7.6, pct_sell: 4.8 },
    HerdingCell { year: 2003, group: "U", horizon: "15m", pct_total: 10.8, pct_buy: 3.8, pct_sell: 7.0 },
    HerdingCell { year: 2004, group: "U", horizon: "15m", pct_total: 13.7, pct_buy: 3.5, pct_sell: 10.2 },
    HerdingCell { year: 2001, group: "T", horizon: "15m", pct_total: 3.3, pct_buy: 2.1, pct_sell: 1.2 },
    HerdingCell { year: 2002, group: "T", horizon: "15m", pct_total: 6.6, pct_buy: 3.4, pct_sell: 3.2 },
    HerdingCell { year: 2003, group: "T", horizon: "15m", pct_total: 3.9, pct_buy: 1.7, pct_sell: 2.2 },
    HerdingCell { year: 2004, group: "T", horizon: "15m", pct_total: 3.3, pct_buy: 1.7, pct_sell: 1.6 },
];

/// One mean +/- std cell with its record count.
#[derive(Debug, Clone, Copy)]
pub struct MeanCell {
    pub mean: f64,
    pub std: f64,
    pub count: u32,
}

/// Buy-ratio and N_eff/N validation row (Telefonica 2001): unconditional
/// and conditional on buy/sell herding, with the 99% t-test markers.
#[derive(Debug, Clone, Copy)]
pub struct ValidationRow {
    pub group: &'static str,
    pub horizon: &'static str,
    pub b: MeanCell,
    pub b_bh: MeanCell,
    pub b_sh: MeanCell,
    pub neff: MeanCell,
    pub neff_bh: MeanCell,
    pub neff_sh: MeanCell,
    /// Conditional b means statistically distinct from the unconditional
    /// one (buy-herding and sell-herding conditionals).
    pub b_bh_distinct: bool,
    pub b_sh_distinct: bool,
    pub neff_bh_distinct: bool,
    pub neff_sh_distinct: bool,
}

/// Telefonica 2001 validation table.
pub const TELEFONICA_VALIDATION: [ValidationRow; 6] = [
    ValidationRow {
        group: "R", horizon: "1d",
        b: MeanCell { mean: 0.52, std: 0.28, count: 250 },
        b_bh: MeanCell { mean: 0.75, std: 0.16, count: 102 },
        b_sh: MeanCell { mean: 0.20, std: 0.14, count: 68 },
        neff: MeanCell { mean: 0.19, std: 0.06, count: 250 },
        neff_bh: MeanCell { mean: 0.20, std: 0.07, count: 102 },
        neff_sh: MeanCell { mean: 0.20, std: 0.06, count: 68 },
        b_bh_distinct: true, b_sh_distinct: true, neff_bh_distinct: false, neff_sh_distinct: false,
    },
    ValidationRow {
        group: "U", horizon: "1d",
        b: MeanCell { mean: 0.48, std: 0.16, count: 250 },
        b_bh: MeanCell { mean: 0.55, std: 0.16, count: 41 },
        b_sh: MeanCell { mean: 0.40, std: 0.14, count: 17 },
        neff: MeanCell { mean: 0.26, std: 0.07, count: 250 },
        neff_bh: MeanCell { mean: 0.26, std: 0.07, count: 41 },
        neff_sh: MeanCell { mean: 0.25, std: 0.07, count: 17 },
        b_bh_distinct: false, b_sh_distinct: false, neff_bh_distinct: false, neff_sh_distinct: false,
    },
    ValidationRow {
        group: "T", horizon: "1d",
        b: MeanCell { mean: 0.51, std: 0.25, count: 250 },
        b_bh: MeanCell { mean: 0.81, std: 0.20, count: 18 },
        b_sh: MeanCell { mean: 0.22, std: 0.19, count: 8 },
        neff: MeanCell { mean: 0.41, std: 0.12, count: 250 },
        neff_bh: MeanCell { mean: 0.44, std: 0.12, count: 18 },
        neff_sh: MeanCell { mean: 0.37, std: 0.08, count: 8 },
        b_bh_distinct: true, b_sh_distinct: true, neff_bh_distinct: false, neff_sh_distinct: false,
    },
    ValidationRow {
        group: "R", horizon: "15m",
        b: MeanCell { mean: 0.50, std: 0.22, count: 8500 },
        b_bh: MeanCell { mean: 0.67, std: 0.18, count: 1845 },
        b_sh: MeanCell { mean: 0.31, std: 0.18, count: 1230 },
        neff: MeanCell { mean: 0.15, std: 0.06, count: 8500 },
        neff_bh: MeanCell { mean: 0.16, std: 0.06, count: 1845 },
        neff_sh: MeanCell { mean: 0.16, std: 0.06, count: 1230 },
        b_bh_distinct: true, b_sh_distinct: true, neff_bh_distinct: true, neff_sh_distinct: true,
    },
    ValidationRow {
        group: "U", horizon: "15m",
        b: MeanCell { mean: 0.49, std: 0.23, count: 8500 },
        b_bh: MeanCell { mean: 0.68, std: 0.21, count: 622 },
        b_sh: MeanCell { mean: 0.29, std: 0.20, count: 293 },
        neff: MeanCell { mean: 0.16, std: 0.06, count: 8500 },
        neff_bh: MeanCell { mean: 0.18, std: 0.06, count: 622 },
        neff_sh: MeanCell { mean: 0.18, std: 0.06, count: 293 },
        b_bh_distinct: true, b_sh_distinct: true, neff_bh_distinct: true, neff_sh_distinct: true,
    },
    ValidationRow {
        group: "T", horizon: "15m",
        b: MeanCell { mean: 0.51, std: 0.25, count: 8500 },
        b_bh: MeanCell { mean: 0.88, std: 0.19, count: 181 },
        b_sh: MeanCell { mean: 0.15, std: 0.20, count: 102 },
        neff: MeanCell { mean: 0.31, std: 0.10, count: 8500 },
        neff_bh: MeanCell { mean: 0.31, std: 0.12, count: 181 },
        neff_sh: MeanCell { mean: 0.32, std: 0.11, count: 102 },
        b_bh_distinct: true, b_sh_distinct: true, neff_bh_distinct: false, neff_sh_distinct: false,
    },
];
