//! Synthetic one-factor market generator.
//!
//! Produces panels and trade tapes with known ground truth so every
//! pipeline stage can be validated end to end. Each firm follows
//! `v_i(t) = gamma_i * S_k(t) + eps_i(t)` where `S_k` is the sum of the
//! current and the `k` most recent returns (`k = responder_lag`; `k = 0`
//! is the purely synchronous one-factor model) and `eps` is Gaussian
//! idiosyncratic noise. `gamma_i` is chosen so the population correlation
//! with the synchronous return hits the group target at the configured
//! euro size scale. All randomness flows from a single seed.

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{
    FirmId, Horizon, IntervalGrid, InventoryPanel, ReturnSeries, Session, TradeRecord,
};

/// Counterparty pool absorbing the other side of every synthetic trade.
/// Excluded from analysis universes by the underscore convention.
pub const POOL_FIRM: &str = "_POOL";

/// One strategy group of the synthetic population.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    /// Fraction of the firm universe (all fractions sum to 1).
    pub fraction: f64,
    /// Target population correlation with the synchronous return, |rho| < 1.
    pub rho: f64,
    /// Standard deviation of the firm's inventory variation, in euros.
    pub size_scale: f64,
}

/// Generator configuration. `seed` fully determines the output.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub stock: String,
    pub n_firms: usize,
    /// Requested number of intervals; rounded up to whole trading days for
    /// intraday horizons.
    pub n_intervals: usize,
    pub horizon: Horizon,
    pub session: Session,
    /// First candidate calendar date; trading days are consecutive weekdays
    /// from here.
    pub start_date: NaiveDate,
    pub groups: Vec<GroupSpec>,
    /// Per-interval standard deviation of the i.i.d. Gaussian log-return.
    pub return_std: f64,
    /// Responder window depth: v reacts to the current and the `k` most
    /// recent returns. 0 means purely synchronous.
    pub responder_lag: usize,
    pub initial_price: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            stock: "SYN".into(),
            n_firms: 70,
            n_intervals: 250,
            horizon: Horizon::Days(1),
            session: Session::default(),
            start_date: NaiveDate::from_ymd_opt(2001, 1, 1).unwrap(),
            groups: vec![
                GroupSpec {
                    fraction: 0.5,
                    rho: -0.3,
                    size_scale: 1.0e4,
                },
                GroupSpec {
                    fraction: 0.4,
                    rho: 0.0,
                    size_scale: 1.0e4,
                },
                GroupSpec {
                    fraction: 0.1,
                    rho: 0.4,
                    size_scale: 1.0e5,
                },
            ],
            return_std: 0.01,
            responder_lag: 0,
            initial_price: 100.0,
            seed: 42,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.n_firms == 0 {
            return Err(Error::Config("need at least one firm".into()));
        }
        if self.n_intervals < 2 {
            return Err(Error::Config("need at least two intervals".into()));
        }
        if self.groups.is_empty() {
            return Err(Error::Config("need at least one group".into()));
        }
        let total: f64 = self.groups.iter().map(|g| g.fraction).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "group fractions must sum to 1, got {total}"
            )));
        }
        let window = (self.responder_lag + 1) as f64;
        for (i, g) in self.groups.iter().enumerate() {
            if g.fraction < 0.0 {
                return Err(Error::Config(format!("group {i} has negative fraction")));
            }
            if g.size_scale <= 0.0 {
                return Err(Error::Config(format!("group {i} needs a positive size scale")));
            }
            if g.rho.abs() >= 1.0 {
                return Err(Error::Config(format!(
                    "group {i} target rho {} outside (-1, 1)",
                    g.rho
                )));
            }
            // residual variance sigma_v^2 (1 - (k+1) rho^2) must stay positive
            if window * g.rho * g.rho >= 1.0 {
                return Err(Error::Config(format!(
                    "group {i}: target rho {} infeasible at responder window {} \
                     (residual variance would be negative; need |rho| < {:.4})",
                    g.rho,
                    self.responder_lag,
                    (1.0 / window).sqrt()
                )));
            }
        }
        if self.return_std <= 0.0 {
            return Err(Error::Config("return std must be positive".into()));
        }
        if self.initial_price <= 0.0 {
            return Err(Error::Config("initial price must be positive".into()));
        }
        Ok(())
    }

    /// Trading grid implied by the config (consecutive weekdays).
    pub fn grid(&self) -> Result<IntervalGrid> {
        let days_needed = match self.horizon {
            Horizon::Minutes(m) => {
                let per_day = self.session.minutes().div_ceil(m) as usize;
                self.n_intervals.div_ceil(per_day)
            }
            Horizon::Days(d) => self.n_intervals * d as usize,
        };
        let mut dates = Vec::with_capacity(days_needed);
        let mut date = self.start_date;
        while dates.len() < days_needed {
            if !matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
                dates.push(date);
            }
            date += Duration::days(1);
        }
        IntervalGrid::build(dates, self.session, self.horizon)
    }
}

/// True group, slope and correlation per firm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FirmTruth {
    pub firm: FirmId,
    /// Index into the config's group list.
    pub group: usize,
    pub gamma: f64,
    pub rho: f64,
    pub residual_std: f64,
}

/// Ground truth delivered with every synthetic panel or tape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub firms: Vec<FirmTruth>,
    /// Realized return series, grid-aligned.
    pub returns: Vec<f64>,
}

/// Assigns firms to groups by largest remainder so counts hit `n` exactly.
fn group_counts(groups: &[GroupSpec], n: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = groups.iter().map(|g| (g.fraction * n as f64) as usize).collect();
    let mut rem: Vec<(f64, usize)> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| (g.fraction * n as f64 - counts[i] as f64, i))
        .collect();
    rem.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let mut assigned: usize = counts.iter().sum();
    let mut k = 0;
    while assigned < n {
        counts[rem[k % rem.len()].1] += 1;
        assigned += 1;
        k += 1;
    }
    counts
}

/// Draws the synthetic panel, its return series and the ground truth.
///
/// Deterministic given the config: returns are drawn first (including the
/// responder pre-window), then per-firm noise in firm order.
pub fn generate_panel(config: &SynthConfig) -> Result<(InventoryPanel, ReturnSeries, GroundTruth)> {
    config.validate()?;
    let grid = config.grid()?;
    let t_len = grid.len();
    let lag = config.responder_lag;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // r_ext carries `lag` pre-samples so early intervals see a full window
    let r_ext: Vec<f64> = (0..t_len + lag)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * config.return_std
        })
        .collect();
    let returns: Vec<f64> = r_ext[lag..].to_vec();

    let counts = group_counts(&config.groups, config.n_firms);
    let mut truths = Vec::with_capacity(config.n_firms);
    for (g, count) in counts.iter().enumerate() {
        let spec = &config.groups[g];
        let gamma = spec.rho * spec.size_scale / config.return_std;
        let window = (lag + 1) as f64;
        let residual_std = spec.size_scale * (1.0 - window * spec.rho * spec.rho).sqrt();
        for _ in 0..*count {
            let id = FirmId::new(format!("F{:03}", truths.len()));
            truths.push(FirmTruth {
                firm: id,
                group: g,
                gamma,
                rho: spec.rho,
                residual_std,
            });
        }
    }

    let mut values = Array2::zeros((t_len, config.n_firms));
    for (i, truth) in truths.iter().enumerate() {
        for t in 0..t_len {
            // window sum of the current and the `lag` previous returns
            let mut common = 0.0;
            for j in 0..=lag {
                common += r_ext[t + lag - j];
            }
            let noise: f64 = StandardNormal.sample(&mut rng);
            values[(t, i)] = truth.gamma * common + truth.residual_std * noise;
        }
    }
    let activity = Array2::from_elem((t_len, config.n_firms), true);
    let firms: Vec<FirmId> = truths.iter().map(|t| t.firm.clone()).collect();
    let panel = InventoryPanel::from_parts(grid.clone(), firms, values, activity);

    let mut prices = Vec::with_capacity(t_len);
    let mut log_price = config.initial_price.ln();
    for r in &returns {
        log_price += r;
        prices.push(log_price.exp());
    }
    let gaps = vec![false; t_len];
    let return_series = ReturnSeries::from_parts(grid, returns.clone(), prices, gaps);

    Ok((panel, return_series, GroundTruth { firms: truths, returns }))
}

/// Emits a trade tape reproducing a [`generate_panel`] realization.
///
/// Each firm's per-interval target nets into `trades_per_firm_interval`
/// equal-value trades against the counterparty pool at the interval's
/// price, so re-ingesting the tape reproduces the panel to float rounding
/// and the last-trade price path matches the generated returns.
pub fn generate_trade_tape(
    config: &SynthConfig,
    trades_per_firm_interval: usize,
) -> Result<(Vec<TradeRecord>, GroundTruth)> {
    if trades_per_firm_interval == 0 {
        return Err(Error::Config("need at least one trade per firm-interval".into()));
    }
    let (panel, returns, truth) = generate_panel(config)?;
    let grid = panel.grid();
    let pool = FirmId::new(POOL_FIRM);
    let m = trades_per_firm_interval;

    let mut trades = Vec::with_capacity(grid.len() * panel.n_firms() * m);
    for (t, interval) in grid.intervals().iter().enumerate() {
        let price = returns.prices()[t];
        let span = (interval.end - interval.start).num_seconds().max(1);
        for (i, firm) in panel.firms().iter().enumerate() {
            let target = panel.values()[(t, i)];
            if target == 0.0 {
                continue;
            }
            let per_trade_value = target.abs() / m as f64;
            let volume = per_trade_value / price;
            for j in 0..m {
                let offset = span * (j as i64 + 1) / (m as i64 + 1);
                let timestamp = interval.start + Duration::seconds(offset.min(span - 1));
                let (buyer, seller) = if target > 0.0 {
                    (firm.clone(), pool.clone())
                } else {
                    (pool.clone(), firm.clone())
                };
                trades.push(TradeRecord {
                    timestamp,
                    stock: config.stock.clone(),
                    buyer,
                    seller,
                    price,
                    volume,
                });
            }
        }
    }
    trades.sort_by_key(|t| t.timestamp);
    Ok((trades, truth))
}
