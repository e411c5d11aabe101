//! One-factor fits and strategy classification.
//!
//! Each firm's inventory variation is regressed on the synchronous return,
//! `v_i(t) = gamma_i r(t) + eps_i(t)`. Firms whose correlation with the
//! return exceeds +2 sigma are Trending, below -2 sigma Reversing, the rest
//! Uncategorized (sigma = 1/sqrt(T), the null standard deviation of a
//! Pearson coefficient). Year-to-year label movements pool into a
//! transition matrix with an Exited destination for firms that drop out of
//! the active set.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{FirmId, InventoryPanel, ReturnSeries, TradeRecord};
use crate::stats;

/// Per-firm one-factor fit against the return series.
#[derive(Debug, Clone)]
pub struct FirmFactorFit {
    pub firm: FirmId,
    /// Pearson correlation of v_i with the return.
    pub rho: f64,
    /// Regression slope, in euros per unit return; shares rho's sign.
    pub gamma: f64,
    /// Sample standard deviation of the residual v_i - gamma r.
    pub residual_std: f64,
    /// Sample size backing the fit.
    pub n_obs: usize,
}

/// Strategy group. `Exited` appears only as a transition destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    Reversing,
    Uncategorized,
    Trending,
    Exited,
}

impl GroupLabel {
    /// Source states of the transition matrix.
    pub const SOURCES: [GroupLabel; 3] = [
        GroupLabel::Reversing,
        GroupLabel::Uncategorized,
        GroupLabel::Trending,
    ];
    /// Destination states of the transition matrix.
    pub const DESTINATIONS: [GroupLabel; 4] = [
        GroupLabel::Reversing,
        GroupLabel::Uncategorized,
        GroupLabel::Trending,
        GroupLabel::Exited,
    ];

    pub fn short(&self) -> &'static str {
        match self {
            GroupLabel::Reversing => "R",
            GroupLabel::Uncategorized => "U",
            GroupLabel::Trending => "T",
            GroupLabel::Exited => "E",
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GroupLabel::Reversing => "Reversing",
            GroupLabel::Uncategorized => "Uncategorized",
            GroupLabel::Trending => "Trending",
            GroupLabel::Exited => "Exited",
        };
        f.write_str(name)
    }
}

/// Fits the one-factor model for every panel column.
///
/// `gamma = cov(v, r) / var(r)`, which leaves the residual uncorrelated
/// with the return. Errors if the return variance is zero or any firm
/// column has zero variance.
pub fn fit_one_factor(panel: &InventoryPanel, returns: &ReturnSeries) -> Result<Vec<FirmFactorFit>> {
    if panel.grid() != returns.grid() {
        return Err(Error::GridMismatch(
            "panel and return series must share a grid".into(),
        ));
    }
    let r = returns.values();
    let var_r = stats::sample_variance(r);
    if var_r <= 0.0 {
        return Err(Error::DegenerateReturns);
    }

    let mut fits = Vec::with_capacity(panel.n_firms());
    for (i, firm) in panel.firms().iter().enumerate() {
        let v = panel.firm_series(i);
        let rho = stats::pearson(&v, r).ok_or_else(|| Error::ZeroVariance(firm.to_string()))?;
        let gamma = stats::sample_cov(&v, r) / var_r;
        let residuals: Vec<f64> = v.iter().zip(r).map(|(v, r)| v - gamma * r).collect();
        fits.push(FirmFactorFit {
            firm: firm.clone(),
            rho,
            gamma,
            residual_std: stats::sample_std(&residuals),
            n_obs: v.len(),
        });
    }
    Ok(fits)
}

/// Classifies firms by the 2-sigma rule on rho.
///
/// All fits must share a sample size; `sigma` defaults to `1/sqrt(T)`.
pub fn classify_firms(
    fits: &[FirmFactorFit],
    sigma: Option<f64>,
) -> Result<BTreeMap<FirmId, GroupLabel>> {
    let Some(first) = fits.first() else {
        return Ok(BTreeMap::new());
    };
    if fits.iter().any(|f| f.n_obs != first.n_obs) {
        return Err(Error::Config(
            "classification requires fits sharing one sample size".into(),
        ));
    }
    let sigma = match sigma {
        Some(s) if s > 0.0 => s,
        Some(s) => return Err(Error::Config(format!("sigma must be positive, got {s}"))),
        None => 1.0 / (first.n_obs as f64).sqrt(),
    };
    Ok(fits
        .iter()
        .map(|f| {
            let label = if f.rho > 2.0 * sigma {
                GroupLabel::Trending
            } else if f.rho < -2.0 * sigma {
                GroupLabel::Reversing
            } else {
                GroupLabel::Uncategorized
            };
            (f.firm.clone(), label)
        })
        .collect())
}

/// Row-stochastic transition matrix between strategy groups, pooled over
/// adjacent year pairs. Rows follow [`GroupLabel::SOURCES`], columns
/// [`GroupLabel::DESTINATIONS`].
#[derive(Debug, Clone, Serialize)]
pub struct TransitionMatrix {
    pub counts: [[u64; 4]; 3],
    /// Row-normalized probabilities; rows with `defined == false` are all
    /// zero and carry no observation.
    pub probs: [[f64; 4]; 3],
    pub defined: [bool; 3],
    pub n_year_pairs: usize,
}

impl TransitionMatrix {
    pub fn prob(&self, from: GroupLabel, to: GroupLabel) -> Option<f64> {
        let row = GroupLabel::SOURCES.iter().position(|g| *g == from)?;
        let col = GroupLabel::DESTINATIONS.iter().position(|g| *g == to)?;
        self.defined[row].then(|| self.probs[row][col])
    }
}

/// Builds the transition matrix from per-year label maps.
///
/// For each pair of consecutive calendar years present, a firm active in
/// the first year maps to its label in the second, or to `Exited` when it
/// leaves the active set. Counts pool over all pairs before normalizing.
pub fn transition_matrix(
    labels_by_year: &BTreeMap<i32, BTreeMap<FirmId, GroupLabel>>,
) -> Result<TransitionMatrix> {
    let mut counts = [[0u64; 4]; 3];
    let mut n_year_pairs = 0;
    for (&year, labels) in labels_by_year {
        let Some(next) = labels_by_year.get(&(year + 1)) else {
            continue;
        };
        n_year_pairs += 1;
        for (firm, &label) in labels {
            let row = GroupLabel::SOURCES
                .iter()
                .position(|g| *g == label)
                .ok_or_else(|| {
                    Error::Config(format!("firm {firm} carries non-source label {label}"))
                })?;
            let dest = next.get(firm).copied().unwrap_or(GroupLabel::Exited);
            let col = GroupLabel::DESTINATIONS
                .iter()
                .position(|g| *g == dest)
                .expect("destination covers all labels");
            counts[row][col] += 1;
        }
    }
    if n_year_pairs == 0 {
        return Err(Error::InsufficientData(
            "transition matrix needs at least two consecutive years".into(),
        ));
    }

    let mut probs = [[0.0; 4]; 3];
    let mut defined = [false; 3];
    for row in 0..3 {
        let total: u64 = counts[row].iter().sum();
        if total > 0 {
            defined[row] = true;
            for col in 0..4 {
                probs[row][col] = counts[row][col] as f64 / total as f64;
            }
        }
    }
    Ok(TransitionMatrix {
        counts,
        probs,
        defined,
        n_year_pairs,
    })
}

/// Average euro value a firm moves per active day, counting both its buys
/// and its sells.
#[derive(Debug, Clone, Serialize)]
pub struct SizeProxy {
    pub firm: FirmId,
    pub avg_daily_value: f64,
}

/// Size proxies for every firm appearing in the trades.
pub fn size_proxies(trades: &[TradeRecord]) -> HashMap<FirmId, SizeProxy> {
    let mut daily: HashMap<&FirmId, HashMap<NaiveDate, f64>> = HashMap::new();
    for t in trades {
        let date = t.timestamp.date();
        let value = t.value();
        *daily.entry(&t.buyer).or_default().entry(date).or_default() += value;
        *daily.entry(&t.seller).or_default().entry(date).or_default() += value;
    }
    daily
        .into_iter()
        .map(|(firm, days)| {
            let avg = days.values().sum::<f64>() / days.len() as f64;
            (
                firm.clone(),
                SizeProxy {
                    firm: firm.clone(),
                    avg_daily_value: avg,
                },
            )
        })
        .collect()
}

/// Size proxy for a single firm; errors if the firm never trades.
pub fn size_proxy(trades: &[TradeRecord], firm: &FirmId) -> Result<SizeProxy> {
    size_proxies(trades)
        .remove(firm)
        .ok_or_else(|| Error::UnknownFirm(firm.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{Horizon, IntervalGrid, Session};
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn panel_and_returns(values: Array2<f64>, r: Vec<f64>) -> (InventoryPanel, ReturnSeries) {
        let t = values.nrows();
        let dates: Vec<chrono::NaiveDate> = (0..t as i64)
            .map(|i| chrono::NaiveDate::from_ymd_opt(2001, 1, 1).unwrap() + chrono::Duration::days(i))
            .collect();
        let grid = IntervalGrid::build(dates, Session::default(), Horizon::Days(1)).unwrap();
        let n = values.ncols();
        let firms: Vec<FirmId> = (0..n).map(|i| FirmId::new(format!("F{i:03}"))).collect();
        let activity = Array2::from_elem((t, n), true);
        let panel = InventoryPanel::from_parts(grid.clone(), firms, values, activity);
        let prices = vec![1.0; t];
        let gaps = vec![false; t];
        (panel, ReturnSeries::from_parts(grid, r, prices, gaps))
    }

    #[test]
    fn noiseless_fit_recovers_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = 200;
        let r: Vec<f64> = (0..t).map(|_| rng.gen::<f64>() - 0.5).collect();
        let values = Array2::from_shape_fn((t, 1), |(i, _)| 2.0 * r[i]);
        let (panel, returns) = panel_and_returns(values, r);
        let fits = fit_one_factor(&panel, &returns).unwrap();
        assert!((fits[0].gamma - 2.0).abs() < 1e-12);
        assert!((fits[0].rho - 1.0).abs() < 1e-12);
        assert!(fits[0].residual_std < 1e-12);
    }

    #[test]
    fn residual_is_uncorrelated_with_return() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let t = 500;
        let r: Vec<f64> = (0..t).map(|_| rng.gen::<f64>() - 0.5).collect();
        let values =
            Array2::from_shape_fn((t, 1), |(i, _)| -1.5 * r[i] + rng.gen::<f64>() * 3.0);
        let (panel, returns) = panel_and_returns(values.clone(), r.clone());
        let fits = fit_one_factor(&panel, &returns).unwrap();
        let residuals: Vec<f64> = (0..t).map(|i| values[(i, 0)] - fits[0].gamma * r[i]).collect();
        let rho = stats::pearson(&residuals, &r).unwrap();
        assert!(rho.abs() <= 1e-10, "residual correlation {rho}");
    }

    #[test]
    fn independent_firm_stays_within_null_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = 10_000;
        let r: Vec<f64> = (0..t).map(|_| rng.gen::<f64>() - 0.5).collect();
        let values = Array2::from_shape_fn((t, 1), |_| rng.gen::<f64>() - 0.5);
        let (panel, returns) = panel_and_returns(values, r);
        let fits = fit_one_factor(&panel, &returns).unwrap();
        assert!(
            fits[0].rho.abs() < 4.0 / (t as f64).sqrt(),
            "null rho {}",
            fits[0].rho
        );
    }

    // v = -r + noise of equal variance has rho = -1/sqrt(2) in population.
    #[test]
    fn equal_noise_gives_minus_inv_sqrt2() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let t = 10_000;
        let r: Vec<f64> = (0..t).map(|_| rng.gen::<f64>() - 0.5).collect();
        let values = Array2::from_shape_fn((t, 1), |(i, _)| -r[i] + (rng.gen::<f64>() - 0.5));
        let (panel, returns) = panel_and_returns(values, r);
        let fits = fit_one_factor(&panel, &returns).unwrap();
        let expect = -1.0 / 2.0f64.sqrt();
        assert!(
            (fits[0].rho - expect).abs() < 0.03,
            "rho {} vs {}",
            fits[0].rho,
            expect
        );
    }

    // Scaling a firm's inventory series by c > 0 leaves rho (hence the
    // label) unchanged and scales gamma by c.
    #[test]
    fn fit_is_scale_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let t = 300;
        let r: Vec<f64> = (0..t).map(|_| rng.gen::<f64>() - 0.5).collect();
        let base: Vec<f64> =
            (0..t).map(|i| -0.7 * r[i] + 0.4 * (rng.gen::<f64>() - 0.5)).collect();
        let c = 137.5;
        let values = Array2::from_shape_fn((t, 2), |(i, j)| {
            if j == 0 {
                base[i]
            } else {
                c * base[i]
            }
        });
        let (panel, returns) = panel_and_returns(values, r);
        let fits = fit_one_factor(&panel, &returns).unwrap();
        assert!((fits[0].rho - fits[1].rho).abs() < 1e-12);
        assert!((fits[1].gamma - c * fits[0].gamma).abs() < 1e-9 * fits[1].gamma.abs());
        let labels = classify_firms(&fits, None).unwrap();
        assert_eq!(labels[&fits[0].firm], labels[&fits[1].firm]);
    }

    #[test]
    fn degenerate_returns_rejected() {
        let values = Array2::from_shape_fn((10, 1), |(i, _)| i as f64);
        let (panel, returns) = panel_and_returns(values, vec![0.0; 10]);
        assert!(matches!(
            fit_one_factor(&panel, &returns),
            Err(Error::DegenerateReturns)
        ));
    }

    fn fit(firm: &str, rho: f64, n_obs: usize) -> FirmFactorFit {
        FirmFactorFit {
            firm: FirmId::new(firm),
            rho,
            gamma: rho,
            residual_std: 1.0,
            n_obs,
        }
    }

    #[test]
    fn two_sigma_rule() {
        // T = 250: threshold 2/sqrt(250) ~ 0.1265
        let fits = vec![fit("A", 0.20, 250), fit("B", -0.10, 250), fit("C", -0.15, 250)];
        let labels = classify_firms(&fits, None).unwrap();
        assert_eq!(labels[&FirmId::new("A")], GroupLabel::Trending);
        assert_eq!(labels[&FirmId::new("B")], GroupLabel::Uncategorized);
        assert_eq!(labels[&FirmId::new("C")], GroupLabel::Reversing);
    }

    #[test]
    fn label_is_scale_invariant_and_sign_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..200 {
            let rho: f64 = rng.gen::<f64>() * 2.0 - 1.0;
            let labels = classify_firms(&[fit("A", rho, 250)], None).unwrap();
            let neg = classify_firms(&[fit("A", -rho, 250)], None).unwrap();
            let (a, b) = (labels[&FirmId::new("A")], neg[&FirmId::new("A")]);
            match a {
                GroupLabel::Trending => assert_eq!(b, GroupLabel::Reversing),
                GroupLabel::Reversing => assert_eq!(b, GroupLabel::Trending),
                other => assert_eq!(b, other),
            }
        }
    }

    #[test]
    fn mixed_sample_sizes_rejected() {
        let fits = vec![fit("A", 0.2, 250), fit("B", 0.2, 200)];
        assert!(classify_firms(&fits, None).is_err());
    }

    #[test]
    fn transition_counting_matches_example() {
        // year1 {A:R, B:R, C:T}; year2 {A:R, C:U}, B absent
        let mut by_year = BTreeMap::new();
        by_year.insert(
            2001,
            BTreeMap::from([
                (FirmId::new("A"), GroupLabel::Reversing),
                (FirmId::new("B"), GroupLabel::Reversing),
                (FirmId::new("C"), GroupLabel::Trending),
            ]),
        );
        by_year.insert(
            2002,
            BTreeMap::from([
                (FirmId::new("A"), GroupLabel::Reversing),
                (FirmId::new("C"), GroupLabel::Uncategorized),
            ]),
        );
        let tm = transition_matrix(&by_year).unwrap();
        assert_eq!(tm.prob(GroupLabel::Reversing, GroupLabel::Reversing), Some(0.5));
        assert_eq!(tm.prob(GroupLabel::Reversing, GroupLabel::Exited), Some(0.5));
        assert_eq!(tm.prob(GroupLabel::Trending, GroupLabel::Uncategorized), Some(1.0));
        // no uncategorized sources anywhere: row undefined, not NaN
        assert!(!tm.defined[1]);
        assert_eq!(tm.prob(GroupLabel::Uncategorized, GroupLabel::Exited), None);
        // defined rows sum to one
        for row in 0..3 {
            if tm.defined[row] {
                let sum: f64 = tm.probs[row].iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stable_labels_give_identity_block() {
        let year: BTreeMap<FirmId, GroupLabel> = BTreeMap::from([
            (FirmId::new("A"), GroupLabel::Reversing),
            (FirmId::new("B"), GroupLabel::Uncategorized),
            (FirmId::new("C"), GroupLabel::Trending),
        ]);
        let mut by_year = BTreeMap::new();
        by_year.insert(2001, year.clone());
        by_year.insert(2002, year);
        let tm = transition_matrix(&by_year).unwrap();
        for (row, src) in GroupLabel::SOURCES.iter().enumerate() {
            for (col, dst) in GroupLabel::DESTINATIONS.iter().enumerate() {
                let expect = if src == dst { 1.0 } else { 0.0 };
                assert_eq!(tm.probs[row][col], expect);
            }
        }
    }

    #[test]
    fn nonconsecutive_years_rejected() {
        let year: BTreeMap<FirmId, GroupLabel> =
            BTreeMap::from([(FirmId::new("A"), GroupLabel::Reversing)]);
        let mut by_year = BTreeMap::new();
        by_year.insert(2001, year.clone());
        by_year.insert(2003, year);
        assert!(transition_matrix(&by_year).is_err());
    }

    fn trade(time: &str, buyer: &str, seller: &str, price: f64, volume: f64) -> TradeRecord {
        TradeRecord {
            timestamp: chrono::NaiveDateTime::parse_from_str(time, "%Y-%m-%dT%H:%M:%S").unwrap(),
            stock: "TEF".into(),
            buyer: FirmId::new(buyer),
            seller: FirmId::new(seller),
            price,
            volume,
        }
    }

    #[test]
    fn size_proxy_counts_both_sides() {
        let trades = vec![
            // day 1: one buy 1000@10
            trade("2001-01-02T10:00:00", "A", "B", 10.0, 1000.0),
            // day 2: buy 1000@10 and sell 500@10 -> 15000
            trade("2001-01-03T10:00:00", "A", "B", 10.0, 1000.0),
            trade("2001-01-03T11:00:00", "B", "A", 10.0, 500.0),
            // day 3: A inactive
            trade("2001-01-04T10:00:00", "B", "C", 10.0, 1.0),
        ];
        let proxy = size_proxy(&trades, &FirmId::new("A")).unwrap();
        assert!((proxy.avg_daily_value - 12_500.0).abs() < 1e-9);
        assert!(matches!(
            size_proxy(&trades, &FirmId::new("ZZZ")),
            Err(Error::UnknownFirm(_))
        ));
    }

    #[test]
    fn size_proxy_two_days_mean() {
        let trades = vec![
            trade("2001-01-02T10:00:00", "A", "B", 10.0, 1000.0),
            trade("2001-01-03T10:00:00", "A", "B", 10.0, 3000.0),
        ];
        let proxy = size_proxy(&trades, &FirmId::new("A")).unwrap();
        assert!((proxy.avg_daily_value - 20_000.0).abs() < 1e-9);
    }
}
