//! High-frequency autocorrelation and lagged cross-correlation.
//!
//! All estimators are Pearson coefficients over the overlapping pairs of
//! the two (possibly lag-shifted) series. When a session-block index is
//! supplied, pairs straddling an overnight boundary are excluded so that
//! intraday dynamics never mix with overnight gaps; the exclusion rule is
//! recorded in report metadata.

use crate::error::{Error, Result};
use crate::market::FirmId;
use crate::stats;

/// Number of lags integrated on each side of the synchronous point
/// (10 steps of 15 minutes = 150 minutes at the intraday horizon).
pub const INTEGRATION_LAGS: usize = 10;

/// Lagged cross-correlation profile `rho[v(t), r(t+tau)]`.
#[derive(Debug, Clone)]
pub struct LaggedCorrelation {
    /// Signed lags in grid steps, ascending.
    pub lags: Vec<i64>,
    /// Correlation per lag; `None` marks a flagged lag (degenerate overlap).
    pub values: Vec<Option<f64>>,
    /// Null standard deviation `1/sqrt(T_eff)` per lag; `None` when fewer
    /// than two pairs contribute.
    pub sigma: Vec<Option<f64>>,
    /// Contributing pairs per lag.
    pub n_pairs: Vec<usize>,
}

impl LaggedCorrelation {
    pub fn at(&self, lag: i64) -> Option<f64> {
        let idx = self.lags.iter().position(|l| *l == lag)?;
        self.values[idx]
    }
}

/// Integrated lagged cross-correlation around the synchronous point.
#[derive(Debug, Clone)]
pub struct IntegratedCausality {
    pub firm: FirmId,
    /// Synchronous correlation rho[v(t), r(t)].
    pub sync: f64,
    /// Sum of the correlations at lags -10..-1 (return leading inventory).
    pub past_sum: f64,
    /// Sum of the correlations at lags +1..+10.
    pub future_sum: f64,
    /// Null standard deviation of `past_sum` under independence of the two
    /// series. Lag estimators of autocorrelated series are themselves
    /// correlated across lags, so the variance of the sum carries the
    /// Bartlett cross terms built from both series' own (noise-truncated)
    /// autocorrelations; for white series it reduces to sqrt(sum 1/T_eff).
    pub past_null_std: f64,
    /// Null standard deviation of `future_sum` under independence.
    pub future_null_std: f64,
}

/// Plain autocorrelation estimate up to `max_k`, zeroing lags inside the
/// 2/sqrt(T) noise band so null-variance estimates stay stable.
fn truncated_autocorr(series: &[f64], max_k: usize) -> Vec<f64> {
    let t = series.len();
    let m = stats::mean(series);
    let denom: f64 = series.iter().map(|x| (x - m) * (x - m)).sum();
    let band = 2.0 / (t as f64).sqrt();
    let mut out = vec![0.0; max_k + 1];
    out[0] = 1.0;
    if denom <= 0.0 {
        return out;
    }
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let num: f64 = (0..t - k).map(|i| (series[i] - m) * (series[i + k] - m)).sum();
        let rho = num / denom;
        if rho.abs() > band {
            *slot = rho;
        }
    }
    out
}

fn overlap_pairs(
    x: &[f64],
    y: &[f64],
    lag: i64,
    blocks: Option<&[usize]>,
) -> (Vec<f64>, Vec<f64>) {
    let t_len = x.len() as i64;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for t in 0..t_len {
        let s = t + lag;
        if s < 0 || s >= t_len {
            continue;
        }
        if let Some(blocks) = blocks {
            if blocks[t as usize] != blocks[s as usize] {
                continue;
            }
        }
        xs.push(x[t as usize]);
        ys.push(y[s as usize]);
    }
    (xs, ys)
}

/// Sample autocorrelation at lags `1..=max_lag`, computed as the Pearson
/// coefficient over the overlapping pairs of each lag.
///
/// With a session-block index, overnight-straddling pairs are excluded.
/// A constant series is an error.
pub fn autocorrelation(
    series: &[f64],
    max_lag: usize,
    blocks: Option<&[usize]>,
) -> Result<Vec<(usize, f64)>> {
    if series.len() <= max_lag + 2 {
        return Err(Error::InsufficientData(format!(
            "series of length {} cannot support lag {max_lag}",
            series.len()
        )));
    }
    if let Some(blocks) = blocks {
        if blocks.len() != series.len() {
            return Err(Error::Dimension(
                "session blocks must align with the series".into(),
            ));
        }
    }
    if stats::sample_variance(series) <= 0.0 {
        return Err(Error::ZeroVariance("autocorrelation input".into()));
    }
    let mut out = Vec::with_capacity(max_lag);
    for lag in 1..=max_lag {
        let (xs, ys) = overlap_pairs(series, series, lag as i64, blocks);
        let rho = stats::pearson(&xs, &ys).ok_or_else(|| {
            Error::ZeroVariance(format!("autocorrelation overlap at lag {lag}"))
        })?;
        out.push((lag, rho));
    }
    Ok(out)
}

/// Lagged cross-correlation `rho[v(t), r(t+tau)]` over an inclusive lag
/// range, with per-lag null bands.
pub fn lagged_cross_correlation(
    v: &[f64],
    r: &[f64],
    lag_from: i64,
    lag_to: i64,
    blocks: Option<&[usize]>,
) -> Result<LaggedCorrelation> {
    if v.len() != r.len() {
        return Err(Error::Dimension(
            "cross-correlation inputs must share a grid".into(),
        ));
    }
    if lag_from > lag_to {
        return Err(Error::Config(format!(
            "empty lag range {lag_from}..{lag_to}"
        )));
    }
    let t_len = v.len() as i64;
    let max_abs = lag_from.abs().max(lag_to.abs());
    if 2 * max_abs >= t_len {
        return Err(Error::InsufficientData(format!(
            "lag {max_abs} too large for {t_len} intervals"
        )));
    }
    if let Some(blocks) = blocks {
        if blocks.len() != v.len() {
            return Err(Error::Dimension(
                "session blocks must align with the series".into(),
            ));
        }
    }

    let mut lags = Vec::new();
    let mut values = Vec::new();
    let mut sigma = Vec::new();
    let mut n_pairs = Vec::new();
    for lag in lag_from..=lag_to {
        let (xs, ys) = overlap_pairs(v, r, lag, blocks);
        let n = xs.len();
        lags.push(lag);
        n_pairs.push(n);
        if n < 2 {
            values.push(None);
            sigma.push(None);
            continue;
        }
        sigma.push(Some(1.0 / (n as f64).sqrt()));
        values.push(stats::pearson(&xs, &ys));
    }
    Ok(LaggedCorrelation {
        lags,
        values,
        sigma,
        n_pairs,
    })
}

/// Integrates the lagged cross-correlation over ten steps on each side of
/// the synchronous point.
///
/// Any flagged lag inside the window is an error: a partial sum would not
/// be comparable across firms.
pub fn integrated_causality(
    firm: FirmId,
    v: &[f64],
    r: &[f64],
    blocks: Option<&[usize]>,
) -> Result<IntegratedCausality> {
    let w = INTEGRATION_LAGS as i64;
    let profile = lagged_cross_correlation(v, r, -w, w, blocks)?;
    let value_at = |lag: i64| -> Result<f64> {
        profile.at(lag).ok_or_else(|| {
            Error::ZeroVariance(format!("flagged lag {lag} inside the integration window"))
        })
    };
    let sync = value_at(0)?;
    let mut past_sum = 0.0;
    let mut future_sum = 0.0;
    for lag in 1..=w {
        past_sum += value_at(-lag)?;
        future_sum += value_at(lag)?;
    }

    // Bartlett covariance of two lag estimators at offset delta:
    // cov ~ sum_k rho_vv(k) rho_rr(k + delta) / T. With white series only
    // k = -delta survives and the sum variance collapses to sum 1/T_eff.
    let max_k = 2 * INTEGRATION_LAGS;
    let rho_vv = truncated_autocorr(v, max_k);
    let rho_rr = truncated_autocorr(r, max_k);
    let mut mult = [0.0; INTEGRATION_LAGS];
    for (delta, slot) in mult.iter_mut().enumerate() {
        let mut s = 0.0;
        for k in -(max_k as i64)..=(max_k as i64) {
            let kv = k.unsigned_abs() as usize;
            let kr = (k + delta as i64).unsigned_abs() as usize;
            if kr <= max_k {
                s += rho_vv[kv] * rho_rr[kr];
            }
        }
        *slot = s;
    }
    let pairs_at = |lag: i64| -> f64 {
        let idx = profile.lags.iter().position(|l| *l == lag).unwrap();
        profile.n_pairs[idx] as f64
    };
    let side_var = |sign: i64| -> f64 {
        let mut var = 0.0;
        let mut white = 0.0;
        for i in 1..=w {
            white += 1.0 / pairs_at(sign * i);
            for j in 1..=w {
                let delta = (i - j).unsigned_abs() as usize;
                var += mult[delta] / (pairs_at(sign * i) * pairs_at(sign * j)).sqrt();
            }
        }
        // autocorrelation truncation can nick the positive-definiteness of
        // the estimate; never report a band tighter than a tenth of the
        // white-noise one
        var.max(0.1 * white)
    };
    Ok(IntegratedCausality {
        firm,
        sync,
        past_sum,
        future_sum,
        past_null_std: side_var(-1).sqrt(),
        future_null_std: side_var(1).sqrt(),
    })
}
