//! Label-shuffling null model for the correlation spectrum.
//!
//! Each replicate independently permutes the buyer-firm labels and the
//! seller-firm labels across all trades, keeping every firm's number of
//! purchases and sales (and all timestamps, prices and volumes) fixed.
//! Rebuilding the panel and its spectrum per replicate yields the
//! eigenvalue density expected under the null of uncorrelated inventory
//! variation with the observed trading activity.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::eigen::eigenvalues_flat;
use super::{gram_correlation, rmt_bounds, transpose_standardize};
use crate::error::Result;
use crate::market::{FirmId, IntervalGrid, TradeRecord};

const DENSITY_BINS: usize = 50;

/// Null thresholds for the eigenvalue spectrum: the random-matrix support
/// edges plus the maximum top eigenvalue observed across shuffle
/// replicates, with the averaged eigenvalue density for plotting.
#[derive(Debug, Clone, Serialize)]
pub struct NullThresholds {
    pub rmt_lambda_min: f64,
    pub rmt_lambda_max: f64,
    /// Maximum lambda_1 across replicates (conservative upper threshold).
    pub shuffle_lambda_max: f64,
    /// Histogram bin edges for the shuffled eigenvalue density.
    pub density_bin_edges: Vec<f64>,
    /// Probability density per bin, averaged over replicates.
    pub shuffle_density: Vec<f64>,
    pub n_shuffles: usize,
    pub seed: u64,
}

/// Runs the shuffling experiment and returns the null thresholds.
///
/// Replicates are deterministic given `seed`: replicate k draws from an
/// independent stream of the seeded generator, so results do not depend on
/// scheduling.
pub fn shuffle_null_spectrum(
    trades: &[TradeRecord],
    firms: &[FirmId],
    grid: &IntervalGrid,
    n_shuffles: usize,
    seed: u64,
) -> Result<NullThresholds> {
    if n_shuffles == 0 {
        return Err(crate::error::Error::Config(
            "shuffling experiment needs at least one replicate".into(),
        ));
    }
    let (rmt_lambda_min, rmt_lambda_max) = rmt_bounds(firms.len(), grid.len())?;

    // resolve firm indices and interval slots once; the replicates only
    // permute label arrays and re-accumulate
    let index: std::collections::HashMap<&FirmId, u32> = firms
        .iter()
        .enumerate()
        .map(|(i, f)| (f, i as u32))
        .collect();
    let mut buyers: Vec<Option<u32>> = Vec::with_capacity(trades.len());
    let mut sellers: Vec<Option<u32>> = Vec::with_capacity(trades.len());
    let mut slots: Vec<Option<(u32, f64)>> = Vec::with_capacity(trades.len());
    for t in trades {
        buyers.push(index.get(&t.buyer).copied());
        sellers.push(index.get(&t.seller).copied());
        slots.push(grid.locate(t.timestamp).map(|i| (i as u32, t.value())));
    }

    let t_len = grid.len();
    let n = firms.len();
    struct Scratch {
        buyers: Vec<Option<u32>>,
        sellers: Vec<Option<u32>>,
        values: Array2<f64>,
        zt: Vec<f64>,
        corr: Vec<f64>,
    }
    let spectra: Vec<Result<Vec<f64>>> = (0..n_shuffles)
        .into_par_iter()
        .map_init(
            || Scratch {
                buyers: Vec::new(),
                sellers: Vec::new(),
                values: Array2::zeros((t_len, n)),
                zt: Vec::new(),
                corr: Vec::new(),
            },
            |scratch, replicate| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(replicate as u64 + 1);
                scratch.buyers.clear();
                scratch.buyers.extend_from_slice(&buyers);
                scratch.sellers.clear();
                scratch.sellers.extend_from_slice(&sellers);
                scratch.buyers.shuffle(&mut rng);
                scratch.sellers.shuffle(&mut rng);

                scratch.values.fill(0.0);
                for (k, slot) in slots.iter().enumerate() {
                    let Some((t, value)) = slot else { continue };
                    if let Some(i) = scratch.buyers[k] {
                        scratch.values[(*t as usize, i as usize)] += value;
                    }
                    if let Some(i) = scratch.sellers[k] {
                        scratch.values[(*t as usize, i as usize)] -= value;
                    }
                }
                transpose_standardize(&scratch.values, &mut scratch.zt)
                    .map_err(|col| crate::error::Error::ZeroVariance(firms[col].to_string()))?;
                gram_correlation(&scratch.zt, n, t_len, &mut scratch.corr);
                eigenvalues_flat(&mut scratch.corr, n)
            },
        )
        .collect();

    let mut all = Vec::with_capacity(n_shuffles * firms.len());
    let mut shuffle_lambda_max = f64::NEG_INFINITY;
    for spectrum in spectra {
        let eigenvalues = spectrum?;
        shuffle_lambda_max = shuffle_lambda_max.max(eigenvalues[0]);
        all.extend(eigenvalues);
    }

    let top = all.iter().cloned().fold(f64::MIN, f64::max).max(1e-12);
    let hi = top * (1.0 + 1e-9);
    let width = hi / DENSITY_BINS as f64;
    let mut counts = vec![0usize; DENSITY_BINS];
    for v in &all {
        let bin = ((v / width) as usize).min(DENSITY_BINS - 1);
        counts[bin] += 1;
    }
    let total = all.len() as f64;
    let shuffle_density = counts
        .iter()
        .map(|c| *c as f64 / (total * width))
        .collect();
    let density_bin_edges = (0..=DENSITY_BINS).map(|k| k as f64 * width).collect();

    Ok(NullThresholds {
        rmt_lambda_min,
        rmt_lambda_max,
        shuffle_lambda_max,
        density_bin_edges,
        shuffle_density,
        n_shuffles,
        seed,
    })
}
