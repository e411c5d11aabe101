//! Correlation spectra of inventory panels.
//!
//! Builds the Pearson correlation matrix of a panel, its eigen-spectrum,
//! the random-matrix support bounds and label-shuffling null thresholds
//! used to separate genuine collective structure from sampling noise, plus
//! the dominant-factor time series and the rho-sorted matrix view.

mod eigen;
mod shuffle;

pub use eigen::{eigendecompose, EigenSpectrum};
pub use shuffle::{shuffle_null_spectrum, NullThresholds};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::market::{FirmId, InventoryPanel};

/// N x N Pearson correlation matrix over panel columns.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    firms: Vec<FirmId>,
    entries: Array2<f64>,
}

impl CorrelationMatrix {
    pub fn firms(&self) -> &[FirmId] {
        &self.firms
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.firms.len()
    }
}

/// Transposes a T x N panel into firm-major flat storage and standardizes
/// each firm row to zero mean and unit sample variance.
///
/// Fails with the offending column index when a firm has zero variance.
pub(crate) fn transpose_standardize(
    values: &Array2<f64>,
    out: &mut Vec<f64>,
) -> std::result::Result<(), usize> {
    let (t, n) = values.dim();
    out.clear();
    out.resize(n * t, 0.0);
    // one strided pass over the row-major input
    for (ti, row) in values.rows().into_iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            out[i * t + ti] = *v;
        }
    }
    for i in 0..n {
        let row = &mut out[i * t..(i + 1) * t];
        let mean = row.iter().sum::<f64>() / t as f64;
        let mut ss = 0.0;
        for v in row.iter() {
            let d = v - mean;
            ss += d * d;
        }
        if ss <= 0.0 {
            return Err(i);
        }
        let inv_std = ((t - 1) as f64 / ss).sqrt();
        for v in row.iter_mut() {
            *v = (*v - mean) * inv_std;
        }
    }
    Ok(())
}

/// Pearson matrix from standardized firm-major rows: C = Z Z' / (T-1),
/// each dot running over contiguous memory. `out` becomes N x N row-major.
pub(crate) fn gram_correlation(zt: &[f64], n: usize, t: usize, out: &mut Vec<f64>) {
    debug_assert_eq!(zt.len(), n * t);
    out.clear();
    out.resize(n * n, 0.0);
    let denom = (t - 1) as f64;
    for i in 0..n {
        out[i * n + i] = 1.0;
        let a = &zt[i * t..(i + 1) * t];
        for j in (i + 1)..n {
            let b = &zt[j * t..(j + 1) * t];
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let rho = (dot / denom).clamp(-1.0, 1.0);
            out[i * n + j] = rho;
            out[j * n + i] = rho;
        }
    }
}

/// Full correlation computation on a raw value matrix.
pub(crate) fn correlation_from_values(
    values: &Array2<f64>,
    firms: &[FirmId],
) -> Result<Array2<f64>> {
    let (t, n) = values.dim();
    if t < 2 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 2 intervals, got {t}"
        )));
    }
    let mut zt = Vec::new();
    transpose_standardize(values, &mut zt)
        .map_err(|col| Error::ZeroVariance(firms[col].to_string()))?;
    let mut c = Vec::new();
    gram_correlation(&zt, n, t, &mut c);
    Ok(Array2::from_shape_vec((n, n), c).expect("square"))
}

/// Pearson correlation matrix of the panel over the full interval range
/// (inactive-interval zeros count as data).
///
/// Requires at least two intervals and one firm; a zero-variance column is
/// an error naming the firm so the caller can drop it.
pub fn correlation_matrix(panel: &InventoryPanel) -> Result<CorrelationMatrix> {
    if panel.n_firms() == 0 {
        return Err(Error::InsufficientData("panel has no firms".into()));
    }
    let entries = correlation_from_values(panel.values(), panel.firms())?;
    Ok(CorrelationMatrix {
        firms: panel.firms().to_vec(),
        entries,
    })
}

/// Support edges of the eigenvalue density for correlation matrices of
/// independent series: with Q = T/N, the bulk lies in
/// `1 + 1/Q -/+ 2 sqrt(1/Q)`.
///
/// Returns `(lambda_min, lambda_max)`; requires T > N.
pub fn rmt_bounds(n: usize, t: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Config("rmt bounds need N >= 1".into()));
    }
    if t <= n {
        return Err(Error::Config(format!(
            "rmt bounds assume T > N (bulk support formula), got N={n}, T={t}"
        )));
    }
    let inv_q = n as f64 / t as f64;
    let spread = 2.0 * inv_q.sqrt();
    Ok((1.0 + inv_q - spread, 1.0 + inv_q + spread))
}

/// Time profile of one spectral factor.
#[derive(Debug, Clone)]
pub struct FactorSeries {
    /// Grid-aligned factor values, zero mean by construction.
    pub values: Vec<f64>,
    /// 1-based eigenvalue rank this factor belongs to (1 = largest).
    pub component: usize,
}

/// Projects the standardized panel onto the first eigenvector:
/// `f(t) = sum_i u_i z_i(t)`.
pub fn first_factor_series(panel: &InventoryPanel, spectrum: &EigenSpectrum) -> Result<FactorSeries> {
    if spectrum.n() != panel.n_firms() {
        return Err(Error::Dimension(format!(
            "spectrum has {} components but the panel has {} firms",
            spectrum.n(),
            panel.n_firms()
        )));
    }
    let (t, n) = panel.values().dim();
    let mut zt = Vec::new();
    transpose_standardize(panel.values(), &mut zt)
        .map_err(|col| Error::ZeroVariance(panel.firms()[col].to_string()))?;
    let u = spectrum.first_eigenvector();
    let mut values = vec![0.0; t];
    for i in 0..n {
        let row = &zt[i * t..(i + 1) * t];
        let w = u[i];
        for (out, z) in values.iter_mut().zip(row) {
            *out += w * z;
        }
    }
    Ok(FactorSeries {
        values,
        component: 1,
    })
}

/// Correlation matrix with rows and columns permuted by ascending
/// return-correlation, exposing the block structure of the strategy groups.
#[derive(Debug, Clone)]
pub struct SortedCorrelation {
    pub firms: Vec<FirmId>,
    pub entries: Array2<f64>,
    /// `order[k]` is the original column index now at position k.
    pub order: Vec<usize>,
    /// Split points after the `rho < -2 sigma` block and after the
    /// `|rho| <= 2 sigma` block.
    pub boundaries: (usize, usize),
}

/// Sorts a correlation matrix by each firm's correlation with the return
/// series and records the 2-sigma group boundaries.
pub fn sort_matrix_by_rho(
    c: &CorrelationMatrix,
    rho: &[f64],
    sigma: f64,
) -> Result<SortedCorrelation> {
    let n = c.n();
    if rho.len() != n {
        return Err(Error::Dimension(format!(
            "rho list has {} entries for an {n}-firm matrix",
            rho.len()
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| rho[i].partial_cmp(&rho[j]).unwrap().then(i.cmp(&j)));

    let mut entries = Array2::zeros((n, n));
    for (a, &i) in order.iter().enumerate() {
        for (b, &j) in order.iter().enumerate() {
            entries[(a, b)] = c.entries()[(i, j)];
        }
    }
    let firms = order.iter().map(|&i| c.firms()[i].clone()).collect();
    let lower = order.iter().filter(|&&i| rho[i] < -2.0 * sigma).count();
    let upper = order.iter().filter(|&&i| rho[i] <= 2.0 * sigma).count();
    Ok(SortedCorrelation {
        firms,
        entries,
        order,
        boundaries: (lower, upper),
    })
}
