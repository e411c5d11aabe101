//! Symmetric eigendecomposition via cyclic Jacobi rotations.
//!
//! Plane rotations annihilate off-diagonal entries until the off-diagonal
//! sum drops below a scaled threshold. Robust for every real symmetric
//! matrix and plenty fast for the panel sizes seen here (N below a few
//! hundred). Matrices are worked on in flat row-major storage; the
//! shuffling experiment runs thousands of decompositions per call.

use ndarray::Array2;

use super::CorrelationMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Full spectrum of a correlation matrix: eigenvalues in descending order
/// with matching orthonormal eigenvector columns.
///
/// Eigenvector signs follow a fixed convention: the component of largest
/// magnitude (first such index on ties) is positive, so repeated runs and
/// different machines produce identical reports.
#[derive(Debug, Clone)]
pub struct EigenSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Column k is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Array2<f64>,
}

impl EigenSpectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue.
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// First eigenvector (loadings of the dominant factor).
    pub fn first_eigenvector(&self) -> Vec<f64> {
        self.eigenvectors.column(0).to_vec()
    }
}

/// Decomposes a correlation matrix into its full eigen-spectrum.
pub fn eigendecompose(c: &CorrelationMatrix) -> Result<EigenSpectrum> {
    let (values, vectors) = symmetric_eigen(c.entries(), true)?;
    let mut vectors = vectors.expect("vectors requested");
    fix_signs(&mut vectors);
    Ok(EigenSpectrum {
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

/// Jacobi eigenvalue iteration on a symmetric matrix.
///
/// Returns eigenvalues sorted descending and, when requested, the matching
/// eigenvector columns (unsigned; callers apply their own convention).
pub(crate) fn symmetric_eigen(
    matrix: &Array2<f64>,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Array2<f64>>)> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            n,
            matrix.ncols()
        )));
    }
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let mut a: Vec<f64> = matrix.iter().copied().collect();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };
    let values = jacobi_flat(&mut a, n, v.as_deref_mut())?;
    let (values, v) = sort_descending(values, v, n);
    let vectors = v.map(|flat| Array2::from_shape_vec((n, n), flat).expect("square"));
    Ok((values, vectors))
}

/// Eigenvalues only, descending, from a flat row-major symmetric matrix.
/// The buffer is consumed as scratch.
pub(crate) fn eigenvalues_flat(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    let mut values = jacobi_flat(a, n, None)?;
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(values)
}

/// Cyclic Jacobi on flat row-major storage. `v`, when given, accumulates
/// the rotations (becomes the eigenvector matrix, columns by eigenvalue
/// slot).
fn jacobi_flat(a: &mut [f64], n: usize, mut v: Option<&mut [f64]>) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                off += a[p * n + q].abs();
            }
        }
        if off == 0.0 {
            return Ok(d);
        }

        // relaxed threshold for the first sweeps, exact rotation afterwards
        let tresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                // skip rotations that cannot change the diagonal anymore
                if sweep >= 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;

                macro_rules! rotate {
                    ($m:expr, $i1:expr, $i2:expr) => {{
                        let g = $m[$i1];
                        let h = $m[$i2];
                        $m[$i1] = g - s * (h + g * tau);
                        $m[$i2] = h + s * (g - h * tau);
                    }};
                }
                for j in 0..p {
                    rotate!(a, j * n + p, j * n + q);
                }
                for j in (p + 1)..q {
                    rotate!(a, p * n + j, j * n + q);
                }
                for j in (q + 1)..n {
                    rotate!(a, p * n + j, q * n + j);
                }
                if let Some(v) = v.as_deref_mut() {
                    for j in 0..n {
                        rotate!(v, j * n + p, j * n + q);
                    }
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }

    let mut off = 0.0;
    for p in 0..n.saturating_sub(1) {
        for q in (p + 1)..n {
            off += a[p * n + q].abs();
        }
    }
    Err(Error::NoConvergence {
        sweeps: MAX_SWEEPS,
        off_norm: off,
    })
}

fn sort_descending(
    d: Vec<f64>,
    v: Option<Vec<f64>>,
    n: usize,
) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap().then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = v.map(|flat| {
        let mut out = vec![0.0; n * n];
        for (new, &old) in order.iter().enumerate() {
            for row in 0..n {
                out[row * n + new] = flat[row * n + old];
            }
        }
        out
    });
    (values, vectors)
}

/// Flips eigenvector columns so the largest-magnitude component is positive.
fn fix_signs(vectors: &mut Array2<f64>) {
    let n = vectors.nrows();
    for k in 0..vectors.ncols() {
        let mut best = 0usize;
        let mut best_abs = 0.0;
        for i in 0..n {
            let a = vectors[(i, k)].abs();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        if vectors[(best, k)] < 0.0 {
            for i in 0..n {
                vectors[(i, k)] = -vectors[(i, k)];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    fn reconstruct(values: &[f64], vectors: &Array2<f64>) -> Array2<f64> {
        let n = values.len();
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| vectors[(i, k)] * values[k] * vectors[(j, k)])
                    .sum();
            }
        }
        out
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let (values, vectors) = symmetric_eigen(&Array2::eye(5), true).unwrap();
        for v in &values {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let vectors = vectors.unwrap();
        let recon = reconstruct(&values, &vectors);
        for (a, b) in recon.iter().zip(Array2::<f64>::eye(5).iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[1, rho], [rho, 1]] are 1 +/- rho
        let rho = 0.37;
        let m = arr2(&[[1.0, rho], [rho, 1.0]]);
        let (values, _) = symmetric_eigen(&m, false).unwrap();
        assert!((values[0] - (1.0 + rho)).abs() < 1e-14);
        assert!((values[1] - (1.0 - rho)).abs() < 1e-14);
    }

    #[test]
    fn spectrum_reconstructs_and_is_orthonormal() {
        let m = arr2(&[
            [1.0, 0.3, -0.2, 0.1],
            [0.3, 1.0, 0.4, -0.3],
            [-0.2, 0.4, 1.0, 0.2],
            [0.1, -0.3, 0.2, 1.0],
        ]);
        let (values, vectors) = symmetric_eigen(&m, true).unwrap();
        let vectors = vectors.unwrap();
        // trace preservation
        let trace: f64 = values.iter().sum();
        assert!((trace - 4.0).abs() < 1e-10);
        // descending order
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        // reconstruction within 1e-8 max norm
        let recon = reconstruct(&values, &vectors);
        for (a, b) in recon.iter().zip(m.iter()) {
            assert!((a - b).abs() < 1e-8);
        }
        // orthonormal columns
        let gram = vectors.t().dot(&vectors);
        for ((i, j), g) in gram.indexed_iter() {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((g - expect).abs() < 1e-8);
        }
    }

    // One-factor population matrix C_ij = rho_i * rho_j (unit diagonal),
    // rho = (0.6, 0.5, 0.4, 0.3). The largest root of the characteristic
    // polynomial is found independently by bisection on det(C - lambda I)
    // and frozen below.
    #[test]
    fn one_factor_top_eigenvalue_matches_char_poly_root() {
        const FROZEN_LAMBDA1: f64 = 1.608465833738032;
        let rho = [0.6, 0.5, 0.4, 0.3];
        let mut c = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                c[(i, j)] = if i == j { 1.0 } else { rho[i] * rho[j] };
            }
        }

        // oracle: char poly det(C - lambda I) via 4x4 cofactor expansion,
        // largest root by bisection
        let det4 = |m: &Array2<f64>| -> f64 {
            let det3 = |a: [[f64; 3]; 3]| -> f64 {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            };
            let mut det = 0.0;
            for col in 0..4 {
                let mut minor = [[0.0; 3]; 3];
                for r in 1..4 {
                    let mut cc = 0;
                    for c0 in 0..4 {
                        if c0 == col {
                            continue;
                        }
                        minor[r - 1][cc] = m[(r, c0)];
                        cc += 1;
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * m[(0, col)] * det3(minor);
            }
            det
        };
        let charpoly = |lambda: f64| {
            let mut shifted = c.clone();
            for i in 0..4 {
                shifted[(i, i)] -= lambda;
            }
            det4(&shifted)
        };
        // the top eigenvalue of a correlation matrix lies in (1, N]
        let (mut lo, mut hi) = (1.0, 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if charpoly(mid).signum() == charpoly(hi).signum() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!(
            (oracle - FROZEN_LAMBDA1).abs() < 1e-12,
            "char-poly oracle drifted: {oracle}"
        );

        let (values, _) = symmetric_eigen(&c, false).unwrap();
        assert!(
            (values[0] - oracle).abs() < 1e-10,
            "jacobi {} vs oracle {}",
            values[0],
            oracle
        );
    }

    #[test]
    fn flat_eigenvalues_match_full_path() {
        let m = arr2(&[
            [1.0, 0.5, -0.1],
            [0.5, 1.0, 0.2],
            [-0.1, 0.2, 1.0],
        ]);
        let (values, _) = symmetric_eigen(&m, false).unwrap();
        let mut flat: Vec<f64> = m.iter().copied().collect();
        let fast = eigenvalues_flat(&mut flat, 3).unwrap();
        for (a, b) in values.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn sign_convention_makes_peak_positive() {
        let m = arr2(&[[1.0, 0.9], [0.9, 1.0]]);
        let (_, vectors) = symmetric_eigen(&m, true).unwrap();
        let mut vectors = vectors.unwrap();
        fix_signs(&mut vectors);
        for k in 0..2 {
            let col = vectors.column(k);
            let peak = col
                .iter()
                .cloned()
                .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
                .unwrap();
            assert!(peak > 0.0);
        }
    }
}
