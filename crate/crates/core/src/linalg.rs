//! Least squares with an intercept and L1-penalized least squares.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{solver} did not converge within {iterations} iterations")]
    NotConverged { solver: &'static str, iterations: usize },
}

/// Stop when no coordinate moves by more than this in a sweep.
pub const LASSO_TOL: f64 = 1e-8;
pub const LASSO_MAX_SWEEPS: usize = 100_000;
/// Largest accepted relative reconstruction error of an SVD.
const SVD_CHECK: f64 = 1e-10;

fn check_shape(x: &[Vec<f64>], y: &[f64]) -> Result<usize, FitError> {
    if y.is_empty() {
        return Err(FitError::Malformed("no observations".into()));
    }
    if x.len() != y.len() {
        return Err(FitError::Malformed(format!("{} feature rows for {} targets", x.len(), y.len())));
    }
    let k = x[0].len();
    if let Some(i) = x.iter().position(|r| r.len() != k) {
        return Err(FitError::Malformed(format!("row {i} has {} entries, expected {k}", x[i].len())));
    }
    if x.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(FitError::Malformed("non-finite value in input".into()));
    }
    Ok(k)
}

/// Ordinary least squares `y ≈ X w + b`.
///
/// The intercept is unpenalized; among all minimizers the one with smallest
/// `‖w‖` is returned, so duplicated or constant columns are handled.
pub fn least_squares(x: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64), FitError> {
    let k = check_shape(x, y)?;
    let n = y.len();
    let y_mean = y.iter().sum::<f64>() / n as f64;
    if k == 0 {
        return Ok((Vec::new(), y_mean));
    }
    let mut means = vec![0.0; k];
    for row in x {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);

    let xc = DMatrix::from_fn(n, k, |i, j| x[i][j] - means[j]);
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
    let w = svd_solve(&xc, &yc).map_or_else(|| gram_eigen_solve(&xc, &yc), Ok)?;
    let w: Vec<f64> = w.iter().copied().collect();
    let b = y_mean - w.iter().zip(&means).map(|(wj, mj)| wj * mj).sum::<f64>();
    Ok((w, b))
}

fn pseudo_cutoff(largest: f64, n: usize, k: usize) -> f64 {
    (largest * 1e-12 * n.max(k) as f64).max(f64::MIN_POSITIVE)
}

/// Minimum-norm solution by SVD, or None when the decomposition does not
/// reproduce the matrix. nalgebra's bidiagonal iteration can return wrong
/// factors for some rank-deficient wide matrices, so the factors are checked.
fn svd_solve(xc: &DMatrix<f64>, yc: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = xc.clone().try_svd(true, true, f64::EPSILON * 5.0, 10_000)?;
    let scale = xc.norm().max(f64::MIN_POSITIVE);
    let back = svd.clone().recompose().ok()?;
    if (back - xc).norm() > SVD_CHECK * scale {
        return None;
    }
    let cutoff = pseudo_cutoff(svd.singular_values.max(), xc.nrows(), xc.ncols());
    svd.solve(yc, cutoff).ok()
}

/// Minimum-norm solution through the eigendecomposition of `XᵀX`.
fn gram_eigen_solve(xc: &DMatrix<f64>, yc: &DVector<f64>) -> Result<DVector<f64>, FitError> {
    let gram = xc.transpose() * xc;
    let eig = gram
        .try_symmetric_eigen(f64::EPSILON * 5.0, 10_000)
        .ok_or(FitError::NotConverged { solver: "symmetric eigendecomposition", iterations: 10_000 })?;
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // eigenvalues of XᵀX carry round-off of order ε·largest, so the cutoff is
    // relative to the eigenvalues themselves
    let cutoff = pseudo_cutoff(largest, xc.nrows(), xc.ncols());
    let rhs = eig.eigenvectors.transpose() * (xc.transpose() * yc);
    let scaled = DVector::from_fn(rhs.len(), |i, _| {
        let l = eig.eigenvalues[i];
        if l > cutoff {
            rhs[i] / l
        } else {
            0.0
        }
    });
    Ok(&eig.eigenvectors * scaled)
}

/// Value of `(1/(2n))·Σ(y − Xw − b)² + λ(Σ|w| + |b|)`.
pub fn lasso_objective(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, lambda: f64) -> f64 {
    let n = y.len() as f64;
    let err: f64 = x
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let pred = row.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b;
            (yi - pred).powi(2)
        })
        .sum();
    err / (2.0 * n) + lambda * (w.iter().map(|v| v.abs()).sum::<f64>() + b.abs())
}

fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Lasso by cyclic coordinate descent, weights first and then the intercept.
///
/// The intercept carries the same L1 penalty as the weights.
pub fn lasso_fit(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<(Vec<f64>, f64), FitError> {
    lasso_fit_traced(x, y, lambda, |_, _, _| {})
}

/// [`lasso_fit`] with a callback invoked after every sweep as `(sweep, w, b)`.
pub fn lasso_fit_traced(
    x: &[Vec<f64>],
    y: &[f64],
    lambda: f64,
    mut on_sweep: impl FnMut(usize, &[f64], f64),
) -> Result<(Vec<f64>, f64), FitError> {
    let k = check_shape(x, y)?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(FitError::Malformed(format!("lambda must be a nonnegative real, got {lambda}")));
    }
    let n = y.len();
    let nf = n as f64;
    // column-major copy for the inner loops
    let cols: Vec<Vec<f64>> = (0..k).map(|j| x.iter().map(|r| r[j]).collect()).collect();
    let col_sq: Vec<f64> = cols.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>() / nf).collect();

    let mut w = vec![0.0; k];
    let mut b = 0.0;
    let mut resid: Vec<f64> = y.to_vec();
    for sweep in 1..=LASSO_MAX_SWEEPS {
        let mut max_change: f64 = 0.0;
        for j in 0..k {
            if col_sq[j] == 0.0 {
                continue;
            }
            let col = &cols[j];
            let rho = col.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() / nf + col_sq[j] * w[j];
            let new = soft_threshold(rho, lambda) / col_sq[j];
            let delta = new - w[j];
            if delta != 0.0 {
                for (r, a) in resid.iter_mut().zip(col) {
                    *r -= delta * a;
                }
                w[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }
        let rho = resid.iter().sum::<f64>() / nf + b;
        let new_b = soft_threshold(rho, lambda);
        let delta = new_b - b;
        if delta != 0.0 {
            resid.iter_mut().for_each(|r| *r -= delta);
            b = new_b;
            max_change = max_change.max(delta.abs());
        }
        on_sweep(sweep, &w, b);
        if max_change < LASSO_TOL {
            return Ok((w, b));
        }
    }
    Err(FitError::NotConverged { solver: "lasso coordinate descent", iterations: LASSO_MAX_SWEEPS })
}
