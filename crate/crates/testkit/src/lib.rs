//! Brute-force reference implementations and synthetic fixtures for tests.
//!
//! Nothing here depends on the library crates, so every oracle is an
//! independent computation over plain vectors.

pub mod fixtures;
pub mod graph;
pub mod lp;
pub mod search;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Seeded generator for fixtures.
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Standard normal by Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Solves `A z = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut z = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * z[c]).sum();
        z[r] = (rhs[r] - s) / a[r][r];
    }
    Some(z)
}

/// R² written out directly from its definition.
pub fn r2(pred: &[f64], target: &[f64]) -> f64 {
    let mean = target.iter().sum::<f64>() / target.len() as f64;
    let sst: f64 = target.iter().map(|t| (t - mean) * (t - mean)).sum();
    let sse: f64 = pred.iter().zip(target).map(|(p, t)| (p - t) * (p - t)).sum();
    1.0 - sse / sst
}

/// Plain min–max scaling of every column and of the target.
pub fn minmax(rows: &mut [Vec<f64>], target: &mut [f64]) {
    let k = rows.first().map_or(0, Vec::len);
    for j in 0..k {
        let lo = rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        for r in rows.iter_mut() {
            r[j] = if hi > lo { (r[j] - lo) / (hi - lo) } else { 0.0 };
        }
    }
    let lo = target.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = target.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for t in target.iter_mut() {
        *t = (*t - lo) / (hi - lo);
    }
}
