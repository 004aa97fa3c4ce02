//! Synthetic data sets with planted structure. Every generator returns
//! features and targets already min–max scaled to `[0, 1]`.

use crate::{minmax, Rng};

pub struct Planted {
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

/// Targets increase along a fixed direction `u·x`, with a value jump from
/// 0.30 to 0.34 at the boundary so that exactly the compounds with
/// `a ≤ 0.3` lie on one side of a hyperplane.
pub fn separable(n: usize, k: usize, seed: u64) -> Planted {
    let mut rng = Rng::new(seed);
    let u: Vec<f64> = (0..k).map(|j| 1.0 / (j + 1) as f64).collect();
    let mut rows = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for _ in 0..n {
        rows.push((0..k).map(|_| rng.unit()).collect::<Vec<f64>>());
    }
    for x in &rows {
        s.push(x.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>());
    }
    let mut sorted = s.clone();
    sorted.sort_by(f64::total_cmp);
    // about 35% of the compounds below the boundary
    let cut = (n as f64 * 0.35) as usize;
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let (below, above) = (sorted[cut - 1], sorted[cut]);
    let mut targets: Vec<f64> = s
        .iter()
        .map(|&v| {
            if v <= below {
                0.3 * (v - lo) / (below - lo)
            } else {
                0.34 + 0.66 * (v - above) / (hi - above)
            }
        })
        .collect();
    minmax(&mut rows, &mut targets);
    Planted { rows, targets }
}

/// Two linear regimes split by the first descriptor, which avoids the band
/// `(0.45, 0.55)`. The regimes have opposite slopes in the second descriptor
/// and disjoint value ranges. Gaussian noise of standard deviation `sigma`
/// is added on the final `[0, 1]` target scale.
pub fn two_regime(n: usize, k: usize, sigma: f64, seed: u64) -> Planted {
    assert!(k >= 4);
    let mut rng = Rng::new(seed);
    let mut rows = Vec::with_capacity(n);
    let mut raw = Vec::with_capacity(n);
    for _ in 0..n {
        let mut x: Vec<f64> = (0..k).map(|_| rng.unit()).collect();
        x[0] = if rng.unit() < 0.5 { rng.range(0.0, 0.45) } else { rng.range(0.55, 1.0) };
        let y = if x[0] < 0.5 {
            0.2 + 0.8 * x[1] + 0.3 * x[2]
        } else {
            2.5 - 0.8 * x[1] + 0.3 * x[3]
        };
        rows.push(x);
        raw.push(y);
    }
    // affine map of the noiseless range [0.2, 2.8] onto [0, 1]
    let mut targets: Vec<f64> = raw.iter().map(|y| (y - 0.2) / 2.6 + sigma * rng.normal()).collect();
    minmax(&mut rows, &mut targets);
    Planted { rows, targets }
}

/// Piecewise-linear targets: `a = 0.4·x(1)` below the plane `x(2) = 0.5` and
/// `a = 0.6 + 0.4·x(1)` above it, on a grid that keeps clear of the plane.
pub fn piecewise(per_side: usize, seed: u64) -> Planted {
    let mut rng = Rng::new(seed);
    let mut rows = Vec::new();
    let mut targets = Vec::new();
    for side in 0..2 {
        for i in 0..per_side {
            let x1 = i as f64 / (per_side - 1) as f64;
            let x2 = if side == 0 { rng.range(0.0, 0.4) } else { rng.range(0.6, 1.0) };
            let x3 = rng.unit();
            rows.push(vec![x1, x2, x3]);
            targets.push(if side == 0 { 0.4 * x1 } else { 0.6 + 0.4 * x1 });
        }
    }
    minmax(&mut rows, &mut targets);
    Planted { rows, targets }
}
