//! Grid and pattern searches over small convex objectives.

use crate::Rng;

/// `(1/(2n))·Σ(y − Xw − b)² + λ(Σ|w| + |b|)` written out directly.
pub fn lasso_value(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, lambda: f64) -> f64 {
    let mut sse = 0.0;
    for (row, t) in x.iter().zip(y) {
        let mut p = b;
        for (a, c) in row.iter().zip(w) {
            p += a * c;
        }
        sse += (t - p) * (t - p);
    }
    sse / (2.0 * y.len() as f64) + lambda * (w.iter().map(|v| v.abs()).sum::<f64>() + b.abs())
}

/// Coarse-to-fine grid search for the two-descriptor Lasso objective.
/// Returns `(value, w1, w2, b)`.
pub fn lasso_grid_k2(x: &[Vec<f64>], y: &[f64], lambda: f64) -> (f64, f64, f64, f64) {
    let mut center = [0.0f64; 3];
    let mut half = 4.0;
    let steps = 20i32;
    let mut best = (f64::INFINITY, 0.0, 0.0, 0.0);
    while half > 1e-8 {
        let h = half / steps as f64;
        for i in -steps..=steps {
            for j in -steps..=steps {
                for l in -steps..=steps {
                    let w = [center[0] + i as f64 * h, center[1] + j as f64 * h];
                    let b = center[2] + l as f64 * h;
                    let v = lasso_value(x, y, &w, b, lambda);
                    if v < best.0 {
                        best = (v, w[0], w[1], b);
                    }
                }
            }
        }
        center = [best.1, best.2, best.3];
        half /= 4.0;
    }
    best
}

fn activations(v: f64) -> [f64; 3] {
    [v, v * v, 1.0 - (v - 1.0) * (v - 1.0)]
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

/// The adjustive-regression objective for fixed activation mixtures.
pub struct AlrProblem<'a> {
    pub rows: &'a [Vec<f64>],
    pub targets: &'a [f64],
    pub lambda: f64,
    /// Nonnegative correlation with the target per descriptor.
    pub positive: Vec<bool>,
}

impl<'a> AlrProblem<'a> {
    pub fn new(rows: &'a [Vec<f64>], targets: &'a [f64], lambda: f64) -> Self {
        let k = rows[0].len();
        let positive = (0..k)
            .map(|d| {
                let col: Vec<f64> = rows.iter().map(|r| r[d]).collect();
                pearson(&col, targets) >= 0.0
            })
            .collect();
        AlrProblem { rows, targets, lambda, positive }
    }

    fn shifted(&self, c: [f64; 3], w: &[[f64; 3]]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(self.targets)
            .map(|(x, &a)| {
                let fa = activations(a);
                let mut s = c[0] * fa[0] + c[1] * fa[1] + c[2] * fa[2];
                for (d, wd) in w.iter().enumerate() {
                    let fx = activations(x[d]);
                    let term = wd[0] * fx[0] + wd[1] * fx[1] + wd[2] * fx[2];
                    s += if self.positive[d] { -term } else { term };
                }
                s
            })
            .collect()
    }

    /// Objective at `(c, w, b)`.
    pub fn value(&self, c: [f64; 3], w: &[[f64; 3]], b: f64) -> f64 {
        let m = self.targets.len() as f64;
        let s = self.shifted(c, w);
        let err: f64 = s.iter().map(|v| (v - b).abs()).sum();
        err / (2.0 * m) + self.lambda * (w.iter().map(|wd| wd[0]).sum::<f64>() + b.abs())
    }

    /// Objective with the best `b`, found among the breakpoints of the
    /// piecewise-linear function of `b`.
    pub fn value_best_b(&self, c: [f64; 3], w: &[[f64; 3]]) -> (f64, f64) {
        let s = self.shifted(c, w);
        let m = s.len() as f64;
        let base = self.lambda * w.iter().map(|wd| wd[0]).sum::<f64>();
        let mut best = (f64::INFINITY, 0.0);
        for &b in s.iter().chain(std::iter::once(&0.0)) {
            let v = s.iter().map(|x| (x - b).abs()).sum::<f64>() / (2.0 * m) + self.lambda * b.abs() + base;
            if v < best.0 {
                best = (v, b);
            }
        }
        best
    }

    /// Grid over the simplex for `c` and over `{0, .5, 1, 1.5, 2}` for each
    /// `w_q(d)`, refined by a pattern search from the best grid points.
    pub fn minimize(&self, seed: u64) -> f64 {
        let k = self.positive.len();
        let levels = [0.0, 0.5, 1.0, 1.5, 2.0];
        let mut cands: Vec<(f64, Vec<f64>)> = Vec::new();
        let total = levels.len().pow(3 * k as u32);
        for ci in 0..=10 {
            for cj in 0..=(10 - ci) {
                let c = [ci as f64 / 10.0, cj as f64 / 10.0, (10 - ci - cj) as f64 / 10.0];
                for code in 0..total {
                    let mut rest = code;
                    let mut params = vec![c[0], c[1]];
                    for _ in 0..3 * k {
                        params.push(levels[rest % levels.len()]);
                        rest /= levels.len();
                    }
                    let v = self.eval(&params);
                    cands.push((v, params));
                }
            }
        }
        cands.sort_by(|a, b| a.0.total_cmp(&b.0));
        cands.truncate(10);
        let mut rng = Rng::new(seed);
        cands
            .into_iter()
            .map(|(_, p)| self.pattern_search(p, &mut rng))
            .fold(f64::INFINITY, f64::min)
    }

    fn unpack(&self, p: &[f64]) -> Option<([f64; 3], Vec<[f64; 3]>)> {
        let c2 = 1.0 - p[0] - p[1];
        if p.iter().any(|&v| v < 0.0) || c2 < -1e-15 {
            return None;
        }
        let c = [p[0], p[1], c2.max(0.0)];
        let w = p[2..].chunks(3).map(|ch| [ch[0], ch[1], ch[2]]).collect();
        Some((c, w))
    }

    fn eval(&self, p: &[f64]) -> f64 {
        match self.unpack(p) {
            Some((c, w)) => self.value_best_b(c, &w).0,
            None => f64::INFINITY,
        }
    }

    fn pattern_search(&self, mut p: Vec<f64>, rng: &mut Rng) -> f64 {
        let dim = p.len();
        let mut cur = self.eval(&p);
        let mut step = 0.25;
        while step > 1e-9 {
            let mut improved = false;
            let mut dirs: Vec<Vec<f64>> = Vec::new();
            for j in 0..dim {
                for s in [1.0, -1.0] {
                    let mut d = vec![0.0; dim];
                    d[j] = s;
                    dirs.push(d);
                }
            }
            // pairs along the simplex edge and random directions help at kinks
            for _ in 0..4 * dim {
                dirs.push((0..dim).map(|_| rng.range(-1.0, 1.0)).collect());
            }
            for d in dirs {
                let q: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a + step * b).collect();
                let v = self.eval(&q);
                if v < cur - 1e-15 {
                    cur = v;
                    p = q;
                    improved = true;
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        cur
    }
}
