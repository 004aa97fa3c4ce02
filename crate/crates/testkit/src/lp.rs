//! Vertex enumeration for small bounded linear programs.

use crate::{solve_dense, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// `minimize c·z` subject to rows and the box `lower ≤ z ≤ upper`.
#[derive(Debug, Clone)]
pub struct SmallLp {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Rel, f64)>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SmallLp {
    pub fn feasible(&self, z: &[f64], tol: f64) -> bool {
        let in_box = z
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol);
        in_box
            && self.rows.iter().all(|(a, rel, rhs)| {
                let lhs: f64 = a.iter().zip(z).map(|(x, y)| x * y).sum();
                match rel {
                    Rel::Le => lhs <= rhs + tol,
                    Rel::Ge => lhs >= rhs - tol,
                    Rel::Eq => (lhs - rhs).abs() <= tol,
                }
            })
    }

    /// Optimal objective over all basic feasible points, or `None` if infeasible.
    pub fn brute_force(&self) -> Option<f64> {
        let n = self.objective.len();
        let mut planes: Vec<(Vec<f64>, f64)> =
            self.rows.iter().map(|(a, _, rhs)| (a.clone(), *rhs)).collect();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            planes.push((e.clone(), self.lower[j]));
            planes.push((e, self.upper[j]));
        }
        let all: Vec<usize> = (0..planes.len()).collect();
        let mut best: Option<f64> = None;
        let mut pick = Vec::with_capacity(n);
        combos(&all, n, 0, &mut pick, &mut |idx| {
            let a: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
            let b: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
            if let Some(z) = solve_dense(a, b) {
                if self.feasible(&z, 1e-8) {
                    let v: f64 = self.objective.iter().zip(&z).map(|(c, x)| c * x).sum();
                    if best.map_or(true, |b| v < b) {
                        best = Some(v);
                    }
                }
            }
        });
        best
    }
}

fn combos(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - cur.len() {
            break;
        }
        cur.push(items[i]);
        combos(items, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Random LP with 1..=6 variables, 1..=8 rows and a finite box. Most instances
/// are built around an interior point so they are feasible; about one in eight
/// has arbitrary right-hand sides.
pub fn random_lp(rng: &mut Rng) -> SmallLp {
    let n = rng.int(1, 6);
    let m = rng.int(1, 8);
    let lower: Vec<f64> = (0..n).map(|_| rng.range(-5.0, 0.0).round()).collect();
    let upper: Vec<f64> = lower.iter().map(|l| l + rng.range(1.0, 6.0).round()).collect();
    let point: Vec<f64> = lower.iter().zip(&upper).map(|(l, u)| rng.range(*l, *u)).collect();
    let arbitrary = rng.int(0, 7) == 0;
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let a: Vec<f64> = (0..n).map(|_| rng.range(-5.0, 5.0).round()).collect();
        let at: f64 = a.iter().zip(&point).map(|(x, y)| x * y).sum();
        let pick = rng.int(0, 9);
        let (rel, rhs) = if arbitrary {
            (if pick < 5 { Rel::Le } else { Rel::Ge }, rng.range(-10.0, 10.0).round())
        } else if pick == 0 {
            (Rel::Eq, at)
        } else if pick < 6 {
            (Rel::Le, at + rng.range(0.0, 3.0))
        } else {
            (Rel::Ge, at - rng.range(0.0, 3.0))
        };
        rows.push((a, rel, rhs));
    }
    let objective = (0..n).map(|_| rng.range(-3.0, 3.0).round()).collect();
    SmallLp { objective, rows, lower, upper }
}
