//! Adjustive linear regression: an LP fitting nonnegative mixtures of the
//! activations `v`, `v²` and `1 − (v − 1)²` on both the target and every
//! descriptor, followed by recovery of a plain linear predictor.

use crate::dataset::DataSet;
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};

use super::{correlation, Descriptor, Hyperplane, LinearModel, Method, RegressionError};

/// Values below this are treated as a zero activation weight.
const ZERO_WEIGHT: f64 = 1e-12;

fn activations(v: f64) -> [f64; 3] {
    [v, v * v, 1.0 - (v - 1.0) * (v - 1.0)]
}

/// Column positions of the ALR variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlrLayout {
    pub num_descriptors: usize,
    pub num_compounds: usize,
}

impl AlrLayout {
    pub fn c(&self, q: usize) -> usize {
        q
    }
    pub fn w(&self, q: usize, d: usize) -> usize {
        3 + 3 * d + q
    }
    pub fn b(&self) -> usize {
        3 + 3 * self.num_descriptors
    }
    /// Auxiliary variable bounding `|b|`.
    pub fn t(&self) -> usize {
        self.b() + 1
    }
    /// Auxiliary variable bounding the absolute residual of compound `i`.
    pub fn e(&self, i: usize) -> usize {
        self.t() + 1 + i
    }
    pub fn num_vars(&self) -> usize {
        self.e(self.num_compounds)
    }
}

pub fn alr_lp_layout(ds: &DataSet) -> AlrLayout {
    AlrLayout { num_descriptors: ds.num_descriptors(), num_compounds: ds.len() }
}

/// Raw LP optimum together with the descriptor sign partition.
#[derive(Debug, Clone, PartialEq)]
pub struct AlrSolution {
    pub objective: f64,
    pub c: [f64; 3],
    /// `w[d] = [w_0(d), w_1(d), w_2(d)]`.
    pub w: Vec<[f64; 3]>,
    pub b: f64,
    /// `true` when the descriptor belongs to the nonnegative-correlation class.
    pub positive: Vec<bool>,
}

impl AlrSolution {
    /// Linear weights by the ratio rule `±w_0/(w_0+w_1+w_2)`.
    pub fn recovered_weights(&self) -> Vec<f64> {
        self.w
            .iter()
            .zip(&self.positive)
            .map(|(wd, &pos)| {
                if wd[0] <= ZERO_WEIGHT {
                    return 0.0;
                }
                let ratio = wd[0] / (wd[0] + wd[1] + wd[2]);
                if pos {
                    ratio
                } else {
                    -ratio
                }
            })
            .collect()
    }
}

fn sign_classes(ds: &DataSet) -> Vec<bool> {
    (0..ds.num_descriptors()).map(|d| correlation(&ds.column(d), &ds.targets) >= 0.0).collect()
}

/// Builds the ALR linear program and returns it with the sign classes used.
pub fn build_alr_lp(ds: &DataSet, lambda: f64) -> Result<(LinearProgram, Vec<bool>), RegressionError> {
    if ds.is_empty() {
        return Err(RegressionError::Empty);
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(RegressionError::Other(format!("lambda must be a nonnegative real, got {lambda}")));
    }
    let lay = alr_lp_layout(ds);
    let m = ds.len();
    let k = ds.num_descriptors();
    let positive = sign_classes(ds);

    let nv = lay.num_vars();
    let mut objective = vec![0.0; nv];
    for i in 0..m {
        objective[lay.e(i)] = 1.0 / (2.0 * m as f64);
    }
    for d in 0..k {
        objective[lay.w(0, d)] = lambda;
    }
    objective[lay.t()] = lambda;
    let mut lp = LinearProgram::with_objective(objective);
    lp.set_bounds(lay.b(), f64::NEG_INFINITY, f64::INFINITY);

    for i in 0..m {
        // residual r_i = Σ c_q φ_q(a) ∓ Σ w_q(d) φ_q(x(d)) − b
        let mut r = vec![0.0; nv];
        for (q, v) in activations(ds.targets[i]).into_iter().enumerate() {
            r[lay.c(q)] = v;
        }
        for d in 0..k {
            let sign = if positive[d] { -1.0 } else { 1.0 };
            for (q, v) in activations(ds.features[i][d]).into_iter().enumerate() {
                r[lay.w(q, d)] = sign * v;
            }
        }
        r[lay.b()] = -1.0;

        let mut upper: Vec<f64> = r.iter().map(|v| -v).collect();
        upper[lay.e(i)] = 1.0;
        lp.add_constraint(upper, Relation::Ge, 0.0);
        r[lay.e(i)] = 1.0;
        lp.add_constraint(r, Relation::Ge, 0.0);
    }
    let mut tb = vec![0.0; nv];
    tb[lay.t()] = 1.0;
    tb[lay.b()] = -1.0;
    lp.add_constraint(tb.clone(), Relation::Ge, 0.0);
    tb[lay.b()] = 1.0;
    lp.add_constraint(tb, Relation::Ge, 0.0);
    let mut simplex = vec![0.0; nv];
    (0..3).for_each(|q| simplex[lay.c(q)] = 1.0);
    lp.add_constraint(simplex, Relation::Eq, 1.0);
    Ok((lp, positive))
}

/// Solves the ALR program and returns the raw optimum.
pub fn solve_alr(ds: &DataSet, lambda: f64) -> Result<AlrSolution, RegressionError> {
    let first = ds.targets.first().copied().ok_or(RegressionError::Empty)?;
    if ds.targets.iter().all(|&a| a == first) {
        return Err(RegressionError::DegenerateTarget);
    }
    let (lp, positive) = build_alr_lp(ds, lambda)?;
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(RegressionError::LpNotOptimal(sol.status));
    }
    let lay = alr_lp_layout(ds);
    let z = &sol.values;
    Ok(AlrSolution {
        objective: sol.objective_value,
        c: [z[lay.c(0)], z[lay.c(1)], z[lay.c(2)]],
        w: (0..lay.num_descriptors)
            .map(|d| [z[lay.w(0, d)], z[lay.w(1, d)], z[lay.w(2, d)]])
            .collect(),
        b: z[lay.b()],
        positive,
    })
}

/// Fits ALR and returns the recovered linear predictor over all descriptors
/// with a nonzero recovered weight.
pub fn fit_alr(ds: &DataSet, lambda: f64) -> Result<LinearModel, RegressionError> {
    let sol = solve_alr(ds, lambda)?;
    let (descriptors, w): (Vec<_>, Vec<_>) = sol
        .recovered_weights()
        .into_iter()
        .enumerate()
        .filter(|(_, v)| *v != 0.0)
        .map(|(d, v)| (Descriptor::Linear(d), v))
        .unzip();
    Ok(LinearModel {
        method: Method::Alr,
        descriptors,
        hyperplane: Hyperplane::new(w, sol.b),
        input_dim: ds.num_descriptors(),
        lambda: Some(lambda),
        budget: None,
    })
}
