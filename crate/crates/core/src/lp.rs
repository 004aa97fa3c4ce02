//! Dense two-phase simplex for small and medium linear programs.
//!
//! Problems are stated as `minimize c·z` over general bounded variables and
//! `≤ / ≥ / =` rows. Internally every variable is mapped onto nonnegative
//! columns, rows are sign-normalized to a nonnegative right-hand side, and a
//! crash basis is picked from slacks and singleton columns so that phase 1
//! only runs when artificial variables are actually needed.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving basic variable on ratio ties), which rules out cycling and makes
//! the solver deterministic for a fixed instance.

use thiserror::Error;

/// Maximum constraint violation accepted for a returned vertex.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Reduced-cost threshold for declaring optimality.
pub const OPTIMALITY_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("simplex iteration cap of {0} pivots exceeded")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs + tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarBounds {
    pub lower: f64,
    pub upper: f64,
}

impl VarBounds {
    pub const NONNEGATIVE: VarBounds = VarBounds { lower: 0.0, upper: f64::INFINITY };
    pub const FREE: VarBounds = VarBounds { lower: f64::NEG_INFINITY, upper: f64::INFINITY };

    pub fn new(lower: f64, upper: f64) -> Self {
        VarBounds { lower, upper }
    }
}

/// `minimize objective·z` subject to `constraints` and per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            bounds: vec![VarBounds::NONNEGATIVE; num_vars],
        }
    }

    pub fn with_objective(objective: Vec<f64>) -> Self {
        let mut lp = LinearProgram::new(objective.len());
        lp.objective = objective;
        lp
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.bounds[var] = VarBounds { lower, upper };
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars {
            return Err(LpError::Malformed(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        if self.bounds.len() != self.num_vars {
            return Err(LpError::Malformed(format!(
                "{} bound pairs for {} variables",
                self.bounds.len(),
                self.num_vars
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("objective contains a non-finite coefficient".into()));
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if b.lower.is_nan() || b.upper.is_nan() || b.lower > b.upper {
                return Err(LpError::Malformed(format!(
                    "variable {j} has bounds [{}, {}]",
                    b.lower, b.upper
                )));
            }
            if b.lower == f64::INFINITY || b.upper == f64::NEG_INFINITY {
                return Err(LpError::Malformed(format!("variable {j} has an empty bound range")));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::Malformed(format!(
                    "constraint {i} has {} coefficients for {} variables",
                    c.coeffs.len(),
                    self.num_vars
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::Malformed(format!("constraint {i} has a non-finite entry")));
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `z`.
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(z).map(|(a, v)| a * v).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (b, v) in self.bounds.iter().zip(z) {
            worst = worst.max(b.lower - v).max(v - b.upper);
        }
        worst
    }

    /// Pivot budget applied across both simplex phases.
    pub fn iteration_cap(&self) -> usize {
        50 * (self.num_vars + self.constraints.len()).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point; empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    /// `+∞` when infeasible and `−∞` when unbounded.
    pub objective_value: f64,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// z = offset + y
    Shift { offset: f64, col: usize },
    /// z = offset - y
    Reflect { offset: f64, col: usize },
    /// z = y+ - y-
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    maps: Vec<VarMap>,
    num_cols: usize,
    /// Rows over structural columns after sign normalization.
    rows: Vec<(Vec<f64>, Relation, f64)>,
    cost: Vec<f64>,
}

fn to_standard_form(lp: &LinearProgram) -> StandardForm {
    let mut maps = Vec::with_capacity(lp.num_vars);
    let mut num_cols = 0;
    // (column, upper bound on that column)
    let mut col_upper: Vec<(usize, f64)> = Vec::new();
    for b in &lp.bounds {
        let (lo, hi) = (b.lower, b.upper);
        let map = if lo.is_finite() && (lo >= 0.0 || hi < 0.0) {
            let col = num_cols;
            num_cols += 1;
            if hi.is_finite() {
                col_upper.push((col, hi - lo));
            }
            VarMap::Shift { offset: lo, col }
        } else if !lo.is_finite() && hi.is_finite() && hi < 0.0 {
            let col = num_cols;
            num_cols += 1;
            VarMap::Reflect { offset: hi, col }
        } else {
            // zero lies inside [lo, hi]
            let (pos, neg) = (num_cols, num_cols + 1);
            num_cols += 2;
            if hi.is_finite() {
                col_upper.push((pos, hi));
            }
            if lo.is_finite() {
                col_upper.push((neg, -lo));
            }
            VarMap::Split { pos, neg }
        };
        maps.push(map);
    }

    let expand = |coeffs: &[f64]| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; num_cols];
        let mut constant = 0.0;
        for (a, m) in coeffs.iter().zip(&maps) {
            match *m {
                VarMap::Shift { offset, col } => {
                    row[col] += a;
                    constant += a * offset;
                }
                VarMap::Reflect { offset, col } => {
                    row[col] -= a;
                    constant += a * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        (row, constant)
    };

    let mut rows = Vec::with_capacity(lp.constraints.len() + col_upper.len());
    for c in &lp.constraints {
        let (row, constant) = expand(&c.coeffs);
        rows.push((row, c.relation, c.rhs - constant));
    }
    for (col, ub) in col_upper {
        let mut row = vec![0.0; num_cols];
        row[col] = 1.0;
        rows.push((row, Relation::Le, ub));
    }
    for (row, rel, rhs) in rows.iter_mut() {
        if *rhs < 0.0 || (*rhs == 0.0 && *rel == Relation::Ge) {
            row.iter_mut().for_each(|a| *a = -*a);
            *rhs = -*rhs;
            *rel = rel.flipped();
        }
    }
    let (cost, _) = expand(&lp.objective);
    StandardForm { maps, num_cols, rows, cost }
}

/// Dense simplex tableau; row `m` of `a` is unused, the objective row lives in `obj`.
struct Tableau {
    m: usize,
    n: usize,
    a: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    cap: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * (self.n + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.a[r * (self.n + 1) + self.n]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.n + 1;
        let p = self.a[pr * w + pc];
        {
            let row = &mut self.a[pr * w..(pr + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[pc] = 1.0;
        }
        let pivot_row: Vec<f64> = self.a[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.m {
            if r == pr {
                continue;
            }
            let f = self.a[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[r * w..(r + 1) * w];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
                if v.abs() < ZERO_TOL {
                    *v = 0.0;
                }
            }
            row[pc] = 0.0;
        }
        let f = self.obj[pc];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
                if v.abs() < ZERO_TOL {
                    *v = 0.0;
                }
            }
            self.obj[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Loads `cost` as the objective row and prices out the current basis.
    fn set_cost(&mut self, cost: &[f64]) {
        self.obj = cost.to_vec();
        self.obj.push(0.0);
        let w = self.n + 1;
        for r in 0..self.m {
            let cb = self.obj[self.basis[r]];
            if cb != 0.0 {
                for c in 0..w {
                    self.obj[c] -= cb * self.a[r * w + c];
                }
            }
        }
    }

    fn run(&mut self, allowed: &[bool]) -> Result<PhaseOutcome, LpError> {
        loop {
            let entering = (0..self.n).find(|&c| allowed[c] && self.obj[c] < -OPTIMALITY_TOL);
            let Some(pc) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, pc);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        let tie = (ratio - bratio).abs() <= ZERO_TOL * (1.0 + bratio.abs());
                        if (!tie && ratio < bratio) || (tie && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            let Some((pr, _)) = leave else {
                return Ok(PhaseOutcome::Unbounded);
            };
            if self.pivots >= self.cap {
                return Err(LpError::IterationLimit(self.cap));
            }
            self.pivot(pr, pc);
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.n + 1;
        self.a.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.m -= 1;
    }
}

/// Solves `problem` to optimality or classifies it as infeasible or unbounded.
pub fn solve_lp(problem: &LinearProgram) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let sf = to_standard_form(problem);
    let m = sf.rows.len();
    let n_struct = sf.num_cols;

    // Column layout: structural | one slack/surplus per inequality row | artificials.
    let mut slack_of_row = vec![None; m];
    let mut next = n_struct;
    for (r, (_, rel, _)) in sf.rows.iter().enumerate() {
        if *rel != Relation::Eq {
            slack_of_row[r] = Some(next);
            next += 1;
        }
    }
    // Crash basis: slack for ≤ rows, else a singleton structural column with positive coefficient.
    let mut nonzeros_per_col = vec![0usize; n_struct];
    for (row, _, _) in &sf.rows {
        for (c, a) in row.iter().enumerate() {
            if *a != 0.0 {
                nonzeros_per_col[c] += 1;
            }
        }
    }
    let mut used = vec![false; n_struct];
    let mut basis_choice: Vec<Option<usize>> = vec![None; m];
    for (r, (row, rel, _)) in sf.rows.iter().enumerate() {
        if *rel == Relation::Le {
            basis_choice[r] = slack_of_row[r];
            continue;
        }
        if let Some(c) =
            (0..n_struct).find(|&c| !used[c] && nonzeros_per_col[c] == 1 && row[c] > PIVOT_TOL)
        {
            used[c] = true;
            basis_choice[r] = Some(c);
        }
    }
    let first_artificial = next;
    let mut artificial_rows = Vec::new();
    for (r, choice) in basis_choice.iter_mut().enumerate() {
        if choice.is_none() {
            *choice = Some(next);
            artificial_rows.push(r);
            next += 1;
        }
    }
    let n = next;

    let w = n + 1;
    let mut a = vec![0.0; m * w];
    for (r, (row, rel, rhs)) in sf.rows.iter().enumerate() {
        a[r * w..r * w + n_struct].copy_from_slice(row);
        if let Some(s) = slack_of_row[r] {
            a[r * w + s] = if *rel == Relation::Le { 1.0 } else { -1.0 };
        }
        a[r * w + n] = *rhs;
    }
    for &r in &artificial_rows {
        let c = basis_choice[r].unwrap();
        a[r * w + c] = 1.0;
    }
    let mut tab = Tableau {
        m,
        n,
        a,
        obj: vec![0.0; w],
        basis: basis_choice.iter().map(|c| c.unwrap()).collect(),
        pivots: 0,
        cap: problem.iteration_cap(),
    };
    // Scale singleton crash rows so the basic column has a unit coefficient.
    for r in 0..m {
        let c = tab.basis[r];
        let p = tab.at(r, c);
        if p != 1.0 {
            for v in &mut tab.a[r * w..(r + 1) * w] {
                *v /= p;
            }
        }
    }

    let mut allowed = vec![true; n];
    if !artificial_rows.is_empty() {
        let mut cost1 = vec![0.0; n];
        for c in cost1.iter_mut().skip(first_artificial) {
            *c = 1.0;
        }
        tab.set_cost(&cost1);
        tab.run(&allowed)?;
        let infeasibility = -tab.obj[n];
        let scale = 1.0 + sf.rows.iter().map(|(_, _, rhs)| rhs.abs()).fold(0.0, f64::max);
        if infeasibility > FEASIBILITY_TOL * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective_value: f64::INFINITY,
                pivots: tab.pivots,
            });
        }
        // Drive zero-level artificials out of the basis or drop their redundant rows.
        let mut r = 0;
        while r < tab.m {
            if tab.basis[r] >= first_artificial {
                let col = (0..first_artificial).find(|&c| tab.at(r, c).abs() > PIVOT_TOL);
                match col {
                    Some(c) => {
                        tab.pivot(r, c);
                        r += 1;
                    }
                    None => tab.remove_row(r),
                }
            } else {
                r += 1;
            }
        }
        for flag in allowed.iter_mut().skip(first_artificial) {
            *flag = false;
        }
    }

    let mut cost2 = vec![0.0; n];
    cost2[..n_struct].copy_from_slice(&sf.cost);
    tab.set_cost(&cost2);
    let outcome = tab.run(&allowed)?;
    if let PhaseOutcome::Unbounded = outcome {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective_value: f64::NEG_INFINITY,
            pivots: tab.pivots,
        });
    }

    let mut y = vec![0.0; n];
    for r in 0..tab.m {
        y[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let values: Vec<f64> = sf
        .maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { offset, col } => offset + y[col],
            VarMap::Reflect { offset, col } => offset - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        })
        .collect();
    let objective_value = problem.objective.iter().zip(&values).map(|(c, v)| c * v).sum::<f64>();
    Ok(LpSolution { status: LpStatus::Optimal, values, objective_value, pivots: tab.pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_of_two_lower_bounds() {
        let mut lp = LinearProgram::with_objective(vec![1.0]);
        lp.set_bounds(0, f64::NEG_INFINITY, f64::INFINITY);
        lp.add_constraint(vec![1.0], Relation::Ge, 3.0);
        lp.add_constraint(vec![1.0], Relation::Ge, 5.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 5.0).abs() < 1e-12);
        assert!((sol.objective_value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::with_objective(vec![-1.0]);
        lp.add_constraint(vec![1.0], Relation::Ge, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_rows() {
        let mut lp = LinearProgram::with_objective(vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        lp.add_constraint(vec![1.0, 1.0], Relation::Ge, 2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn infeasible_bounds_against_row() {
        let mut lp = LinearProgram::with_objective(vec![1.0]);
        lp.set_bounds(0, -2.0, -1.0);
        lp.add_constraint(vec![1.0], Relation::Ge, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 2 (twice), minimize x - y with y <= 1.5
        let mut lp = LinearProgram::with_objective(vec![1.0, -1.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Eq, 2.0);
        lp.add_constraint(vec![2.0, 2.0], Relation::Eq, 4.0);
        lp.set_bounds(1, 0.0, 1.5);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 0.5).abs() < 1e-9);
        assert!((sol.values[1] - 1.5).abs() < 1e-9);
        assert!((sol.objective_value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn negative_and_reflected_bounds() {
        // minimize x + y with x in [-3, -1], y in (-inf, -2]: x = -3, y unbounded below
        let mut lp = LinearProgram::with_objective(vec![1.0, 1.0]);
        lp.set_bounds(0, -3.0, -1.0);
        lp.set_bounds(1, f64::NEG_INFINITY, -2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
        lp.add_constraint(vec![0.0, 1.0], Relation::Ge, -10.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.values[0] + 3.0).abs() < 1e-9);
        assert!((sol.values[1] + 10.0).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_is_malformed() {
        let mut lp = LinearProgram::with_objective(vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::Malformed(_))));
        let mut lp = LinearProgram::with_objective(vec![1.0]);
        lp.set_bounds(0, 2.0, 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::Malformed(_))));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::with_objective(vec![-0.75, 150.0, -0.02, 6.0]);
        lp.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value + 0.05).abs() < 1e-9);
    }
}
