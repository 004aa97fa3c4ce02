//! Hyperplane data splitting: a threshold LP that separates low from high
//! observed values, a threshold scan, and the two-piece predictor built on
//! the resulting split.

mod model;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::{DataSet, DatasetError};
use crate::lp::{solve_lp, LinearProgram, LpError, LpStatus, Relation};
use crate::regression::{Hyperplane, RegressionError};

pub use model::{
    emit_phase2_constraint, fit_sides, load_model, model_from_json, model_to_json, predict_hps,
    predict_original, save_model, train_hps, ModelFile, Phase2Constraint, SplitModel,
    SubModelFile, MODEL_VERSION,
};

/// Bound on every `|w(d)|` and on `|b|` while solving the threshold LP.
pub const WEIGHT_BOX: f64 = 1e4;
/// A compound is on side 1 when `w·x − b` does not exceed this.
pub const SIDE_TOL: f64 = 1e-9;
pub const DEFAULT_MIN_FRACTION: f64 = 0.25;
const ANCHOR_TOL: f64 = 1e-12;
const GAP_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SplitError {
    #[error("threshold {0} is outside the open interval (0, 1)")]
    ThetaOutOfRange(f64),
    #[error("no compound has normalized observed value {0}; normalize the data first")]
    MissingAnchor(f64),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("threshold LP finished with status {0:?}")]
    LpNotOptimal(LpStatus),
    #[error("hyperplane for threshold {theta} leaves side {side} empty")]
    DegenerateSplit { theta: f64, side: usize },
    #[error("threshold grid is empty")]
    EmptyGrid,
    #[error("min_fraction must lie in (0, 0.5], got {0}")]
    BadFraction(f64),
    #[error("no threshold in the grid produced a split: {0}")]
    NoSplit(String),
    #[error("side {side} has {size} compounds; at least 2 are needed")]
    SubsetTooSmall { side: usize, size: usize },
    #[error("side {side}: {source}")]
    SideFit { side: usize, source: RegressionError },
    #[error(transparent)]
    Regression(#[from] RegressionError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("feature vector has {got} entries, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("target interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

/// Multiples of 0.05 in `[0.05, 0.95]`.
pub fn default_grid() -> Vec<f64> {
    (1..20).map(|i| i as f64 / 20.0).collect()
}

/// A hyperplane split of a normalized data set at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitResult {
    pub theta: f64,
    pub hyperplane: Hyperplane,
    /// Row indices on side 1 (`w·x − b ≤ 0`) and side 2.
    pub subset1: Vec<usize>,
    pub subset2: Vec<usize>,
    pub subset1_ids: Vec<String>,
    pub subset2_ids: Vec<String>,
    pub a_min_1: f64,
    pub a_max_1: f64,
    pub a_min_2: f64,
    pub a_max_2: f64,
    pub lp_objective: f64,
}

impl SplitResult {
    /// `a_max^(1) − a_min^(2)`; nonpositive when the sides do not overlap in value.
    pub fn gap(&self) -> f64 {
        self.a_max_1 - self.a_min_2
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.subset1.len(), self.subset2.len())
    }
}

/// Side of `x` under the hyperplane: 0 when `w·x − b ≤ 0`, else 1.
pub fn side_of(h: &Hyperplane, x: &[f64]) -> usize {
    if h.dot(x) - h.b <= SIDE_TOL {
        0
    } else {
        1
    }
}

fn check_theta(theta: f64) -> Result<(), SplitError> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(SplitError::ThetaOutOfRange(theta))
    }
}

/// Lowest-index compounds attaining observed value 0 and 1.
pub fn anchors(ds: &DataSet) -> Result<(usize, usize), SplitError> {
    let find = |v: f64| {
        ds.targets
            .iter()
            .position(|&a| (a - v).abs() <= ANCHOR_TOL)
            .ok_or(SplitError::MissingAnchor(v))
    };
    Ok((find(0.0)?, find(1.0)?))
}

/// The threshold LP over `w` (K free), `b` (free) and one `δ_i ≥ 0` per
/// compound, in that variable order.
pub fn build_split_lp(ds: &DataSet, theta: f64) -> Result<LinearProgram, SplitError> {
    check_theta(theta)?;
    let (s, t) = anchors(ds)?;
    let k = ds.num_descriptors();
    let n = ds.len();
    let nv = k + 1 + n;
    let mut objective = vec![0.0; nv];
    objective[k + 1..].iter_mut().for_each(|c| *c = 1.0);
    let mut lp = LinearProgram::with_objective(objective);
    for j in 0..=k {
        lp.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
    }
    // side expression w·x − b with sign `sign`
    let side_row = |x: &[f64], sign: f64| {
        let mut row = vec![0.0; nv];
        for (j, v) in x.iter().enumerate() {
            row[j] = sign * v;
        }
        row[k] = -sign;
        row
    };
    for i in 0..n {
        let a = ds.targets[i];
        let margin = (a - theta) * (a - theta);
        // δ_i ≥ ±(w·x_i − b) + (a_i − θ)²
        let sign = if a <= theta { -1.0 } else { 1.0 };
        let mut row = side_row(&ds.features[i], sign);
        row[k + 1 + i] = 1.0;
        lp.add_constraint(row, Relation::Ge, margin);
    }
    lp.add_constraint(side_row(&ds.features[s], 1.0), Relation::Le, 0.0);
    lp.add_constraint(side_row(&ds.features[t], 1.0), Relation::Ge, 0.0);
    Ok(lp)
}

/// Solves the threshold LP with the weight box and splits the data.
pub fn find_hyperplane(ds: &DataSet, theta: f64) -> Result<SplitResult, SplitError> {
    let mut lp = build_split_lp(ds, theta)?;
    let k = ds.num_descriptors();
    for j in 0..=k {
        lp.set_bounds(j, -WEIGHT_BOX, WEIGHT_BOX);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(SplitError::LpNotOptimal(sol.status));
    }
    let hyperplane = Hyperplane::new(sol.values[..k].to_vec(), sol.values[k]);
    split_by(ds, theta, hyperplane, sol.objective_value)
}

/// Splits `ds` with a given hyperplane.
pub fn split_by(
    ds: &DataSet,
    theta: f64,
    hyperplane: Hyperplane,
    lp_objective: f64,
) -> Result<SplitResult, SplitError> {
    let (subset1, subset2): (Vec<usize>, Vec<usize>) =
        (0..ds.len()).partition(|&i| side_of(&hyperplane, &ds.features[i]) == 0);
    if subset1.is_empty() {
        return Err(SplitError::DegenerateSplit { theta, side: 1 });
    }
    if subset2.is_empty() {
        return Err(SplitError::DegenerateSplit { theta, side: 2 });
    }
    let range = |idx: &[usize]| {
        idx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            (lo.min(ds.targets[i]), hi.max(ds.targets[i]))
        })
    };
    let (a_min_1, a_max_1) = range(&subset1);
    let (a_min_2, a_max_2) = range(&subset2);
    Ok(SplitResult {
        theta,
        hyperplane,
        subset1_ids: subset1.iter().map(|&i| ds.ids[i].clone()).collect(),
        subset2_ids: subset2.iter().map(|&i| ds.ids[i].clone()).collect(),
        subset1,
        subset2,
        a_min_1,
        a_max_1,
        a_min_2,
        a_max_2,
        lp_objective,
    })
}

/// One grid point of a threshold scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub size1: Option<usize>,
    pub size2: Option<usize>,
    pub a_max_1: Option<f64>,
    pub a_min_2: Option<f64>,
    pub gap: Option<f64>,
    pub lp_objective: Option<f64>,
    pub admissible: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub best: SplitResult,
    pub table: Vec<ScanRow>,
    /// Set when no threshold met the size constraint.
    pub warning: Option<String>,
}

fn closer_to_half(a: f64, b: f64) -> std::cmp::Ordering {
    let (da, db) = ((a - 0.5).abs(), (b - 0.5).abs());
    da.partial_cmp(&db).unwrap().then(a.partial_cmp(&b).unwrap())
}

/// Solves the threshold LP at every grid point and picks the admissible split
/// with the smallest gap `a_max^(1) − a_min^(2)`.
///
/// A split is admissible when both sides hold at least `min_fraction·|C|`
/// compounds. Gap ties go to the threshold closest to 0.5, then the smaller one.
/// Without any admissible split, the one with the largest smaller side wins.
pub fn scan_thresholds(ds: &DataSet, grid: &[f64], min_fraction: f64) -> Result<ScanOutcome, SplitError> {
    if grid.is_empty() {
        return Err(SplitError::EmptyGrid);
    }
    if !(min_fraction > 0.0 && min_fraction <= 0.5) {
        return Err(SplitError::BadFraction(min_fraction));
    }
    if let Some(&bad) = grid.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(SplitError::ThetaOutOfRange(bad));
    }
    let results: Vec<Result<SplitResult, SplitError>> =
        grid.par_iter().map(|&theta| find_hyperplane(ds, theta)).collect();
    let need = min_fraction * ds.len() as f64;
    let admissible = |s: &SplitResult| {
        let (a, b) = s.sizes();
        a.min(b) as f64 >= need
    };

    let mut table = Vec::with_capacity(grid.len());
    for (&theta, r) in grid.iter().zip(&results) {
        table.push(match r {
            Ok(s) => ScanRow {
                theta,
                size1: Some(s.subset1.len()),
                size2: Some(s.subset2.len()),
                a_max_1: Some(s.a_max_1),
                a_min_2: Some(s.a_min_2),
                gap: Some(s.gap()),
                lp_objective: Some(s.lp_objective),
                admissible: admissible(s),
                error: None,
            },
            Err(e) => ScanRow {
                theta,
                size1: None,
                size2: None,
                a_max_1: None,
                a_min_2: None,
                gap: None,
                lp_objective: None,
                admissible: false,
                error: Some(e.to_string()),
            },
        });
    }

    let splits: Vec<&SplitResult> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    if splits.is_empty() {
        let msgs: Vec<String> = table.iter().filter_map(|r| r.error.clone()).collect();
        return Err(SplitError::NoSplit(msgs.join("; ")));
    }
    let by_gap = |a: &&SplitResult, b: &&SplitResult| {
        let (ga, gb) = (a.gap(), b.gap());
        if (ga - gb).abs() <= GAP_TIE_TOL {
            closer_to_half(a.theta, b.theta)
        } else {
            ga.partial_cmp(&gb).unwrap()
        }
    };
    let ok: Vec<&SplitResult> = splits.iter().copied().filter(|s| admissible(s)).collect();
    let (best, warning) = if let Some(best) = ok.into_iter().min_by(by_gap) {
        (best.clone(), None)
    } else {
        let smaller = |s: &SplitResult| s.subset1.len().min(s.subset2.len());
        let best = splits
            .iter()
            .copied()
            .min_by(|a, b| smaller(b).cmp(&smaller(a)).then_with(|| by_gap(a, b)))
            .unwrap();
        let warning = format!(
            "no threshold gives both sides at least {:.0}% of the compounds; using theta = {} with sides {}/{}",
            min_fraction * 100.0,
            best.theta,
            best.subset1.len(),
            best.subset2.len()
        );
        (best.clone(), Some(warning))
    };
    Ok(ScanOutcome { best, table, warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(a: &[f64]) -> DataSet {
        DataSet::new(
            (0..a.len()).map(|i| format!("c{i}")).collect(),
            a.iter().map(|&v| vec![v]).collect(),
            a.to_vec(),
            vec!["x".into()],
        )
        .unwrap()
    }

    #[test]
    fn minimal_instance_shape() {
        let lp = build_split_lp(&line(&[0.0, 1.0]), 0.5).unwrap();
        assert_eq!(lp.num_vars, 4);
        assert_eq!(lp.constraints.len(), 4);
    }

    #[test]
    fn rejects_bad_theta_and_missing_anchor() {
        assert!(matches!(build_split_lp(&line(&[0.0, 1.0]), 1.0), Err(SplitError::ThetaOutOfRange(_))));
        assert!(matches!(build_split_lp(&line(&[0.0, 0.5]), 0.3), Err(SplitError::MissingAnchor(v)) if v == 1.0));
    }

    #[test]
    fn separable_line_splits_exactly() {
        let a = [0.0, 0.2, 0.45, 0.7, 1.0];
        let s = find_hyperplane(&line(&a), 0.5).unwrap();
        assert!(s.lp_objective.abs() < 1e-9);
        assert_eq!(s.subset1, vec![0, 1, 2]);
        assert_eq!(s.subset2, vec![3, 4]);
        assert!(s.a_max_1 <= 0.5 && 0.5 < s.a_min_2);
    }

    #[test]
    fn identical_features_collapse_to_one_side() {
        let ds = DataSet::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0.3]; 3],
            vec![0.0, 0.5, 1.0],
            vec!["x".into()],
        )
        .unwrap();
        assert!(matches!(find_hyperplane(&ds, 0.5), Err(SplitError::DegenerateSplit { side: 2, .. })));
    }

    #[test]
    fn single_point_grid() {
        let out = scan_thresholds(&line(&[0.0, 0.3, 0.6, 1.0]), &[0.5], 0.25).unwrap();
        assert_eq!(out.best.theta, 0.5);
        assert_eq!(out.table.len(), 1);
        assert!(out.warning.is_none());
    }

    #[test]
    fn tie_prefers_theta_near_half_then_smaller() {
        use std::cmp::Ordering;
        assert_eq!(closer_to_half(0.4, 0.6), Ordering::Less);
        assert_eq!(closer_to_half(0.45, 0.3), Ordering::Less);
        // values 0.35 and 0.65 make θ = 0.4 and 0.6 both produce the split {0,0.35}/{0.65,1}
        let out = scan_thresholds(&line(&[0.0, 0.35, 0.65, 1.0]), &[0.6, 0.4], 0.25).unwrap();
        assert_eq!(out.best.theta, 0.4);
    }

    #[test]
    fn scan_input_errors() {
        let ds = line(&[0.0, 1.0]);
        assert!(matches!(scan_thresholds(&ds, &[], 0.25), Err(SplitError::EmptyGrid)));
        assert!(matches!(scan_thresholds(&ds, &[0.5], 0.6), Err(SplitError::BadFraction(_))));
    }

    #[test]
    fn default_grid_values() {
        let g = default_grid();
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[18], 0.95);
        assert_eq!(g[9], 0.5);
    }
}
