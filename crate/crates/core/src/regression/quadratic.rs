//! Quadratic descriptor augmentation, greedy residual-correlation reduction
//! and the RLR learner built from them.

use crate::dataset::DataSet;
use crate::linalg;

use super::{Descriptor, Hyperplane, LinearModel, Method, RegressionError};

pub const DEFAULT_COLUMN_CAP: usize = 200_000;
/// Forward selection stops once no candidate correlates this much with the residual.
const MIN_RESIDUAL_CORRELATION: f64 = 0.01;
/// Candidates this correlated with an already selected column are skipped.
const MAX_PAIRWISE_CORRELATION: f64 = 0.95;

/// Number of quadratic columns appended for `k` linear descriptors.
pub fn quadratic_count(k: usize) -> usize {
    (3 * k * k + k) / 2
}

/// Linear descriptors followed by every `PROD(i ≤ j)` and then every
/// ordered `PROD_COMPL(i, j)`.
pub fn quadratic_descriptors(k: usize) -> Vec<Descriptor> {
    let mut out: Vec<Descriptor> = (0..k).map(Descriptor::Linear).collect();
    out.reserve(quadratic_count(k));
    for i in 0..k {
        for j in i..k {
            out.push(Descriptor::Prod(i, j));
        }
    }
    for i in 0..k {
        for j in 0..k {
            out.push(Descriptor::ProdCompl(i, j));
        }
    }
    out
}

pub fn augment_quadratic(ds: &DataSet) -> Result<DataSet, RegressionError> {
    augment_quadratic_capped(ds, DEFAULT_COLUMN_CAP)
}

/// Appends the quadratic columns, refusing when more than `cap` would be added.
pub fn augment_quadratic_capped(ds: &DataSet, cap: usize) -> Result<DataSet, RegressionError> {
    let k = ds.num_descriptors();
    if k == 0 {
        return Err(RegressionError::Other("no linear descriptors to augment".into()));
    }
    let count = quadratic_count(k);
    if count > cap {
        return Err(RegressionError::TooManyColumns { count, cap });
    }
    let tags = quadratic_descriptors(k);
    let features = ds
        .features
        .iter()
        .map(|x| tags.iter().map(|t| t.value(x)).collect())
        .collect();
    let descriptor_names = tags.iter().map(|t| t.label(&ds.descriptor_names)).collect();
    Ok(DataSet { features, descriptor_names, ..ds.clone() })
}

struct Column {
    centered: Vec<f64>,
    norm: f64,
}

fn centered(v: &[f64]) -> Column {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let centered: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();
    Column { centered, norm }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn is_constant(col: &Column, scale: f64) -> bool {
    col.norm <= 1e-12 * scale.max(1.0)
}

/// Greedy forward selection of at most `budget` column indices of `ds`.
///
/// Each step takes the column with the largest absolute correlation to the
/// current MLR residual (lowest index on ties) and refits.
pub fn reduce_descriptors(ds: &DataSet, budget: usize) -> Result<Vec<usize>, RegressionError> {
    if budget == 0 {
        return Err(RegressionError::ZeroBudget);
    }
    if ds.is_empty() {
        return Err(RegressionError::Empty);
    }
    let k = ds.num_descriptors();
    let n = ds.len();
    let cols: Vec<Column> = (0..k).map(|j| centered(&ds.column(j))).collect();
    let scale = (n as f64).sqrt();
    if budget >= k {
        return Ok((0..k).filter(|&j| !is_constant(&cols[j], scale)).collect());
    }

    let mut selected: Vec<usize> = Vec::new();
    let mut available = vec![true; k];
    for (j, c) in cols.iter().enumerate() {
        if is_constant(c, scale) {
            available[j] = false;
        }
    }
    let mut residual = centered(&ds.targets);
    while selected.len() < budget {
        if residual.norm <= 1e-12 * scale {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..k {
            if !available[j] {
                continue;
            }
            let corr = (dot(&cols[j].centered, &residual.centered) / (cols[j].norm * residual.norm)).abs();
            if best.map_or(true, |(_, c)| corr > c) {
                best = Some((j, corr));
            }
        }
        let Some((j, corr)) = best else { break };
        if corr < MIN_RESIDUAL_CORRELATION {
            break;
        }
        selected.push(j);
        available[j] = false;
        for (other, avail) in available.iter_mut().enumerate() {
            if *avail {
                let pc = dot(&cols[j].centered, &cols[other].centered) / (cols[j].norm * cols[other].norm);
                if pc.abs() > MAX_PAIRWISE_CORRELATION {
                    *avail = false;
                }
            }
        }
        let sub: Vec<Vec<f64>> = ds.features.iter().map(|r| selected.iter().map(|&s| r[s]).collect()).collect();
        let (w, b) = linalg::least_squares(&sub, &ds.targets)?;
        let resid: Vec<f64> = sub
            .iter()
            .zip(&ds.targets)
            .map(|(x, a)| a - dot(x, &w) - b)
            .collect();
        residual = centered(&resid);
    }
    Ok(selected)
}

fn training_sse(rows: &[Vec<f64>], targets: &[f64], w: &[f64], b: f64) -> f64 {
    rows.iter().zip(targets).map(|(x, a)| (a - dot(x, w) - b).powi(2)).sum()
}

/// Quadratic augmentation, reduction to `budget` columns, then MLR on them.
///
/// When the budget covers every linear descriptor and the linear set fits the
/// training data better than the greedy selection, the linear set is used.
pub fn fit_rlr(ds: &DataSet, budget: usize) -> Result<LinearModel, RegressionError> {
    if budget == 0 {
        return Err(RegressionError::ZeroBudget);
    }
    let aug = augment_quadratic(ds)?;
    let tags = quadratic_descriptors(ds.num_descriptors());
    let fit_on = |cols: &[usize]| -> Result<(Vec<f64>, f64, f64), RegressionError> {
        let sub: Vec<Vec<f64>> = aug.features.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        let (w, b) = linalg::least_squares(&sub, &aug.targets)?;
        let sse = training_sse(&sub, &aug.targets, &w, b);
        Ok((w, b, sse))
    };
    let mut chosen = reduce_descriptors(&aug, budget)?;
    let (mut w, mut b, sse) = fit_on(&chosen)?;
    if budget >= ds.num_descriptors() {
        let linear: Vec<usize> = (0..ds.num_descriptors()).collect();
        let (wl, bl, sse_l) = fit_on(&linear)?;
        if sse_l < sse {
            chosen = linear;
            (w, b) = (wl, bl);
        }
    }
    Ok(LinearModel {
        method: Method::Rlr,
        descriptors: chosen.iter().map(|&c| tags[c]).collect(),
        hyperplane: Hyperplane::new(w, b),
        input_dim: ds.num_descriptors(),
        lambda: None,
        budget: Some(budget),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::{predict, Descriptor};

    fn ds(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> DataSet {
        let k = rows[0].len();
        DataSet::new(
            (0..rows.len()).map(|i| format!("c{i}")).collect(),
            rows,
            targets,
            (0..k).map(|j| format!("d{j}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(quadratic_count(1), 2);
        assert_eq!(quadratic_count(2), 7);
        assert_eq!(quadratic_count(216), 70092);
        for k in 1..=50 {
            assert_eq!(quadratic_descriptors(k).len() - k, quadratic_count(k));
        }
    }

    #[test]
    fn single_descriptor_augmentation() {
        let data = ds(vec![vec![0.5], vec![1.0]], vec![0.0, 1.0]);
        let aug = augment_quadratic(&data).unwrap();
        assert_eq!(aug.num_descriptors(), 3);
        assert_eq!(aug.features[0], vec![0.5, 0.25, 0.25]);
        assert_eq!(aug.descriptor_names, vec!["d0", "d0*d0", "d0*(1-d0)"]);
    }

    #[test]
    fn cap_is_enforced() {
        let data = ds(vec![vec![0.0; 3], vec![1.0; 3]], vec![0.0, 1.0]);
        assert_eq!(
            augment_quadratic_capped(&data, 10),
            Err(RegressionError::TooManyColumns { count: 15, cap: 10 })
        );
    }

    #[test]
    fn large_budget_returns_non_constant_columns() {
        let data = ds(
            vec![vec![0.1, 0.5, 0.0], vec![0.2, 0.5, 1.0], vec![0.9, 0.5, 0.3]],
            vec![0.0, 1.0, 0.5],
        );
        assert_eq!(reduce_descriptors(&data, 3).unwrap(), vec![0, 2]);
    }

    #[test]
    fn exact_column_selected_first() {
        let rows: Vec<Vec<f64>> = (0..8)
            .map(|i| {
                let t = i as f64 / 7.0;
                vec![(t * 3.1).sin().abs(), t * t, 1.0 - t, (t * 5.0).cos().abs(), t]
            })
            .collect();
        let targets: Vec<f64> = rows.iter().map(|r| r[3]).collect();
        let chosen = reduce_descriptors(&ds(rows, targets), 2).unwrap();
        assert_eq!(chosen[0], 3);
    }

    #[test]
    fn product_target_recovered_with_one_column() {
        let rows: Vec<Vec<f64>> = (0..5)
            .flat_map(|i| (0..5).map(move |j| vec![i as f64 / 4.0, j as f64 / 4.0]))
            .collect();
        let targets: Vec<f64> = rows.iter().map(|r| r[0] * r[1]).collect();
        let model = fit_rlr(&ds(rows.clone(), targets.clone()), 1).unwrap();
        assert_eq!(model.descriptors, vec![Descriptor::Prod(0, 1)]);
        for (x, a) in rows.iter().zip(&targets) {
            assert!((predict(&model, x).unwrap() - a).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_budget_rejected() {
        let data = ds(vec![vec![0.0], vec![1.0]], vec![0.0, 1.0]);
        assert_eq!(fit_rlr(&data, 0), Err(RegressionError::ZeroBudget));
    }
}
