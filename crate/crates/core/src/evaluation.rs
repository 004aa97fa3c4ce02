//! Coefficient of determination, seeded k-fold partitions, repeated
//! cross-validation with median aggregation and Table-style reports.
//!
//! Partitions are drawn with [`PortableRng`] (ChaCha8, 8 rounds, seeded from a
//! `u64` with one stream per run), so a seed reproduces the same folds on
//! every platform. The median of an even number of scores is the lower of the
//! two middle values.

use std::fmt::Write as _;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::{normalize, DataSet};
use crate::regression::{self, Hyperplane, MethodSpec};
use crate::rng::PortableRng;
use crate::splitter::{self, side_of, SplitResult};

pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_RUNS: usize = 10;
/// Below this many compounds automatic method selection falls back to MLR.
const AUTO_MIN_COMPOUNDS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("R² is undefined: all observed values are identical")]
    UndefinedR2,
    #[error("{predictions} predictions for {targets} observed values")]
    LengthMismatch { predictions: usize, targets: usize },
    #[error("no observed values to score")]
    Empty,
    #[error("cannot make {k} folds from {n} compounds")]
    TooManyFolds { n: usize, k: usize },
    #[error("cross-validation needs at least {needed} compounds for {k} folds, got {n}")]
    TooFewCompounds { n: usize, k: usize, needed: usize },
    #[error("fold count and run count must be positive")]
    ZeroCount,
    #[error("every fold failed; first failure: {0}")]
    AllFoldsFailed(String),
    #[error("external scores: {0}")]
    External(String),
}

/// `1 − Σ(a − η)² / Σ(a − ā)²`.
pub fn r_squared(predictions: &[f64], targets: &[f64]) -> Result<f64, EvalError> {
    if predictions.len() != targets.len() {
        return Err(EvalError::LengthMismatch { predictions: predictions.len(), targets: targets.len() });
    }
    if targets.is_empty() {
        return Err(EvalError::Empty);
    }
    let mean = targets.iter().sum::<f64>() / targets.len() as f64;
    let sst: f64 = targets.iter().map(|a| (a - mean).powi(2)).sum();
    if sst == 0.0 {
        return Err(EvalError::UndefinedR2);
    }
    let sse: f64 = predictions.iter().zip(targets).map(|(p, a)| (a - p).powi(2)).sum();
    Ok(1.0 - sse / sst)
}

/// Random partition of `0..n` into `k` blocks whose sizes differ by at most one.
pub fn kfold_partition(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    kfold_partition_run(n, k, seed, 0)
}

/// [`kfold_partition`] drawn from stream `run` of the seed.
pub fn kfold_partition_run(n: usize, k: usize, seed: u64, run: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroCount);
    }
    if k > n {
        return Err(EvalError::TooManyFolds { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    PortableRng::new(seed, run).shuffle(&mut order);
    let (base, extra) = (n / k, n % k);
    let mut blocks = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        blocks.push(order[start..start + len].to_vec());
        start += len;
    }
    Ok(blocks)
}

/// Lower middle element of the sorted values; `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(v[(v.len() - 1) / 2])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum FoldOutcome {
    Score(f64),
    /// The test fold's observed values are all identical.
    Undefined,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldScore {
    pub run: usize,
    pub fold: usize,
    pub outcome: FoldOutcome,
}

/// Test scores of every fold of every run, with their median.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub method: String,
    pub runs: usize,
    pub folds: usize,
    pub seed: u64,
    /// Exactly `runs · folds` entries, run-major.
    pub scores: Vec<FoldScore>,
    /// Median over the defined scores (lower middle for an even count).
    pub median: Option<f64>,
    pub undefined: usize,
    pub failed: usize,
}

impl CvReport {
    fn assemble(method: String, runs: usize, folds: usize, seed: u64, scores: Vec<FoldScore>) -> Self {
        let defined: Vec<f64> = scores
            .iter()
            .filter_map(|s| match s.outcome {
                FoldOutcome::Score(v) => Some(v),
                _ => None,
            })
            .collect();
        let undefined = scores.iter().filter(|s| s.outcome == FoldOutcome::Undefined).count();
        let failed = scores.iter().filter(|s| matches!(s.outcome, FoldOutcome::Failed(_))).count();
        CvReport { method, runs, folds, seed, median: median(&defined), scores, undefined, failed }
    }

    pub fn defined_scores(&self) -> Vec<f64> {
        self.scores
            .iter()
            .filter_map(|s| match s.outcome {
                FoldOutcome::Score(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    fn first_failure(&self) -> Option<String> {
        self.scores.iter().find_map(|s| match &s.outcome {
            FoldOutcome::Failed(m) => Some(m.clone()),
            _ => None,
        })
    }

    /// One line per fold: `run,fold,status,score,detail`.
    pub fn write_csv(&self, w: impl Write) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["run", "fold", "status", "score", "detail"])?;
        for s in &self.scores {
            let (status, score, detail) = match &s.outcome {
                FoldOutcome::Score(v) => ("score", v.to_string(), String::new()),
                FoldOutcome::Undefined => ("undefined", String::new(), String::new()),
                FoldOutcome::Failed(m) => ("failed", String::new(), m.clone()),
            };
            out.write_record([&(s.run + 1).to_string(), &(s.fold + 1).to_string(), status, &score, &detail])?;
        }
        out.flush()
    }

    pub fn summary(&self) -> String {
        let med = self.median.map_or("undefined".to_string(), |m| format!("{m:.6}"));
        format!(
            "{}: median test R^2 {} over {} runs x {} folds (median of an even count is the lower middle; {} undefined, {} failed)",
            self.method, med, self.runs, self.folds, self.undefined, self.failed
        )
    }
}

fn check_cv_args(n: usize, k: usize, runs: usize) -> Result<(), EvalError> {
    if k == 0 || runs == 0 {
        return Err(EvalError::ZeroCount);
    }
    if n < 2 * k {
        return Err(EvalError::TooFewCompounds { n, k, needed: 2 * k });
    }
    Ok(())
}

fn complement(n: usize, test: &[usize]) -> Vec<usize> {
    let mut in_test = vec![false; n];
    test.iter().for_each(|&i| in_test[i] = true);
    (0..n).filter(|&i| !in_test[i]).collect()
}

fn score(pred: &[f64], targets: &[f64]) -> FoldOutcome {
    match r_squared(pred, targets) {
        Ok(v) => FoldOutcome::Score(v),
        Err(EvalError::UndefinedR2) => FoldOutcome::Undefined,
        Err(e) => FoldOutcome::Failed(e.to_string()),
    }
}

/// Fits on the training rows (renormalized on their own ranges) and scores
/// R² on the test rows in the scale of `ds`.
fn run_fold(ds: &DataSet, train: &[usize], test: &[usize], spec: &MethodSpec, seed: u64) -> FoldOutcome {
    let tr = ds.subset(train);
    let (tr_norm, rec) = match normalize(&tr) {
        Ok(v) => v,
        Err(e) => return FoldOutcome::Failed(e.to_string()),
    };
    if rec.target_is_degenerate() {
        return FoldOutcome::Failed("training fold has constant observed values".into());
    }
    let model = match regression::fit(&tr_norm, spec, seed) {
        Ok(m) => m,
        Err(e) => return FoldOutcome::Failed(e.to_string()),
    };
    let mut pred = Vec::with_capacity(test.len());
    for &i in test {
        let x = rec.normalize_features(&ds.features[i]);
        match regression::predict(&model, &x) {
            Ok(y) => pred.push(rec.target_min + y * (rec.target_max - rec.target_min)),
            Err(e) => return FoldOutcome::Failed(e.to_string()),
        }
    }
    let targets: Vec<f64> = test.iter().map(|&i| ds.targets[i]).collect();
    score(&pred, &targets)
}

/// `runs` repetitions of `k`-fold cross-validation, each with a fresh
/// partition from stream `run` of `seed`.
pub fn cross_validate(
    ds: &DataSet,
    spec: &MethodSpec,
    k: usize,
    runs: usize,
    seed: u64,
) -> Result<CvReport, EvalError> {
    check_cv_args(ds.len(), k, runs)?;
    let partitions: Vec<Vec<Vec<usize>>> = (0..runs)
        .map(|r| kfold_partition_run(ds.len(), k, seed, r as u64))
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, usize)> = (0..runs).flat_map(|r| (0..k).map(move |f| (r, f))).collect();
    let scores: Vec<FoldScore> = jobs
        .par_iter()
        .map(|&(r, f)| {
            let test = &partitions[r][f];
            let train = complement(ds.len(), test);
            FoldScore { run: r, fold: f, outcome: run_fold(ds, &train, test, spec, seed) }
        })
        .collect();
    let report = CvReport::assemble(spec.label(), runs, k, seed, scores);
    if report.failed == report.scores.len() {
        return Err(EvalError::AllFoldsFailed(report.first_failure().unwrap_or_default()));
    }
    Ok(report)
}

/// Picks the learner with the best median R² in one run of 5-fold
/// cross-validation; ties go to the earlier candidate. Small sets use MLR.
pub fn select_method(ds: &DataSet, seed: u64) -> Result<MethodSpec, EvalError> {
    if ds.len() < AUTO_MIN_COMPOUNDS {
        return Ok(MethodSpec::Mlr);
    }
    let mut best: Option<(MethodSpec, f64)> = None;
    for spec in MethodSpec::candidates() {
        let Ok(report) = cross_validate(ds, &spec, DEFAULT_FOLDS, 1, seed) else { continue };
        let Some(m) = report.median else { continue };
        if best.map_or(true, |(_, b)| m > b) {
            best = Some((spec, m));
        }
    }
    Ok(best.map_or(MethodSpec::Mlr, |(s, _)| s))
}

/// Cross-validation of the two-piece predictor with the hyperplane fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HpsCvReport {
    /// Scores of the combined predictor on the global normalized scale.
    pub combined: CvReport,
    /// Scores of each side's sub-model on that side's renormalized scale.
    pub sides: [CvReport; 2],
}

/// Repeated k-fold cross-validation of the two-piece predictor.
///
/// The hyperplane and threshold of `split` stay fixed; each training fold is
/// divided by it and both sub-models are refit. `ds` must be the globally
/// normalized set `split` was computed on.
pub fn evaluate_hps_cv(
    ds: &DataSet,
    split: &SplitResult,
    methods: [MethodSpec; 2],
    k: usize,
    runs: usize,
    seed: u64,
) -> Result<HpsCvReport, EvalError> {
    check_cv_args(ds.len(), k, runs)?;
    let n = ds.len();
    let side: Vec<usize> = ds.features.iter().map(|x| side_of(&split.hyperplane, x)).collect();
    let partitions: Vec<Vec<Vec<usize>>> = (0..runs)
        .map(|r| kfold_partition_run(n, k, seed, r as u64))
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, usize)> = (0..runs).flat_map(|r| (0..k).map(move |f| (r, f))).collect();
    let rec = crate::dataset::NormalizationRecord::identity(ds.num_descriptors());
    let results: Vec<[FoldOutcome; 3]> = jobs
        .par_iter()
        .map(|&(r, f)| {
            let test = &partitions[r][f];
            let train = complement(n, test);
            hps_fold(ds, &side, &train, test, &split.hyperplane, split.theta, methods, &rec, seed)
        })
        .collect();
    let mut lists: [Vec<FoldScore>; 3] = Default::default();
    for (&(run, fold), outcomes) in jobs.iter().zip(results) {
        for (list, outcome) in lists.iter_mut().zip(outcomes) {
            list.push(FoldScore { run, fold, outcome });
        }
    }
    let [c, s1, s2] = lists;
    let label = format!("HPS({} / {})", methods[0].label(), methods[1].label());
    let combined = CvReport::assemble(label, runs, k, seed, c);
    if combined.failed == combined.scores.len() {
        return Err(EvalError::AllFoldsFailed(combined.first_failure().unwrap_or_default()));
    }
    Ok(HpsCvReport {
        combined,
        sides: [
            CvReport::assemble(format!("side 1 {}", methods[0].label()), runs, k, seed, s1),
            CvReport::assemble(format!("side 2 {}", methods[1].label()), runs, k, seed, s2),
        ],
    })
}

#[allow(clippy::too_many_arguments)]
fn hps_fold(
    ds: &DataSet,
    side: &[usize],
    train: &[usize],
    test: &[usize],
    hyperplane: &Hyperplane,
    theta: f64,
    methods: [MethodSpec; 2],
    rec: &crate::dataset::NormalizationRecord,
    seed: u64,
) -> [FoldOutcome; 3] {
    let by_side = |idx: &[usize], s: usize| -> Vec<usize> { idx.iter().copied().filter(|&i| side[i] == s).collect() };
    let (tr1, tr2) = (by_side(train, 0), by_side(train, 1));
    let model = match splitter::fit_sides(ds, [&tr1, &tr2], theta, hyperplane, methods, rec, seed) {
        Ok(m) => m,
        Err(e) => {
            let msg = format!("fold skipped: {e}");
            return [FoldOutcome::Failed(msg.clone()), FoldOutcome::Failed(msg.clone()), FoldOutcome::Failed(msg)];
        }
    };
    let mut pred = Vec::with_capacity(test.len());
    for &i in test {
        match splitter::predict_hps(&model, &ds.features[i]) {
            Ok(y) => pred.push(y),
            Err(e) => {
                let msg = e.to_string();
                return [FoldOutcome::Failed(msg.clone()), FoldOutcome::Failed(msg.clone()), FoldOutcome::Failed(msg)];
            }
        }
    }
    let targets: Vec<f64> = test.iter().map(|&i| ds.targets[i]).collect();
    let combined = score(&pred, &targets);
    let side_score = |s: usize| -> FoldOutcome {
        let (lo, hi) = model.sub_ranges[s];
        let idx = by_side(test, s);
        if idx.is_empty() {
            return FoldOutcome::Undefined;
        }
        let mut p = Vec::with_capacity(idx.len());
        let mut t = Vec::with_capacity(idx.len());
        for &i in &idx {
            match regression::predict(&model.sub_models[s], &ds.features[i]) {
                Ok(y) => p.push(y),
                Err(e) => return FoldOutcome::Failed(e.to_string()),
            }
            t.push(if hi > lo { (ds.targets[i] - lo) / (hi - lo) } else { 0.0 });
        }
        score(&p, &t)
    };
    [combined, side_score(0), side_score(1)]
}

/// Reads fold scores of an external predictor from CSV columns
/// `run,fold,score` (1-based run and fold; an empty score is undefined).
pub fn load_external_scores(method: &str, reader: impl Read, seed: u64) -> Result<CvReport, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| EvalError::External(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| EvalError::External(format!("missing column {name:?}")))
    };
    let (rc, fc, sc) = (col("run")?, col("fold")?, col("score")?);
    let mut scores = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| EvalError::External(e.to_string()))?;
        let int = |j: usize| -> Result<usize, EvalError> {
            match rec.get(j).unwrap_or("").parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(EvalError::External(format!("row {}: bad run/fold index", line + 2))),
            }
        };
        let text = rec.get(sc).unwrap_or("");
        let outcome = if text.is_empty() {
            FoldOutcome::Undefined
        } else {
            FoldOutcome::Score(text.parse().map_err(|_| {
                EvalError::External(format!("row {}: score {text:?} is not a number", line + 2))
            })?)
        };
        scores.push(FoldScore { run: int(rc)?, fold: int(fc)?, outcome });
    }
    if scores.is_empty() {
        return Err(EvalError::External("no scores".into()));
    }
    scores.sort_by_key(|s| (s.run, s.fold));
    let runs = scores.iter().map(|s| s.run).max().unwrap() + 1;
    let folds = scores.iter().map(|s| s.fold).max().unwrap() + 1;
    if scores.len() != runs * folds {
        return Err(EvalError::External(format!(
            "{} scores do not cover {runs} runs x {folds} folds exactly",
            scores.len()
        )));
    }
    Ok(CvReport::assemble(method.to_string(), runs, folds, seed, scores))
}

/// One row of a comparison report: medians per single-set learner and the
/// split statistics with per-side results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub property: String,
    pub method_medians: Vec<(String, Option<f64>)>,
    pub hps_median: Option<f64>,
    pub theta: f64,
    pub a_max_1: f64,
    pub a_min_2: f64,
    pub size1: usize,
    pub size2: usize,
    pub side_methods: [String; 2],
    pub side_medians: [Option<f64>; 2],
}

impl ComparisonRow {
    pub fn new(
        property: &str,
        singles: &[CvReport],
        hps: &HpsCvReport,
        split: &SplitResult,
        methods: [MethodSpec; 2],
    ) -> Self {
        ComparisonRow {
            property: property.to_string(),
            method_medians: singles.iter().map(|r| (r.method.clone(), r.median)).collect(),
            hps_median: hps.combined.median,
            theta: split.theta,
            a_max_1: split.a_max_1,
            a_min_2: split.a_min_2,
            size1: split.subset1.len(),
            size2: split.subset2.len(),
            side_methods: methods.map(|m| m.label()),
            side_medians: [hps.sides[0].median, hps.sides[1].median],
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("-".to_string(), |x| format!("{x:.3}"))
}

/// Comparison rows as CSV. Method columns come from the first row.
pub fn write_comparison_csv(rows: &[ComparisonRow], w: impl Write) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["property".to_string()];
    if let Some(first) = rows.first() {
        header.extend(first.method_medians.iter().map(|(m, _)| m.clone()));
    }
    header.extend(
        ["HPS", "theta", "a_max_1", "a_min_2", "size_1", "size_2", "method_1", "R2_1", "method_2", "R2_2"]
            .map(String::from),
    );
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.property.clone()];
        rec.extend(r.method_medians.iter().map(|(_, v)| v.map_or(String::new(), |x| x.to_string())));
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        rec.extend([
            opt(r.hps_median),
            r.theta.to_string(),
            r.a_max_1.to_string(),
            r.a_min_2.to_string(),
            r.size1.to_string(),
            r.size2.to_string(),
            r.side_methods[0].clone(),
            opt(r.side_medians[0]),
            r.side_methods[1].clone(),
            opt(r.side_medians[1]),
        ]);
        out.write_record(&rec)?;
    }
    out.flush()
}

/// Comparison rows as an aligned text table.
pub fn format_comparison_table(rows: &[ComparisonRow]) -> String {
    let mut header: Vec<String> = vec!["property".into()];
    if let Some(first) = rows.first() {
        header.extend(first.method_medians.iter().map(|(m, _)| m.clone()));
    }
    header.extend(["HPS", "theta", "a_max1,a_min2", "|C1|,|C2|", "side 1", "side 2"].map(String::from));
    let mut cells: Vec<Vec<String>> = vec![header];
    for r in rows {
        let mut line = vec![r.property.clone()];
        line.extend(r.method_medians.iter().map(|(_, v)| fmt_opt(*v)));
        line.extend([
            fmt_opt(r.hps_median),
            format!("{:.2}", r.theta),
            format!("{:.3},{:.3}", r.a_max_1, r.a_min_2),
            format!("{},{}", r.size1, r.size2),
            format!("{} {}", r.side_methods[0], fmt_opt(r.side_medians[0])),
            format!("{} {}", r.side_methods[1], fmt_opt(r.side_medians[1])),
        ]);
        cells.push(line);
    }
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out.push_str("medians of test R^2; an even count uses the lower middle value\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r2_examples() {
        assert_eq!(r_squared(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(r_squared(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(r_squared(&[0.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).unwrap(), 0.5);
        assert_eq!(r_squared(&[1.0, 2.0], &[3.0, 3.0]), Err(EvalError::UndefinedR2));
        assert!(matches!(r_squared(&[1.0], &[1.0, 2.0]), Err(EvalError::LengthMismatch { .. })));
    }

    #[test]
    fn partition_sizes() {
        let p = kfold_partition(10, 5, 7).unwrap();
        assert!(p.iter().all(|b| b.len() == 2));
        let mut sizes: Vec<usize> = kfold_partition(11, 5, 7).unwrap().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 2, 3]);
        assert_eq!(kfold_partition(11, 5, 7).unwrap(), kfold_partition(11, 5, 7).unwrap());
        assert_ne!(kfold_partition_run(50, 5, 7, 0).unwrap(), kfold_partition_run(50, 5, 7, 1).unwrap());
        assert!(matches!(kfold_partition(3, 4, 0), Err(EvalError::TooManyFolds { n: 3, k: 4 })));
    }

    #[test]
    fn median_is_lower_middle() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.0));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn external_scores() {
        let text = "run,fold,score\n1,1,0.5\n1,2,\n2,1,0.7\n2,2,0.6\n";
        let r = load_external_scores("ANN", text.as_bytes(), 0).unwrap();
        assert_eq!((r.runs, r.folds, r.undefined), (2, 2, 1));
        assert_eq!(r.median, Some(0.6));
        assert!(load_external_scores("ANN", "run,fold,score\n1,1,0.5\n2,2,0.1\n".as_bytes(), 0).is_err());
    }
}
