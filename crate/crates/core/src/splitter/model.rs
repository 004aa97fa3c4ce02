//! The two-piece predictor: per-side training with target renormalization,
//! prediction, phase-2 side constraints and the JSON model file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{denormalize_target, DataSet, NormalizationRecord};
use crate::lp::Relation;
use crate::regression::{self, Descriptor, Hyperplane, LinearModel, Method, MethodSpec};

use super::{side_of, SplitError, SplitResult};

pub const MODEL_VERSION: u32 = 1;
const RANGE_TOL: f64 = 1e-12;

/// Hyperplane, one sub-model per side and the scales needed to invert them.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitModel {
    pub theta: f64,
    pub hyperplane: Hyperplane,
    pub sub_models: [LinearModel; 2],
    /// Per-side `(a_min, a_max)` on the global normalized target scale.
    pub sub_ranges: [(f64, f64); 2],
    pub normalization: NormalizationRecord,
    /// Notes produced during training, such as constant-side fallbacks.
    pub warnings: Vec<String>,
}

impl SplitModel {
    pub fn input_dim(&self) -> usize {
        self.hyperplane.w.len()
    }
}

/// Fits one sub-model per side on targets rescaled to the side's own range.
///
/// `sides` holds row indices of `ds`; `ds` is on the global normalized scale.
pub fn fit_sides(
    ds: &DataSet,
    sides: [&[usize]; 2],
    theta: f64,
    hyperplane: &Hyperplane,
    methods: [MethodSpec; 2],
    normalization: &NormalizationRecord,
    seed: u64,
) -> Result<SplitModel, SplitError> {
    let k = ds.num_descriptors();
    let mut warnings = Vec::new();
    let mut fitted = Vec::with_capacity(2);
    let mut ranges = [(0.0, 0.0); 2];
    for (j, idx) in sides.iter().enumerate() {
        if idx.len() < 2 {
            return Err(SplitError::SubsetTooSmall { side: j + 1, size: idx.len() });
        }
        let sub = ds.subset(idx);
        let lo = sub.targets.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = sub.targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ranges[j] = (lo, hi);
        if hi <= lo {
            warnings.push(format!(
                "side {} has constant observed value {lo}; using a constant sub-model",
                j + 1
            ));
            fitted.push(LinearModel::constant(0.0, k));
            continue;
        }
        let rescaled = sub.with_targets(sub.targets.iter().map(|a| (a - lo) / (hi - lo)).collect());
        let model = regression::fit(&rescaled, &methods[j], seed)
            .map_err(|source| SplitError::SideFit { side: j + 1, source })?;
        fitted.push(model);
    }
    let second = fitted.pop().unwrap();
    let first = fitted.pop().unwrap();
    Ok(SplitModel {
        theta,
        hyperplane: hyperplane.clone(),
        sub_models: [first, second],
        sub_ranges: ranges,
        normalization: normalization.clone(),
        warnings,
    })
}

/// Trains both sides of `split` with the requested methods.
pub fn train_hps(
    ds: &DataSet,
    split: &SplitResult,
    methods: [MethodSpec; 2],
    normalization: &NormalizationRecord,
    seed: u64,
) -> Result<SplitModel, SplitError> {
    fit_sides(
        ds,
        [&split.subset1, &split.subset2],
        split.theta,
        &split.hyperplane,
        methods,
        normalization,
        seed,
    )
}

/// Prediction on the global normalized target scale for a globally
/// normalized feature vector.
pub fn predict_hps(model: &SplitModel, x: &[f64]) -> Result<f64, SplitError> {
    if x.len() != model.input_dim() {
        return Err(SplitError::DimensionMismatch { expected: model.input_dim(), got: x.len() });
    }
    let side = side_of(&model.hyperplane, x);
    let y = regression::predict(&model.sub_models[side], x)?;
    let (lo, hi) = model.sub_ranges[side];
    Ok(lo + y * (hi - lo))
}

/// Prediction in original units for a raw descriptor vector.
pub fn predict_original(model: &SplitModel, raw: &[f64]) -> Result<f64, SplitError> {
    if raw.len() != model.input_dim() {
        return Err(SplitError::DimensionMismatch { expected: model.input_dim(), got: raw.len() });
    }
    let x = model.normalization.normalize_features(raw);
    let v = predict_hps(model, &x)?;
    Ok(denormalize_target(v, &model.normalization)?)
}

/// Which side an inverse search should be restricted to, as the linear
/// constraint `w·x − b ≤ 0` (side 1) or `w·x − b ≥ 0` (side 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase2Constraint {
    pub side: usize,
    pub relation: Relation,
    pub w: Vec<f64>,
    pub b: f64,
    /// Target interval on the global normalized scale.
    pub interval: [f64; 2],
}

/// Chooses the side(s) whose sub-model should be inverted for a target
/// interval `[y_lo, y_hi]` given in original units.
///
/// Returns one record when the interval fits a side and two otherwise.
pub fn emit_phase2_constraint(
    model: &SplitModel,
    y_lo: f64,
    y_hi: f64,
) -> Result<Vec<Phase2Constraint>, SplitError> {
    if !(y_lo <= y_hi) {
        return Err(SplitError::EmptyInterval { lo: y_lo, hi: y_hi });
    }
    let lo = model.normalization.normalize_raw_target(y_lo)?;
    let hi = model.normalization.normalize_raw_target(y_hi)?;
    if !(lo <= hi) {
        return Err(SplitError::EmptyInterval { lo, hi });
    }
    let upper1 = model.sub_ranges[0].1.max(model.theta);
    let lower2 = model.sub_ranges[1].0.min(model.theta);
    let record = |side: usize, interval: [f64; 2]| Phase2Constraint {
        side,
        relation: if side == 1 { Relation::Le } else { Relation::Ge },
        w: model.hyperplane.w.clone(),
        b: model.hyperplane.b,
        interval,
    };
    Ok(if hi <= upper1 {
        vec![record(1, [lo, hi])]
    } else if lower2 <= lo {
        vec![record(2, [lo, hi])]
    } else {
        vec![record(1, [lo, upper1]), record(2, [lower2, hi])]
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubModelFile {
    pub method: Method,
    pub descriptor_subset: Vec<Descriptor>,
    pub w: Vec<f64>,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

/// On-disk form of a [`SplitModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    pub theta: f64,
    pub hyperplane: Hyperplane,
    pub sub_models: Vec<SubModelFile>,
    pub sub_ranges: [[f64; 2]; 2],
    pub normalization: NormalizationRecord,
}

impl From<&SplitModel> for ModelFile {
    fn from(m: &SplitModel) -> Self {
        ModelFile {
            version: MODEL_VERSION,
            theta: m.theta,
            hyperplane: m.hyperplane.clone(),
            sub_models: m
                .sub_models
                .iter()
                .map(|s| SubModelFile {
                    method: s.method,
                    descriptor_subset: s.descriptors.clone(),
                    w: s.hyperplane.w.clone(),
                    b: s.hyperplane.b,
                    lambda: s.lambda,
                    budget: s.budget,
                })
                .collect(),
            sub_ranges: m.sub_ranges.map(|(lo, hi)| [lo, hi]),
            normalization: m.normalization.clone(),
        }
    }
}

impl TryFrom<ModelFile> for SplitModel {
    type Error = SplitError;

    fn try_from(f: ModelFile) -> Result<Self, SplitError> {
        let bad = |m: String| Err(SplitError::InvalidModel(m));
        if f.version != MODEL_VERSION {
            return bad(format!("unsupported version {} (expected {MODEL_VERSION})", f.version));
        }
        if !(f.theta > 0.0 && f.theta < 1.0) {
            return bad(format!("theta {} outside (0, 1)", f.theta));
        }
        let k = f.hyperplane.w.len();
        let norm = &f.normalization;
        if norm.feature_mins.len() != k || norm.feature_maxs.len() != k {
            return bad(format!(
                "hyperplane has {k} weights but normalization covers {}/{} descriptors",
                norm.feature_mins.len(),
                norm.feature_maxs.len()
            ));
        }
        if f.sub_models.len() != 2 {
            return bad(format!("expected 2 sub-models, found {}", f.sub_models.len()));
        }
        for (j, [lo, hi]) in f.sub_ranges.iter().enumerate() {
            if !(*lo >= -RANGE_TOL && lo <= hi && *hi <= 1.0 + RANGE_TOL) {
                return bad(format!("sub-range {} = [{lo}, {hi}] is not inside [0, 1]", j + 1));
            }
        }
        let mut subs = Vec::with_capacity(2);
        for (j, s) in f.sub_models.into_iter().enumerate() {
            let model = LinearModel {
                method: s.method,
                descriptors: s.descriptor_subset,
                hyperplane: Hyperplane::new(s.w, s.b),
                input_dim: k,
                lambda: s.lambda,
                budget: s.budget,
            };
            model.check().map_err(|e| SplitError::InvalidModel(format!("sub-model {}: {e}", j + 1)))?;
            subs.push(model);
        }
        let second = subs.pop().unwrap();
        let first = subs.pop().unwrap();
        Ok(SplitModel {
            theta: f.theta,
            hyperplane: f.hyperplane,
            sub_models: [first, second],
            sub_ranges: f.sub_ranges.map(|[lo, hi]| (lo, hi)),
            normalization: f.normalization,
            warnings: Vec::new(),
        })
    }
}

pub fn model_to_json(model: &SplitModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from(model)).expect("model values are finite")
}

pub fn model_from_json(text: &str) -> Result<SplitModel, SplitError> {
    let file: ModelFile = serde_json::from_str(text)?;
    SplitModel::try_from(file)
}

pub fn save_model(model: &SplitModel, path: impl AsRef<Path>) -> Result<(), SplitError> {
    std::fs::write(path, model_to_json(model) + "\n")?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<SplitModel, SplitError> {
    model_from_json(&std::fs::read_to_string(path)?)
}
