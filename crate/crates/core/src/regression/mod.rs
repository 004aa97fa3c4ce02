//! Single-set learners producing linear predictors `η(x) = w·x̃ + b` over a
//! subset `x̃` of linear and quadratic descriptors.

mod alr;
mod quadratic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::DataSet;
use crate::linalg::{self, FitError};
use crate::lp::{LpError, LpStatus};

pub use alr::{alr_lp_layout, build_alr_lp, fit_alr, solve_alr, AlrLayout, AlrSolution};
pub use quadratic::{
    augment_quadratic, augment_quadratic_capped, fit_rlr, quadratic_descriptors, quadratic_count,
    reduce_descriptors, DEFAULT_COLUMN_CAP,
};

pub const DEFAULT_ALR_LAMBDA: f64 = 0.01;
pub const ALR_LAMBDA_GRID: [f64; 4] = [0.0, 1e-3, 1e-2, 1e-1];
pub const DEFAULT_LASSO_LAMBDA: f64 = 1e-3;
pub const DEFAULT_RLR_BUDGET: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegressionError {
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("linear program finished with status {0:?}")]
    LpNotOptimal(LpStatus),
    #[error("all observed values are identical; the fit is degenerate")]
    DegenerateTarget,
    #[error("descriptor budget must be at least 1")]
    ZeroBudget,
    #[error("quadratic augmentation would add {count} columns, above the cap of {cap}")]
    TooManyColumns { count: usize, cap: usize },
    #[error("feature vector has {got} entries, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("descriptor {0} references a linear index outside the input dimension")]
    BadDescriptor(Descriptor),
    #[error("data set has no compounds")]
    Empty,
    #[error("{0}")]
    Other(String),
}

/// Weight vector and offset of a linear function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub w: Vec<f64>,
    pub b: f64,
}

impl Hyperplane {
    pub fn new(w: Vec<f64>, b: f64) -> Self {
        Hyperplane { w, b }
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(a, v)| a * v).sum()
    }
}

/// A descriptor column of a model: a linear descriptor or a quadratic
/// combination of two linear descriptors (0-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Descriptor {
    Linear(usize),
    /// `x(i)·x(j)` with `i ≤ j`.
    Prod(usize, usize),
    /// `x(i)·(1 − x(j))` for any ordered pair.
    ProdCompl(usize, usize),
}

impl Descriptor {
    pub fn value(&self, x: &[f64]) -> f64 {
        match *self {
            Descriptor::Linear(i) => x[i],
            Descriptor::Prod(i, j) => x[i] * x[j],
            Descriptor::ProdCompl(i, j) => x[i] * (1.0 - x[j]),
        }
    }

    fn max_index(&self) -> usize {
        match *self {
            Descriptor::Linear(i) => i,
            Descriptor::Prod(i, j) | Descriptor::ProdCompl(i, j) => i.max(j),
        }
    }

    /// Column label built from the linear descriptor names.
    pub fn label(&self, names: &[String]) -> String {
        match *self {
            Descriptor::Linear(i) => names[i].clone(),
            Descriptor::Prod(i, j) => format!("{}*{}", names[i], names[j]),
            Descriptor::ProdCompl(i, j) => format!("{}*(1-{})", names[i], names[j]),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Descriptor::Linear(i) => write!(f, "L:{i}"),
            Descriptor::Prod(i, j) => write!(f, "PROD:{i},{j}"),
            Descriptor::ProdCompl(i, j) => write!(f, "PROD_COMPL:{i},{j}"),
        }
    }
}

impl FromStr for Descriptor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| format!("bad descriptor tag {s:?}"))?;
        let idx = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad index in {s:?}"));
        let pair = || -> Result<(usize, usize), String> {
            let (a, b) = rest.split_once(',').ok_or_else(|| format!("{s:?} needs two indices"))?;
            Ok((idx(a)?, idx(b)?))
        };
        match kind {
            "L" => Ok(Descriptor::Linear(idx(rest)?)),
            "PROD" => {
                let (i, j) = pair()?;
                if i > j {
                    return Err(format!("{s:?}: PROD requires i <= j"));
                }
                Ok(Descriptor::Prod(i, j))
            }
            "PROD_COMPL" => {
                let (i, j) = pair()?;
                Ok(Descriptor::ProdCompl(i, j))
            }
            _ => Err(format!("unknown descriptor kind {kind:?}")),
        }
    }
}

impl TryFrom<String> for Descriptor {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Descriptor> for String {
    fn from(d: Descriptor) -> String {
        d.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "MLR")]
    Mlr,
    #[serde(rename = "LLR")]
    Llr,
    #[serde(rename = "ALR")]
    Alr,
    #[serde(rename = "RLR")]
    Rlr,
    /// Constant predictor used when a side's target range is degenerate.
    #[serde(rename = "CONST")]
    Constant,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Mlr => "MLR",
            Method::Llr => "LLR",
            Method::Alr => "ALR",
            Method::Rlr => "RLR",
            Method::Constant => "CONST",
        };
        f.write_str(s)
    }
}

/// Which learner to run, with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    Mlr,
    Lasso { lambda: f64 },
    Alr { lambda: f64 },
    Rlr { budget: usize },
    /// Best of the four learners by an internal 5-fold cross-validation.
    Auto,
}

impl MethodSpec {
    pub fn label(&self) -> String {
        match self {
            MethodSpec::Mlr => "MLR".into(),
            MethodSpec::Lasso { lambda } => format!("LLR(lambda={lambda})"),
            MethodSpec::Alr { lambda } => format!("ALR(lambda={lambda})"),
            MethodSpec::Rlr { budget } => format!("RLR(budget={budget})"),
            MethodSpec::Auto => "AUTO".into(),
        }
    }

    /// The four fixed learners `Auto` chooses from.
    pub fn candidates() -> [MethodSpec; 4] {
        [
            MethodSpec::Mlr,
            MethodSpec::Lasso { lambda: DEFAULT_LASSO_LAMBDA },
            MethodSpec::Alr { lambda: DEFAULT_ALR_LAMBDA },
            MethodSpec::Rlr { budget: DEFAULT_RLR_BUDGET },
        ]
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `mlr`, `lasso[:λ]`/`llr[:λ]`, `alr[:λ]`, `rlr[:budget]` or `auto`.
impl FromStr for MethodSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let real = |a: Option<&str>, default: f64| -> Result<f64, String> {
            match a {
                None => Ok(default),
                Some(t) => match t.parse::<f64>() {
                    Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
                    _ => Err(format!("bad lambda {t:?} in {s:?}")),
                },
            }
        };
        match name {
            "mlr" if arg.is_none() => Ok(MethodSpec::Mlr),
            "lasso" | "llr" => Ok(MethodSpec::Lasso { lambda: real(arg, DEFAULT_LASSO_LAMBDA)? }),
            "alr" => Ok(MethodSpec::Alr { lambda: real(arg, DEFAULT_ALR_LAMBDA)? }),
            "rlr" => {
                let budget = match arg {
                    None => DEFAULT_RLR_BUDGET,
                    Some(t) => t.parse().map_err(|_| format!("bad budget {t:?} in {s:?}"))?,
                };
                Ok(MethodSpec::Rlr { budget })
            }
            "auto" if arg.is_none() => Ok(MethodSpec::Auto),
            _ => Err(format!("unknown method {s:?} (expected mlr, lasso, alr, rlr or auto)")),
        }
    }
}

/// A trained linear predictor.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub method: Method,
    pub descriptors: Vec<Descriptor>,
    pub hyperplane: Hyperplane,
    /// Number of linear descriptors a feature vector must have.
    pub input_dim: usize,
    pub lambda: Option<f64>,
    pub budget: Option<usize>,
}

impl LinearModel {
    pub fn constant(value: f64, input_dim: usize) -> Self {
        LinearModel {
            method: Method::Constant,
            descriptors: Vec::new(),
            hyperplane: Hyperplane::new(Vec::new(), value),
            input_dim,
            lambda: None,
            budget: None,
        }
    }

    pub fn check(&self) -> Result<(), RegressionError> {
        if self.descriptors.len() != self.hyperplane.w.len() {
            return Err(RegressionError::Other(format!(
                "{} descriptors but {} weights",
                self.descriptors.len(),
                self.hyperplane.w.len()
            )));
        }
        if let Some(d) = self.descriptors.iter().find(|d| d.max_index() >= self.input_dim) {
            return Err(RegressionError::BadDescriptor(*d));
        }
        Ok(())
    }
}

/// `w·x̃ + b` where `x̃` expands the model's descriptors from the linear vector `x`.
pub fn predict(model: &LinearModel, x: &[f64]) -> Result<f64, RegressionError> {
    if x.len() != model.input_dim {
        return Err(RegressionError::DimensionMismatch { expected: model.input_dim, got: x.len() });
    }
    Ok(model
        .descriptors
        .iter()
        .zip(&model.hyperplane.w)
        .map(|(d, w)| w * d.value(x))
        .sum::<f64>()
        + model.hyperplane.b)
}

pub fn predict_all(model: &LinearModel, rows: &[Vec<f64>]) -> Result<Vec<f64>, RegressionError> {
    rows.iter().map(|x| predict(model, x)).collect()
}

fn linear_model(
    method: Method,
    descriptors: Vec<Descriptor>,
    w: Vec<f64>,
    b: f64,
    input_dim: usize,
) -> LinearModel {
    LinearModel {
        method,
        descriptors,
        hyperplane: Hyperplane::new(w, b),
        input_dim,
        lambda: None,
        budget: None,
    }
}

/// Multidimensional linear regression over every linear descriptor.
pub fn fit_mlr(ds: &DataSet) -> Result<LinearModel, RegressionError> {
    if ds.is_empty() {
        return Err(RegressionError::Empty);
    }
    let (w, b) = linalg::least_squares(&ds.features, &ds.targets)?;
    let k = ds.num_descriptors();
    Ok(linear_model(Method::Mlr, (0..k).map(Descriptor::Linear).collect(), w, b, k))
}

/// Lasso; descriptors whose weight is exactly zero are dropped from the model.
pub fn fit_lasso(ds: &DataSet, lambda: f64) -> Result<LinearModel, RegressionError> {
    if ds.is_empty() {
        return Err(RegressionError::Empty);
    }
    let (w, b) = linalg::lasso_fit(&ds.features, &ds.targets, lambda)?;
    let (descriptors, weights): (Vec<_>, Vec<_>) = w
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(j, v)| (Descriptor::Linear(j), *v))
        .unzip();
    let mut model = linear_model(Method::Llr, descriptors, weights, b, ds.num_descriptors());
    model.lambda = Some(lambda);
    Ok(model)
}

/// Dispatches on `spec`; [`MethodSpec::Auto`] runs the internal selection with `seed`.
pub fn fit(ds: &DataSet, spec: &MethodSpec, seed: u64) -> Result<LinearModel, RegressionError> {
    match *spec {
        MethodSpec::Mlr => fit_mlr(ds),
        MethodSpec::Lasso { lambda } => fit_lasso(ds, lambda),
        MethodSpec::Alr { lambda } => fit_alr(ds, lambda),
        MethodSpec::Rlr { budget } => fit_rlr(ds, budget),
        MethodSpec::Auto => {
            let chosen = crate::evaluation::select_method(ds, seed)
                .map_err(|e| RegressionError::Other(e.to_string()))?;
            fit(ds, &chosen, seed)
        }
    }
}

/// Pearson correlation; zero when either side has no variance.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        0.0
    } else {
        sab / (saa.sqrt() * sbb.sqrt())
    }
}
