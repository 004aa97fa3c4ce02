use thiserror::Error;

use crate::dataset::DatasetError;
use crate::evaluation::EvalError;
use crate::linalg::FitError;
use crate::lp::LpError;
use crate::regression::RegressionError;
use crate::splitter::SplitError;

/// Any error raised by this crate, prefixed with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lp: {0}")]
    Lp(#[from] LpError),
    #[error("linalg: {0}")]
    Fit(#[from] FitError),
    #[error("dataset: {0}")]
    Dataset(#[from] DatasetError),
    #[error("regression: {0}")]
    Regression(#[from] RegressionError),
    #[error("splitter: {0}")]
    Split(#[from] SplitError),
    #[error("evaluation: {0}")]
    Evaluation(#[from] EvalError),
}
