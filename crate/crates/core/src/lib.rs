//! Piecewise-linear property prediction by hyperplane data splitting.
//!
//! The crate is organized bottom-up:
//!
//! * [`lp`] and [`linalg`] hold the numeric substrate (a dense two-phase
//!   simplex, minimum-norm least squares and Lasso by coordinate descent).
//! * [`dataset`] loads descriptor tables and keeps invertible min–max records.
//! * [`regression`] provides the single-set learners MLR, LLR (Lasso), ALR
//!   (an LP over linear and quadratic activations) and RLR (quadratic
//!   augmentation followed by descriptor reduction and MLR).
//! * [`splitter`] finds a separating hyperplane with an LP for a threshold on
//!   the observed values, fits one learner per side and composes them.
//! * [`evaluation`] implements R², k-fold partitions and the repeated
//!   cross-validation protocol with median aggregation.

pub mod dataset;
pub mod evaluation;
pub mod linalg;
pub mod lp;
pub mod regression;
pub mod rng;
pub mod splitter;

mod error;

pub use dataset::{DataSet, NormalizationRecord};
pub use error::Error;
pub use lp::{LinearProgram, LpSolution, LpStatus, Relation};
pub use regression::{Descriptor, Hyperplane, LinearModel, Method, MethodSpec};
pub use splitter::{SplitModel, SplitResult};

pub type Result<T, E = Error> = std::result::Result<T, E>;
