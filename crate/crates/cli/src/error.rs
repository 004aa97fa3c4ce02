use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag values that clap cannot check; exit status 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hps_core::Error),
    #[error("chemgraph: {0}")]
    Graph(#[from] hps_chem::graph::GraphError),
    #[error("chemgraph: {0}")]
    Features(#[from] hps_chem::features::FeatureError),
    #[error("spec-validator: {0}")]
    Spec(#[from] hps_chem::spec::SpecError),
    #[error("spec-validator: {0}")]
    Witness(#[from] hps_chem::spec::WitnessError),
    #[error("spec-validator: {0}")]
    Embed(#[from] hps_chem::spec::EmbedError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Other(String),
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_error!(
    hps_core::dataset::DatasetError,
    hps_core::splitter::SplitError,
    hps_core::evaluation::EvalError,
    hps_core::regression::RegressionError
);
