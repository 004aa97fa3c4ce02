//! `hps`: descriptor extraction, hyperplane-split training, evaluation,
//! prediction and target-specification checks.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hps", version, about = "Piecewise-linear property prediction by hyperplane data splitting")]
struct Cli {
    /// Worker threads for scans and cross-validation; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    Extract(ExtractArgs),
    Train(TrainArgs),
    Scan(ScanArgs),
    Evaluate(EvaluateArgs),
    Predict(PredictArgs),
    EmitConstraint(EmitArgs),
    ValidateSpec(ValidateArgs),
    CheckExtension(CheckArgs),
}

/// Options shared by commands that read a descriptor table.
#[derive(Debug, Args)]
struct DataArgs {
    /// Descriptor table: CSV with header `id,<target>,<descriptor>...`.
    #[arg(long)]
    data: PathBuf,
    /// Replace each observed value a by ln(a + OFFSET) before normalizing.
    #[arg(long, value_name = "OFFSET")]
    log_offset: Option<f64>,
}

/// Threshold selection shared by train, scan and evaluate.
#[derive(Debug, Args)]
struct GridArgs {
    /// Comma-separated thresholds in (0, 1); default 0.05, 0.10, ..., 0.95.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<f64>,
    /// Smallest share of compounds each side must hold for a scanned split.
    #[arg(long, default_value_t = hps_core::splitter::DEFAULT_MIN_FRACTION)]
    min_fraction: f64,
}

/// Build a descriptor table from a graph file.
///
/// Graph file: blocks of `G <name>`, `V <id> <element>[_<valence>]` and
/// `E <id1> <id2> <multiplicity>` lines separated by `---`. Targets file:
/// CSV whose first column is the graph name and second the observed value.
/// Graphs that fail admission (disconnected, fewer than four carbons, an
/// atom with more than four heavy neighbors) are skipped and logged.
#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    graphs: PathBuf,
    /// Observed values by graph name; without it every target is 0.
    #[arg(long)]
    targets: Option<PathBuf>,
    /// Output descriptor table (CSV).
    #[arg(long)]
    output: PathBuf,
    /// Branch parameter of the interior/exterior split.
    #[arg(long, default_value_t = hps_chem::features::DEFAULT_RHO)]
    rho: usize,
    /// Comma-separated descriptor families: heavy-atoms, interior-size,
    /// elements, symbols, edge-configs, fringe-trees, leaf-configs.
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    /// Reuse the alphabets of an earlier extraction (JSON written by --save-config).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the descriptor configuration (JSON) for later extractions.
    #[arg(long)]
    save_config: Option<PathBuf>,
    /// Write the admission log of skipped graphs.
    #[arg(long)]
    rejected_log: Option<PathBuf>,
    /// Header of the target column.
    #[arg(long, default_value = "target")]
    target_name: String,
}

/// Train a predictor on a descriptor table.
///
/// With `--method hps` the table is split by a hyperplane at `--theta` (or at
/// the scanned threshold when omitted) and one learner is fitted per side;
/// the model is written as JSON. Other methods fit one learner on the whole
/// set and report the training R².
#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// hps, or a single learner: mlr, lasso[:λ], alr[:λ], rlr[:budget], auto.
    #[arg(long, default_value = "hps")]
    method: String,
    #[arg(long)]
    theta: Option<f64>,
    /// Learners for the two sides, comma-separated; one value applies to both.
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    side_methods: Vec<String>,
    /// Model JSON output (required for hps).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, env = "HPS_SEED", default_value_t = 0)]
    seed: u64,
}

/// Solve the splitting LP at every grid threshold and print the table.
#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Also write the table as CSV.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Repeated k-fold cross-validation with median test R².
#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Single-set learners to evaluate, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "mlr,lasso,alr,rlr")]
    methods: Vec<String>,
    /// Also evaluate the split predictor.
    #[arg(long)]
    hps: bool,
    /// Threshold for the split predictor; scanned when omitted.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    side_methods: Vec<String>,
    #[arg(long, default_value_t = hps_core::evaluation::DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = hps_core::evaluation::DEFAULT_FOLDS)]
    folds: usize,
    #[arg(long, env = "HPS_SEED", default_value_t = 0)]
    seed: u64,
    /// Write every fold score as CSV `method,run,fold,status,score,detail`.
    #[arg(long)]
    scores: Option<PathBuf>,
}

/// Predict observed values for a descriptor table with a trained model.
///
/// The table's target column is ignored; output CSV is `id,prediction`.
#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Print the side constraint(s) an inverse search needs for a target interval.
#[derive(Debug, Args)]
struct EmitArgs {
    #[arg(long)]
    model: PathBuf,
    /// Lower end of the target interval, original units.
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    /// Upper end of the target interval, original units.
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    /// Output JSON; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parse a target specification and report internal inconsistencies.
///
/// Findings are printed one per line and do not change the exit status.
#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    spec: PathBuf,
}

/// Check whether a graph is an extension of a target specification.
///
/// Give either a witness JSON (`vertex_map`, `paths`, `leaf_paths`) or
/// `--search` to look for one. Rule violations are findings, not errors.
#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Graph file holding exactly one graph.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, conflicts_with = "search", required_unless_present = "search")]
    witness: Option<PathBuf>,
    #[arg(long)]
    search: bool,
    /// Write the witness found by --search.
    #[arg(long, requires = "search")]
    witness_out: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| match cli.command {
        Command::Extract(a) => commands::extract(a),
        Command::Train(a) => commands::train(a),
        Command::Scan(a) => commands::scan(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Predict(a) => commands::predict(a),
        Command::EmitConstraint(a) => commands::emit_constraint(a),
        Command::ValidateSpec(a) => commands::validate_spec(a),
        Command::CheckExtension(a) => commands::check_extension(a),
    });
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
