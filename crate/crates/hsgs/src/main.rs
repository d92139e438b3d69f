//! Thin command-line shell over [`hsgs::pipeline`].
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags or invalid
//! parameter values), 1 on runtime failures (I/O, numerics).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hsgs::pipeline::{
    cmd_fit, cmd_metrics, cmd_roc, cmd_simulate, cmd_summarize, Coef, FitArgs, MetricsArgs,
    RocArgs, RocMode, SimulateArgs, Structure, SummarizeArgs, DEFAULT_BURNIN, DEFAULT_CI_LEVEL,
    DEFAULT_NMC, DEFAULT_SPARSITY, DEFAULT_THIN,
};

#[derive(Parser)]
#[command(name = "hsgs", version, about = "Sparse multivariate regression with graphical shrinkage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    Ar1,
    Cliques,
    Star,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoefArg {
    Uniform,
    Const5,
}

#[derive(Clone, Copy, ValueEnum)]
enum RocModeArg {
    Bayes,
    Threshold,
}

#[derive(Args)]
struct SimulateCli {
    /// Number of predictors.
    #[arg(long)]
    p: usize,
    /// Number of responses.
    #[arg(long)]
    q: usize,
    /// Number of observations.
    #[arg(long)]
    n: usize,
    /// Precision structure.
    #[arg(long, value_enum, default_value = "ar1")]
    structure: StructureArg,
    /// Nonzero-coefficient law.
    #[arg(long, value_enum, default_value = "uniform")]
    coef: CoefArg,
    /// Fraction of nonzero coefficients.
    #[arg(long, default_value_t = DEFAULT_SPARSITY)]
    sparsity: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing).
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct FitCli {
    /// Design matrix CSV (n x p).
    #[arg(long)]
    x: PathBuf,
    /// Response matrix CSV (n x q).
    #[arg(long)]
    y: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BURNIN)]
    burnin: usize,
    #[arg(long, default_value_t = DEFAULT_NMC)]
    nmc: usize,
    #[arg(long, default_value_t = DEFAULT_THIN)]
    thin: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent chains (seeds derived from --seed).
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Eigenvalue shift when the running precision drifts near singular.
    #[arg(long, default_value_t = 0.0)]
    pd_jitter: f64,
    /// Binary sample stream to write.
    #[arg(long)]
    out_samples: PathBuf,
    /// JSON run summary to write.
    #[arg(long)]
    out_summary: PathBuf,
}

#[derive(Args)]
struct SummarizeCli {
    /// Binary sample stream from `fit`.
    #[arg(long)]
    samples: PathBuf,
    /// Equal-tailed credible level for selection.
    #[arg(long, default_value_t = DEFAULT_CI_LEVEL)]
    ci_level: f64,
    /// Posterior-mean coefficient CSV to write.
    #[arg(long)]
    out_b: PathBuf,
    /// Posterior-mean precision CSV to write.
    #[arg(long)]
    out_omega: PathBuf,
    /// Directory receiving B_select.csv and Omega_select.csv.
    #[arg(long)]
    out_select: PathBuf,
}

#[derive(Args)]
struct MetricsCli {
    /// Directory with X.csv, B_true.csv, Omega_true.csv.
    #[arg(long)]
    truth_dir: PathBuf,
    /// Directory with Bhat.csv, Omegahat.csv, B_select.csv, Omega_select.csv.
    #[arg(long)]
    estimate_dir: PathBuf,
    /// Directory with X_test.csv, Y_test.csv.
    #[arg(long)]
    test_dir: PathBuf,
    /// Metrics report JSON to write.
    #[arg(long)]
    out_json: PathBuf,
}

#[derive(Args)]
struct RocCli {
    /// Sweep credible levels (bayes) or estimate magnitudes (threshold).
    #[arg(long, value_enum)]
    mode: RocModeArg,
    /// Sample stream (bayes mode).
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Directory with Bhat.csv / Omegahat.csv (threshold mode).
    #[arg(long)]
    estimate_dir: Option<PathBuf>,
    /// Directory with B_true.csv / Omega_true.csv.
    #[arg(long)]
    truth_dir: PathBuf,
    /// Output stem: <stem>_B.csv and <stem>_Omega.csv are written.
    #[arg(long)]
    out_csv: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset with ground truth and a test split.
    Simulate(SimulateCli),
    /// Run the Gibbs sampler and store posterior draws.
    Fit(FitCli),
    /// Posterior means and credible-interval selection masks.
    Summarize(SummarizeCli),
    /// Score an estimate against ground truth.
    Metrics(MetricsCli),
    /// ROC curves for support recovery.
    Roc(RocCli),
}

fn run(cli: Cli) -> hsgs::Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&SimulateArgs {
            p: a.p,
            q: a.q,
            n: a.n,
            structure: match a.structure {
                StructureArg::Ar1 => Structure::Ar1,
                StructureArg::Cliques => Structure::Cliques,
                StructureArg::Star => Structure::Star,
            },
            coef: match a.coef {
                CoefArg::Uniform => Coef::Uniform,
                CoefArg::Const5 => Coef::Const5,
            },
            sparsity: a.sparsity,
            seed: a.seed,
            out_dir: a.out_dir,
        })?,
        Command::Fit(a) => cmd_fit(&FitArgs {
            x_path: a.x,
            y_path: a.y,
            burnin: a.burnin,
            nmc: a.nmc,
            thin: a.thin,
            seed: a.seed,
            chains: a.chains,
            pd_jitter: a.pd_jitter,
            out_samples: a.out_samples,
            out_summary: a.out_summary,
        })?,
        Command::Summarize(a) => cmd_summarize(&SummarizeArgs {
            samples_path: a.samples,
            ci_level: a.ci_level,
            out_b: a.out_b,
            out_omega: a.out_omega,
            out_select: a.out_select,
        })?,
        Command::Metrics(a) => cmd_metrics(&MetricsArgs {
            truth_dir: a.truth_dir,
            estimate_dir: a.estimate_dir,
            test_dir: a.test_dir,
            out_json: a.out_json,
        })?,
        Command::Roc(a) => cmd_roc(&RocArgs {
            mode: match a.mode {
                RocModeArg::Bayes => RocMode::Bayes,
                RocModeArg::Threshold => RocMode::Threshold,
            },
            samples_path: a.samples,
            estimate_dir: a.estimate_dir,
            truth_dir: a.truth_dir,
            out_csv: a.out_csv,
        })?,
    };
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ hsgs::Error::InvalidInput(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
