//! File-based commands: simulate → fit → summarize → metrics → roc.
//!
//! Each command reads and writes only through [`crate::io`] formats and
//! drops a `<command>.manifest.json` next to its primary output with the
//! fully resolved parameters, so any output can be reproduced
//! byte-identically by re-running the recorded command on the same build.
//! The `hsgs` binary is a thin argument-parsing shell over these functions.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dist::Rng;
use crate::io::{
    read_mask_csv, read_matrix_csv, read_samples, write_manifest, write_mask_csv,
    write_matrix_csv, write_samples, RunManifest,
};
use crate::metrics::compute_report;
use crate::sampler::{geweke_z, run_chain};
use crate::simulate::{
    self, coef_matrix, design_toeplitz, gen_response, CoefDist, DEFAULT_AR1_VALUE,
    DEFAULT_CLIQUES_GROUP, DEFAULT_CLIQUES_VALUE, DEFAULT_STAR_VALUE, DEFAULT_TOEPLITZ_RHO,
};
pub use crate::simulate::DEFAULT_SPARSITY;
use crate::summary::{
    credible_interval, default_level_grid, posterior_mean, roc_sweep_bayes, roc_sweep_threshold,
    select_by_interval, RocPoint, RocTarget,
};
use crate::types::{Dataset, GibbsConfig, GroundTruth, PosteriorSamples};
use crate::{Error, Result};

/// Default burn-in sweeps for `fit`.
pub const DEFAULT_BURNIN: usize = 1000;
/// Default retained draws for `fit`.
pub const DEFAULT_NMC: usize = 5000;
/// Default thinning for `fit`.
pub const DEFAULT_THIN: usize = 1;
/// Default credible level for `summarize`.
pub const DEFAULT_CI_LEVEL: f64 = 0.75;

/// Precision structure for simulated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    /// Tridiagonal, off-diagonal 0.45.
    Ar1,
    /// Fully connected triples, within-block 0.75; lenient padding when
    /// `q` is not a multiple of 3.
    Cliques,
    /// Hub-and-spokes, weight 0.25 (only positive definite for small `q`).
    Star,
}

/// Nonzero-coefficient law for simulated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coef {
    /// Magnitudes uniform on (0.5, 2) with random sign.
    Uniform,
    /// Every nonzero equal to 5.
    Const5,
}

/// Parameters of [`cmd_simulate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateArgs {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub structure: Structure,
    pub coef: Coef,
    pub sparsity: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Generate one dataset plus a same-size test set and ground truth:
/// `X.csv`, `Y.csv`, `B_true.csv`, `Omega_true.csv`, `X_test.csv`,
/// `Y_test.csv`, and `manifest.json` in `out_dir`.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<RunManifest> {
    let start = Instant::now();
    let mut notes = Vec::new();

    let omega0 = match args.structure {
        Structure::Ar1 => simulate::precision_ar1(args.q, DEFAULT_AR1_VALUE)?,
        Structure::Cliques => {
            if !args.q.is_multiple_of(DEFAULT_CLIQUES_GROUP) {
                notes.push(format!(
                    "q = {} is not a multiple of {}; trailing {} variable(s) left isolated",
                    args.q,
                    DEFAULT_CLIQUES_GROUP,
                    args.q % DEFAULT_CLIQUES_GROUP
                ));
            }
            simulate::precision_cliques(args.q, DEFAULT_CLIQUES_GROUP, DEFAULT_CLIQUES_VALUE, false)?
        }
        Structure::Star => {
            let star = simulate::precision_star(args.q, DEFAULT_STAR_VALUE)?;
            if !star.positive_definite {
                return Err(Error::InvalidInput(format!(
                    "star precision with q = {} is not positive definite; \
                     cannot generate Gaussian data from it",
                    args.q
                )));
            }
            star.matrix
        }
    };

    let coef_dist = match args.coef {
        Coef::Uniform => CoefDist::Uniform,
        Coef::Const5 => CoefDist::Constant(5.0),
    };

    let mut rng = Rng::from_seed(args.seed);
    let (b0, _mask) = coef_matrix(args.p, args.q, args.sparsity, coef_dist, &mut rng)?;
    let x = design_toeplitz(args.n, args.p, DEFAULT_TOEPLITZ_RHO, &mut rng)?;
    let y = gen_response(&x, &b0, &omega0, &mut rng)?;
    let x_test = design_toeplitz(args.n, args.p, DEFAULT_TOEPLITZ_RHO, &mut rng)?;
    let y_test = gen_response(&x_test, &b0, &omega0, &mut rng)?;

    std::fs::create_dir_all(&args.out_dir)?;
    let files = [
        ("X.csv", &x),
        ("Y.csv", &y),
        ("B_true.csv", &b0),
        ("Omega_true.csv", &omega0),
        ("X_test.csv", &x_test),
        ("Y_test.csv", &y_test),
    ];
    let mut manifest = RunManifest::new(
        "simulate",
        serde_json::to_value(args)?,
        args.seed,
    );
    for (name, m) in files {
        let path = args.out_dir.join(name);
        write_matrix_csv(&path, m)?;
        manifest.outputs.push(path);
    }
    manifest.notes = notes;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    write_manifest(&args.out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Parameters of [`cmd_fit`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitArgs {
    pub x_path: PathBuf,
    pub y_path: PathBuf,
    pub burnin: usize,
    pub nmc: usize,
    pub thin: usize,
    pub seed: u64,
    /// Independent chains with seeds derived by the replicate rule; one
    /// samples file per chain.
    pub chains: usize,
    pub pd_jitter: f64,
    pub out_samples: PathBuf,
    pub out_summary: PathBuf,
}

/// Per-chain digest stored in the fit summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainSummary {
    pub seed: u64,
    pub samples_path: PathBuf,
    /// Mean of the post-burn-in log-likelihood trace.
    pub loglik_mean: f64,
    /// Standard deviation of the post-burn-in trace.
    pub loglik_sd: f64,
    /// Geweke z for the post-burn-in trace (first 10% vs last 50%);
    /// absent when the trace is too short to score.
    pub geweke_z: Option<f64>,
    pub wall_seconds: f64,
}

/// Contents of `summary.json` written by [`cmd_fit`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitSummary {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub burnin: usize,
    pub nmc: usize,
    pub thin: usize,
    pub chains: Vec<ChainSummary>,
    /// Posterior mean of `B` pooled over all chains (`p x q`, row-major).
    pub posterior_mean_b: Vec<Vec<f64>>,
    /// Posterior mean of `Omega` pooled over all chains (`q x q`).
    pub posterior_mean_omega: Vec<Vec<f64>>,
    pub wall_seconds: f64,
    pub version: String,
}

fn matrix_to_rows(m: &Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn chain_samples_path(base: &Path, chain: usize, chains: usize) -> PathBuf {
    if chains == 1 {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "samples".into());
    let ext = base
        .extension()
        .map(|s| format!(".{}", s.to_string_lossy()))
        .unwrap_or_default();
    base.with_file_name(format!("{stem}_chain{chain}{ext}"))
}

/// Run the Gibbs sampler on CSV data, writing the binary sample stream(s)
/// and `summary.json` (posterior means, trace statistics, runtime).
pub fn cmd_fit(args: &FitArgs) -> Result<RunManifest> {
    let start = Instant::now();
    if args.chains == 0 {
        return Err(Error::InvalidInput("chains must be >= 1".into()));
    }
    let x = read_matrix_csv(&args.x_path)?;
    let y = read_matrix_csv(&args.y_path)?;
    let ds = Dataset::new(x, y)?;
    let (n, p, q) = (ds.n(), ds.p(), ds.q());

    let base_config = GibbsConfig {
        burnin: args.burnin,
        nmc: args.nmc,
        thin: args.thin,
        seed: args.seed,
        pd_jitter: args.pd_jitter,
    };
    base_config.validate()?;

    // Run chains (scoped threads when more than one).
    let mut runs = Vec::with_capacity(args.chains);
    if args.chains == 1 {
        let mut rng = Rng::from_seed(args.seed);
        runs.push((args.seed, run_chain(&ds, &base_config, &mut rng)?));
    } else {
        let results: Vec<(u64, Result<crate::sampler::ChainRun>)> =
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for c in 0..args.chains {
                    let seed = simulate::replicate_seed(args.seed, c as u64);
                    let ds_ref = &ds;
                    let config = GibbsConfig { seed, ..base_config.clone() };
                    handles.push((
                        seed,
                        scope.spawn(move || {
                            let mut rng = Rng::from_seed(seed);
                            run_chain(ds_ref, &config, &mut rng)
                        }),
                    ));
                }
                handles
                    .into_iter()
                    .map(|(seed, h)| (seed, h.join().expect("chain thread panicked")))
                    .collect()
            });
        for (seed, r) in results {
            runs.push((seed, r?));
        }
    }

    let mut manifest = RunManifest::new("fit", serde_json::to_value(args)?, args.seed);
    manifest.inputs.push(args.x_path.clone());
    manifest.inputs.push(args.y_path.clone());

    // Write per-chain streams and digests; pool draws for the means.
    let mut chain_summaries = Vec::new();
    let mut pooled: Option<PosteriorSamples> = None;
    for (c, (seed, run)) in runs.iter().enumerate() {
        let path = chain_samples_path(&args.out_samples, c, args.chains);
        write_samples(&path, &run.samples)?;
        manifest.outputs.push(path.clone());

        let tail = &run.loglik[args.burnin..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let var = tail.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / tail.len() as f64;
        chain_summaries.push(ChainSummary {
            seed: *seed,
            samples_path: path,
            loglik_mean: mean,
            loglik_sd: var.sqrt(),
            geweke_z: geweke_z(tail, 0.1, 0.5).ok(),
            wall_seconds: 0.0,
        });

        match &mut pooled {
            None => pooled = Some(run.samples.clone()),
            Some(acc) => {
                acc.beta_draws
                    .append(ndarray::Axis(0), run.samples.beta_draws.view())
                    .expect("chains share dimensions");
                acc.omega_draws
                    .append(ndarray::Axis(0), run.samples.omega_draws.view())
                    .expect("chains share dimensions");
            }
        }
    }
    let pooled = pooled.expect("at least one chain");
    let (b_hat, omega_hat) = posterior_mean(&pooled)?;

    let summary = FitSummary {
        n,
        p,
        q,
        burnin: args.burnin,
        nmc: args.nmc,
        thin: args.thin,
        chains: chain_summaries,
        posterior_mean_b: matrix_to_rows(&b_hat),
        posterior_mean_omega: matrix_to_rows(&omega_hat),
        wall_seconds: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    std::fs::write(&args.out_summary, serde_json::to_string_pretty(&summary)? + "\n")?;
    manifest.outputs.push(args.out_summary.clone());

    manifest.wall_seconds = start.elapsed().as_secs_f64();
    let manifest_path = sibling_manifest(&args.out_samples, "fit");
    write_manifest(&manifest_path, &manifest)?;
    Ok(manifest)
}

/// Parameters of [`cmd_summarize`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummarizeArgs {
    pub samples_path: PathBuf,
    pub ci_level: f64,
    pub out_b: PathBuf,
    pub out_omega: PathBuf,
    /// Directory receiving `B_select.csv` and `Omega_select.csv`.
    pub out_select: PathBuf,
}

/// Point estimates and interval selection from a sample stream:
/// `Bhat.csv`, `Omegahat.csv`, plus 0/1 selection masks.
pub fn cmd_summarize(args: &SummarizeArgs) -> Result<RunManifest> {
    let start = Instant::now();
    let samples = read_samples(&args.samples_path)?;
    let (b_hat, omega_hat) = posterior_mean(&samples)?;
    let intervals = credible_interval(&samples, args.ci_level)?;
    let selection = select_by_interval(&intervals);

    write_matrix_csv(&args.out_b, &b_hat)?;
    write_matrix_csv(&args.out_omega, &omega_hat)?;
    std::fs::create_dir_all(&args.out_select)?;
    let b_select_path = args.out_select.join("B_select.csv");
    let omega_select_path = args.out_select.join("Omega_select.csv");
    write_mask_csv(&b_select_path, &selection.b_selected)?;
    write_mask_csv(&omega_select_path, &selection.omega_selected)?;

    let mut manifest = RunManifest::new("summarize", serde_json::to_value(args)?, 0);
    manifest.inputs.push(args.samples_path.clone());
    manifest.outputs.extend([
        args.out_b.clone(),
        args.out_omega.clone(),
        b_select_path,
        omega_select_path,
    ]);
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    write_manifest(&sibling_manifest(&args.out_b, "summarize"), &manifest)?;
    Ok(manifest)
}

/// Parameters of [`cmd_metrics`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsArgs {
    /// Directory with `X.csv`, `B_true.csv`, `Omega_true.csv`.
    pub truth_dir: PathBuf,
    /// Directory with `Bhat.csv`, `Omegahat.csv`, `B_select.csv`,
    /// `Omega_select.csv`.
    pub estimate_dir: PathBuf,
    /// Directory with `X_test.csv`, `Y_test.csv`.
    pub test_dir: PathBuf,
    pub out_json: PathBuf,
}

/// Score an estimate against ground truth and a test set, writing a
/// [`crate::metrics::MetricsReport`] as JSON.
pub fn cmd_metrics(args: &MetricsArgs) -> Result<RunManifest> {
    let start = Instant::now();
    let x_train = read_matrix_csv(&args.truth_dir.join("X.csv"))?;
    let b_true = read_matrix_csv(&args.truth_dir.join("B_true.csv"))?;
    let omega_true = read_matrix_csv(&args.truth_dir.join("Omega_true.csv"))?;
    let truth = GroundTruth::new(b_true, omega_true)?;

    let b_hat = read_matrix_csv(&args.estimate_dir.join("Bhat.csv"))?;
    let omega_hat = read_matrix_csv(&args.estimate_dir.join("Omegahat.csv"))?;
    let b_selected = read_mask_csv(&args.estimate_dir.join("B_select.csv"))?;
    let omega_selected = read_mask_csv(&args.estimate_dir.join("Omega_select.csv"))?;

    let x_test = read_matrix_csv(&args.test_dir.join("X_test.csv"))?;
    let y_test = read_matrix_csv(&args.test_dir.join("Y_test.csv"))?;

    let report = compute_report(
        &truth,
        &b_hat,
        &omega_hat,
        &b_selected,
        &omega_selected,
        &x_train,
        &x_test,
        &y_test,
    )?;
    std::fs::write(&args.out_json, serde_json::to_string_pretty(&report)? + "\n")?;

    let mut manifest = RunManifest::new("metrics", serde_json::to_value(args)?, 0);
    manifest.inputs.extend([
        args.truth_dir.clone(),
        args.estimate_dir.clone(),
        args.test_dir.clone(),
    ]);
    manifest.outputs.push(args.out_json.clone());
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    write_manifest(&sibling_manifest(&args.out_json, "metrics"), &manifest)?;
    Ok(manifest)
}

/// ROC sweep flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RocMode {
    /// Credible-interval selection swept over levels 0.01..0.99.
    Bayes,
    /// Magnitude thresholding of a point estimate.
    Threshold,
}

/// Parameters of [`cmd_roc`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RocArgs {
    pub mode: RocMode,
    /// Sample stream (required in bayes mode).
    pub samples_path: Option<PathBuf>,
    /// Directory with `Bhat.csv` / `Omegahat.csv` (required in threshold
    /// mode).
    pub estimate_dir: Option<PathBuf>,
    /// Directory with `B_true.csv` / `Omega_true.csv`.
    pub truth_dir: PathBuf,
    /// Output stem: `<stem>_B.csv` and `<stem>_Omega.csv` are written.
    pub out_csv: PathBuf,
}

fn roc_output(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "roc".into());
    base.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn write_roc_csv(path: &Path, points: &[RocPoint]) -> Result<()> {
    use std::io::Write as _;
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for pt in points {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", pt.cut, pt.fpr, pt.tpr)?;
    }
    Ok(())
}

/// Support masks straight from the truth CSVs (exact-zero test); does not
/// require `Omega_true` to be positive definite.
fn truth_masks(truth_dir: &Path) -> Result<(Array2<bool>, Array2<bool>)> {
    let b_true = read_matrix_csv(&truth_dir.join("B_true.csv"))?;
    let omega_true = read_matrix_csv(&truth_dir.join("Omega_true.csv"))?;
    let q = omega_true.nrows();
    let b_mask = b_true.mapv(|v| v != 0.0);
    let omega_mask =
        Array2::from_shape_fn((q, q), |(k, l)| k != l && omega_true[(k, l)] != 0.0);
    Ok((b_mask, omega_mask))
}

/// ROC curves for coefficient and precision support, one CSV of
/// `(threshold_or_level, fpr, tpr)` rows per target.
pub fn cmd_roc(args: &RocArgs) -> Result<RunManifest> {
    let start = Instant::now();
    let (b_mask, omega_mask) = truth_masks(&args.truth_dir)?;

    let (points_b, points_omega) = match args.mode {
        RocMode::Bayes => {
            let samples_path = args.samples_path.as_ref().ok_or_else(|| {
                Error::InvalidInput("bayes mode requires a samples path".into())
            })?;
            let samples = read_samples(samples_path)?;
            let levels = default_level_grid();
            (
                roc_sweep_bayes(&samples, &b_mask, RocTarget::Coefficients, &levels)?,
                roc_sweep_bayes(&samples, &omega_mask, RocTarget::Precision, &levels)?,
            )
        }
        RocMode::Threshold => {
            let estimate_dir = args.estimate_dir.as_ref().ok_or_else(|| {
                Error::InvalidInput("threshold mode requires an estimate directory".into())
            })?;
            let b_hat = read_matrix_csv(&estimate_dir.join("Bhat.csv"))?;
            let omega_hat = read_matrix_csv(&estimate_dir.join("Omegahat.csv"))?;
            (
                roc_sweep_threshold(
                    &b_hat,
                    &b_mask,
                    RocTarget::Coefficients,
                    Some(&threshold_grid_with_zero(&b_hat, RocTarget::Coefficients)),
                )?,
                roc_sweep_threshold(
                    &omega_hat,
                    &omega_mask,
                    RocTarget::Precision,
                    Some(&threshold_grid_with_zero(&omega_hat, RocTarget::Precision)),
                )?,
            )
        }
    };

    let path_b = roc_output(&args.out_csv, "B");
    let path_omega = roc_output(&args.out_csv, "Omega");
    write_roc_csv(&path_b, &points_b)?;
    write_roc_csv(&path_omega, &points_omega)?;

    let mut manifest = RunManifest::new("roc", serde_json::to_value(args)?, 0);
    if let Some(p) = &args.samples_path {
        manifest.inputs.push(p.clone());
    }
    if let Some(p) = &args.estimate_dir {
        manifest.inputs.push(p.clone());
    }
    manifest.inputs.push(args.truth_dir.clone());
    manifest.outputs.extend([path_b, path_omega]);
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    write_manifest(&sibling_manifest(&args.out_csv, "roc"), &manifest)?;
    Ok(manifest)
}

/// The attainable thresholds (sorted distinct magnitudes) with an explicit
/// 0 prepended, so the "select everything nonzero" operating point is
/// always present.
fn threshold_grid_with_zero(estimate: &Array2<f64>, target: RocTarget) -> Vec<f64> {
    let mut grid = vec![0.0];
    match target {
        RocTarget::Coefficients => grid.extend(estimate.iter().map(|v| v.abs())),
        RocTarget::Precision => {
            let q = estimate.nrows();
            for k in 0..q {
                for l in (k + 1)..q {
                    grid.push(estimate[(k, l)].abs());
                }
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite estimates"));
    grid.dedup();
    grid
}

fn sibling_manifest(primary_output: &Path, command: &str) -> PathBuf {
    let dir = primary_output.parent().unwrap_or_else(|| Path::new("."));
    dir.join(format!("{command}.manifest.json"))
}
