//! Simulate a sparse multivariate regression, fit it with the Gibbs
//! sampler, and score the recovered coefficients and precision matrix.
//!
//!     cargo run --release --example end_to_end

use hsgs::dist::Rng;
use hsgs::metrics::compute_report;
use hsgs::sampler::run_chain;
use hsgs::simulate::{
    coef_matrix, design_toeplitz, gen_response, precision_ar1, CoefDist, DEFAULT_AR1_VALUE,
    DEFAULT_TOEPLITZ_RHO,
};
use hsgs::summary::{credible_interval, posterior_mean, select_by_interval};
use hsgs::types::{Dataset, GibbsConfig, GroundTruth};

fn main() -> hsgs::Result<()> {
    let (n, p, q) = (80, 30, 8);
    let mut rng = Rng::from_seed(2024);

    // Ground truth: 5% nonzero coefficients, tridiagonal precision.
    let omega0 = precision_ar1(q, DEFAULT_AR1_VALUE)?;
    let (b0, _) = coef_matrix(p, q, 0.05, CoefDist::Uniform, &mut rng)?;
    let x = design_toeplitz(n, p, DEFAULT_TOEPLITZ_RHO, &mut rng)?;
    let y = gen_response(&x, &b0, &omega0, &mut rng)?;
    let x_test = design_toeplitz(n, p, DEFAULT_TOEPLITZ_RHO, &mut rng)?;
    let y_test = gen_response(&x_test, &b0, &omega0, &mut rng)?;

    let ds = Dataset::new(x.clone(), y)?;
    let config = GibbsConfig {
        burnin: 300,
        nmc: 700,
        ..GibbsConfig::default()
    };
    println!(
        "fitting n = {n}, p = {p}, q = {q} with {} burn-in + {} retained sweeps ...",
        config.burnin, config.nmc
    );
    let mut chain_rng = Rng::from_seed(config.seed);
    let run = run_chain(&ds, &config, &mut chain_rng)?;

    let (b_hat, omega_hat) = posterior_mean(&run.samples)?;
    let intervals = credible_interval(&run.samples, 0.75)?;
    let selection = select_by_interval(&intervals);

    let truth = GroundTruth::new(b0, omega0)?;
    let report = compute_report(
        &truth,
        &b_hat,
        &omega_hat,
        &selection.b_selected,
        &selection.omega_selected,
        &x,
        &x_test,
        &y_test,
    )?;

    println!("coefficient MSE        {:.5}", report.mse_b);
    println!("precision MSE          {:.5}", report.mse_omega);
    println!("test prediction MSE    {:.5}", report.prediction_mse);
    println!("average KL divergence  {:.5}", report.avg_kl);
    println!(
        "B support:     sensitivity {:?}  specificity {:?}  precision {:?}",
        report.b_sen, report.b_spe, report.b_prc
    );
    println!(
        "Omega support: sensitivity {:?}  specificity {:?}  precision {:?}",
        report.omega_sen, report.omega_spe, report.omega_prc
    );
    Ok(())
}
