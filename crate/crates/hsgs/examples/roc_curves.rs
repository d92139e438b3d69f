//! ROC curves for support recovery, two ways: sweeping the credible level
//! of interval-based selection, and thresholding the magnitude of a point
//! estimate.
//!
//!     cargo run --release --example roc_curves

use hsgs::dist::Rng;
use hsgs::sampler::run_chain;
use hsgs::simulate::{coef_matrix, design_toeplitz, gen_response, precision_ar1, CoefDist};
use hsgs::summary::{
    default_level_grid, posterior_mean, roc_sweep_bayes, roc_sweep_threshold, RocPoint, RocTarget,
};
use hsgs::types::{Dataset, GibbsConfig, GroundTruth};

/// Trapezoidal area under a curve given as (fpr, tpr) points, padded to
/// the (0,0) and (1,1) corners.
fn auc(points: &[RocPoint]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p.fpr, p.tpr)).collect();
    pts.push((0.0, 0.0));
    pts.push((1.0, 1.0));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}

fn main() -> hsgs::Result<()> {
    let (n, p, q) = (80, 25, 6);
    let mut rng = Rng::from_seed(3);
    let omega0 = precision_ar1(q, 0.45)?;
    let (b0, _) = coef_matrix(p, q, 0.1, CoefDist::Uniform, &mut rng)?;
    let x = design_toeplitz(n, p, 0.7, &mut rng)?;
    let y = gen_response(&x, &b0, &omega0, &mut rng)?;

    let ds = Dataset::new(x, y)?;
    let config = GibbsConfig {
        burnin: 300,
        nmc: 600,
        ..GibbsConfig::default()
    };
    let mut chain_rng = Rng::from_seed(5);
    let run = run_chain(&ds, &config, &mut chain_rng)?;
    let truth = GroundTruth::new(b0, omega0)?;
    let (b_hat, omega_hat) = posterior_mean(&run.samples)?;

    let levels = default_level_grid();
    let bayes_b = roc_sweep_bayes(&run.samples, &truth.b_support(), RocTarget::Coefficients, &levels)?;
    let bayes_o = roc_sweep_bayes(&run.samples, &truth.omega_support(), RocTarget::Precision, &levels)?;
    let thr_b = roc_sweep_threshold(&b_hat, &truth.b_support(), RocTarget::Coefficients, None)?;
    let thr_o = roc_sweep_threshold(&omega_hat, &truth.omega_support(), RocTarget::Precision, None)?;

    println!("target  sweep       points  AUC");
    println!("B       credible    {:>5}   {:.3}", bayes_b.len(), auc(&bayes_b));
    println!("B       threshold   {:>5}   {:.3}", thr_b.len(), auc(&thr_b));
    println!("Omega   credible    {:>5}   {:.3}", bayes_o.len(), auc(&bayes_o));
    println!("Omega   threshold   {:>5}   {:.3}", thr_o.len(), auc(&thr_o));

    println!("\ncredible-level sweep for B (level, fpr, tpr), every tenth point:");
    for pt in bayes_b.iter().step_by(10) {
        println!("  {:.2}  {:.3}  {:.3}", pt.cut, pt.fpr, pt.tpr);
    }
    Ok(())
}
