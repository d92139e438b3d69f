//! How equal-tailed credible intervals turn posterior draws into sparse
//! support estimates, and how the credible level trades false positives
//! against false negatives.
//!
//!     cargo run --release --example credible_selection

use hsgs::dist::Rng;
use hsgs::metrics::{confusion, confusion_offdiag};
use hsgs::sampler::run_chain;
use hsgs::simulate::{coef_matrix, design_toeplitz, gen_response, precision_ar1, CoefDist};
use hsgs::summary::{credible_interval, select_by_interval};
use hsgs::types::{Dataset, GibbsConfig, GroundTruth};

fn main() -> hsgs::Result<()> {
    let (n, p, q) = (60, 20, 6);
    let mut rng = Rng::from_seed(11);
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
    let mut chain_rng = Rng::from_seed(1);
    let run = run_chain(&ds, &config, &mut chain_rng)?;
    let truth = GroundTruth::new(b0, omega0)?;

    println!("level   B sen   B spe   Omega sen   Omega spe");
    for level in [0.5, 0.75, 0.9, 0.95] {
        // Wider intervals are more likely to cover zero, so higher levels
        // select fewer entries: specificity rises, sensitivity falls.
        let intervals = credible_interval(&run.samples, level)?;
        let sel = select_by_interval(&intervals);
        let b = confusion(&sel.b_selected, &truth.b_support())?;
        let o = confusion_offdiag(&sel.omega_selected, &truth.omega_support())?;
        let fmt = |v: Option<f64>| v.map_or("  n/a".into(), |x| format!("{x:.3}"));
        println!(
            "{level:.2}    {}   {}   {}       {}",
            fmt(b.sensitivity),
            fmt(b.specificity),
            fmt(o.sensitivity),
            fmt(o.specificity),
        );
    }
    Ok(())
}
