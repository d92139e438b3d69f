//! Monitoring the sampler: log-likelihood traces, the Geweke diagnostic,
//! and agreement between independent chains started from different seeds.
//!
//!     cargo run --release --example convergence

use hsgs::dist::Rng;
use hsgs::sampler::{geweke_z, run_chain};
use hsgs::simulate::{
    coef_matrix, design_toeplitz, gen_response, precision_ar1, replicate_seed, CoefDist,
};
use hsgs::summary::posterior_mean;
use hsgs::types::{Dataset, GibbsConfig};

fn main() -> hsgs::Result<()> {
    let (n, p, q) = (60, 15, 5);
    let mut rng = Rng::from_seed(9);
    let omega0 = precision_ar1(q, 0.45)?;
    let (b0, _) = coef_matrix(p, q, 0.1, CoefDist::Uniform, &mut rng)?;
    let x = design_toeplitz(n, p, 0.7, &mut rng)?;
    let y = gen_response(&x, &b0, &omega0, &mut rng)?;
    let ds = Dataset::new(x, y)?;

    let config = GibbsConfig {
        burnin: 200,
        nmc: 800,
        ..GibbsConfig::default()
    };

    let mut chains = Vec::new();
    for c in 0..3u64 {
        let seed = replicate_seed(100, c);
        let mut chain_rng = Rng::from_seed(seed);
        let chain_config = GibbsConfig { seed, ..config.clone() };
        let run = run_chain(&ds, &chain_config, &mut chain_rng)?;

        // Score stationarity on the post-burn-in slice of the trace:
        // Geweke compares the first 10% with the last 50%.
        let tail = &run.loglik[config.burnin..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let z = geweke_z(tail, 0.1, 0.5)?;
        println!("chain {c} (seed {seed}): loglik mean {mean:8.2}, Geweke z {z:+.2}");
        chains.push(run);
    }

    // Posterior means should agree across chains far more tightly than
    // the posterior spread itself.
    let means: Vec<_> = chains
        .iter()
        .map(|run| posterior_mean(&run.samples).map(|(b, _)| b))
        .collect::<hsgs::Result<_>>()?;
    let mut max_gap = 0.0f64;
    for m in &means[1..] {
        let gap = (&means[0] - m).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        max_gap = max_gap.max(gap);
    }
    println!("largest cross-chain gap in posterior-mean B entries: {max_gap:.4}");
    Ok(())
}
