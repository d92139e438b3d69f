//! The file-based workflow behind the `hsgs` binary, driven through the
//! library: simulate → fit → summarize → metrics → roc, all via CSV, a
//! compact binary sample stream, and JSON manifests that make every run
//! reproducible.
//!
//!     cargo run --release --example file_pipeline

use hsgs::io::read_manifest;
use hsgs::pipeline::{
    cmd_fit, cmd_metrics, cmd_roc, cmd_simulate, cmd_summarize, Coef, FitArgs, MetricsArgs,
    RocArgs, RocMode, SimulateArgs, Structure, SummarizeArgs,
};

fn main() -> hsgs::Result<()> {
    let root = std::env::temp_dir().join("hsgs_file_pipeline");
    let data = root.join("data");
    let est = root.join("estimate");
    std::fs::create_dir_all(&est)?;

    let sim = cmd_simulate(&SimulateArgs {
        p: 15,
        q: 5,
        n: 50,
        structure: Structure::Ar1,
        coef: Coef::Uniform,
        sparsity: 0.1,
        seed: 42,
        out_dir: data.clone(),
    })?;
    println!("simulate wrote {} files in {:.2}s", sim.outputs.len(), sim.wall_seconds);

    let fit = cmd_fit(&FitArgs {
        x_path: data.join("X.csv"),
        y_path: data.join("Y.csv"),
        burnin: 200,
        nmc: 400,
        thin: 1,
        seed: 1,
        chains: 1,
        pd_jitter: 0.0,
        out_samples: root.join("samples.bin"),
        out_summary: root.join("summary.json"),
    })?;
    println!("fit wrote {:?} in {:.2}s", fit.outputs[0].file_name().unwrap(), fit.wall_seconds);

    cmd_summarize(&SummarizeArgs {
        samples_path: root.join("samples.bin"),
        ci_level: 0.75,
        out_b: est.join("Bhat.csv"),
        out_omega: est.join("Omegahat.csv"),
        out_select: est.clone(),
    })?;

    cmd_metrics(&MetricsArgs {
        truth_dir: data.clone(),
        estimate_dir: est.clone(),
        test_dir: data.clone(),
        out_json: root.join("metrics.json"),
    })?;
    println!("metrics:\n{}", std::fs::read_to_string(root.join("metrics.json"))?);

    cmd_roc(&RocArgs {
        mode: RocMode::Bayes,
        samples_path: Some(root.join("samples.bin")),
        estimate_dir: None,
        truth_dir: data,
        out_csv: root.join("roc.csv"),
    })?;

    // Every command leaves a manifest describing exactly how to reproduce
    // its outputs.
    let manifest = read_manifest(&root.join("fit.manifest.json"))?;
    println!(
        "fit manifest: command = {}, seed = {}, {} output(s)",
        manifest.command,
        manifest.seed,
        manifest.outputs.len()
    );
    println!("all outputs under {}", root.display());
    Ok(())
}
