//! Efron-bootstrap the P-P plot of one dataset and summarize the replicate
//! distribution of sqrt(n) ||R_n* - R_n||_1.
//!
//! ```bash
//! cargo run --example bootstrap_band
//! ```

use ppcurve::bootstrap::{bootstrap_replicates, ReplicateStatistic, ResampleMode};
use ppcurve::copulas::CopulaModel;
use ppcurve::margins::MarginModel;
use ppcurve::rng::{tag, StreamKey};

fn main() -> Result<(), ppcurve::Error> {
    let n = 1000;
    let fx = MarginModel::uniform(0.0, 1.0)?;
    let gy = MarginModel::uniform(0.0, 1.0)?;
    let copula = CopulaModel::gaussian(0.4)?;

    let mut rng = StreamKey::new(7, tag::DATASET, n as u64).replicate(0);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..n {
        let (u, v) = copula.sample_pair(&mut rng);
        x.push(fx.sample(u)?);
        y.push(gy.sample(v)?);
    }

    let stats = bootstrap_replicates(
        &x,
        &y,
        ResampleMode::Paired,
        999,
        ReplicateStatistic::L1ToPlot,
        StreamKey::new(7, tag::BOOTSTRAP_WEIGHTS, n as u64),
    )?;

    let mut sorted = stats.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| sorted[((p * sorted.len() as f64) as usize).min(sorted.len() - 1)];
    println!("bootstrap replicates: {}", stats.len());
    println!("quantiles of sqrt(n)||R_n* - R_n||_1:");
    for p in [0.05, 0.25, 0.5, 0.75, 0.95] {
        println!("  q{:>4.2} = {:.4}", p, q(p));
    }
    println!("mean = {:.4}", stats.iter().sum::<f64>() / stats.len() as f64);
    Ok(())
}
