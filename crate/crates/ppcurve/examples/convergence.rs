//! Monte Carlo convergence experiment: the law of sqrt(n) ||R_n - R||_1
//! against the simulated limit law, per sample size.
//!
//! ```bash
//! cargo run --release --example convergence
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::experiments::{run_convergence_experiment, ExperimentConfig};
use ppcurve::margins::MarginModel;

fn main() -> Result<(), ppcurve::Error> {
    let mut config = ExperimentConfig::new(
        MarginModel::uniform(0.0, 1.0)?,
        MarginModel::uniform(0.0, 1.0)?,
        CopulaModel::Product,
    );
    // Scaled down from the acceptance sizes so the example runs in seconds.
    config.n_list = vec![128, 512, 2048];
    config.replicates = 500;
    config.limit_draws = 4000;
    config.grid_size = 256;
    config.master_seed = 20260810;

    let report = run_convergence_experiment(&config)?;
    println!("{}", report.one_line_summary());
    for s in &report.per_n {
        println!(
            "n={:5}  mean={:.4}  se={:.4}  KS-to-limit={:.4}  pass={}",
            s.n,
            s.mean,
            s.std_err,
            s.ks_to_limit.unwrap(),
            s.pass
        );
    }
    println!("limit mean = {:.4}", report.limit_mean.unwrap());
    Ok(())
}
