//! Two independent samples of different sizes: with n/(m+n) -> rho the limit
//! process picks up a sqrt(rho/(1-rho)) scale on the first bridge. Here
//! rho = 1/4, so m = 3n and kappa = sqrt(1/3).
//!
//! ```bash
//! cargo run --release --example two_sample
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::experiments::{run_convergence_experiment, ExperimentConfig, SamplingMode};
use ppcurve::margins::MarginModel;

fn main() -> Result<(), ppcurve::Error> {
    let mut config = ExperimentConfig::new(
        MarginModel::uniform(0.0, 1.0)?,
        MarginModel::uniform(0.0, 1.0)?,
        CopulaModel::Product,
    );
    config.mode = SamplingMode::Independent { rho: 0.25 };
    config.n_list = vec![512, 2048];
    config.replicates = 500;
    config.limit_draws = 4000;
    config.grid_size = 256;
    config.master_seed = 4;

    println!(
        "rho = 1/4: m(n) = 3n, kappa = {:.5}",
        config.mode.kappa()
    );
    let report = run_convergence_experiment(&config)?;
    // (2/sqrt(3)) sqrt(2 pi) / 8, the mean L1 norm of the rescaled limit.
    let expected = 2.0 / 3.0f64.sqrt() * (2.0 * std::f64::consts::PI).sqrt() / 8.0;
    for s in &report.per_n {
        println!(
            "n={:5} (m={:5})  mean={:.4}  KS={:.4}",
            s.n,
            config.mode.x_size(s.n),
            s.mean,
            s.ks_to_limit.unwrap()
        );
    }
    println!("limit mean = {:.4} (closed form {:.4})", report.limit_mean.unwrap(), expected);
    Ok(())
}
