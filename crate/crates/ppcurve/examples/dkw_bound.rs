//! Check the moment form of the Dvoretzky-Kiefer-Wolfowitz inequality:
//! E sqrt(n) ||F_n - F||_inf stays below sqrt(pi/2).
//!
//! ```bash
//! cargo run --release --example dkw_bound
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::experiments::{run_dkw_check, ExperimentConfig, SQRT_PI_OVER_2};
use ppcurve::margins::MarginModel;

fn main() -> Result<(), ppcurve::Error> {
    let mut config = ExperimentConfig::new(
        MarginModel::exponential(1.0)?,
        MarginModel::uniform(0.0, 1.0)?,
        CopulaModel::Product,
    );
    config.n_list = vec![64, 256, 1024];
    config.replicates = 1000;
    config.master_seed = 2;

    let report = run_dkw_check(&config)?;
    println!("bound sqrt(pi/2) = {SQRT_PI_OVER_2:.4}");
    for s in &report.per_n {
        println!(
            "n={:5}  E sqrt(n)||F_n - F||_inf = {:.4} (se {:.4})  pass={}",
            s.n, s.mean, s.std_err, s.pass
        );
    }
    Ok(())
}
