//! Bootstrap validity: the bootstrap law from one dataset against the limit
//! law, including the optional comparison with a fresh sampling distribution.
//!
//! ```bash
//! cargo run --release --example bootstrap_validity
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::experiments::{run_bootstrap_validity_experiment, ExperimentConfig};
use ppcurve::margins::MarginModel;

fn main() -> Result<(), ppcurve::Error> {
    let mut config = ExperimentConfig::new(
        MarginModel::uniform(0.0, 1.0)?,
        MarginModel::uniform(0.0, 1.0)?,
        CopulaModel::gaussian(0.3)?,
    );
    config.n_list = vec![2048];
    config.replicates = 400;
    config.bootstrap_b = 800;
    config.limit_draws = 4000;
    config.grid_size = 256;
    config.compare_sampling = true;
    config.master_seed = 11;

    let report = run_bootstrap_validity_experiment(&config)?;
    let s = &report.per_n[0];
    println!("{}", report.one_line_summary());
    println!(
        "bootstrap mean {:.4}; KS to limit {:.4}; KS to sampling law {:.4}",
        s.mean,
        s.ks_to_limit.unwrap(),
        s.ks_to_sampling.unwrap()
    );
    Ok(())
}
