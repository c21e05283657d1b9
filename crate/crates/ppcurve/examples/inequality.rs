//! Monte Carlo check of the bridge integral inequality
//! E int_[a,b] |B2| dR <= E int_a^b |S| du + sqrt(pi/2) (b - a)
//! with S the limit process of the P-P process.
//!
//! ```bash
//! cargo run --release --example inequality
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::experiments::{run_inequality_check, ExperimentConfig};
use ppcurve::margins::MarginModel;

fn main() -> Result<(), ppcurve::Error> {
    let mut config = ExperimentConfig::new(
        MarginModel::normal(0.0, 1.0)?,
        MarginModel::normal(1.0, 1.0)?,
        CopulaModel::gaussian(0.5)?,
    );
    config.limit_draws = 4000;
    config.grid_size = 256;
    config.master_seed = 3;

    let report = run_inequality_check(&config, 0.25, 0.75)?;
    let ineq = report.inequality.unwrap();
    println!("window [{}, {}]", ineq.a, ineq.b);
    println!("LHS  E int |B2| dR        = {:.4}", ineq.lhs_mean);
    println!("RHS  E int |S| du         = {:.4}", ineq.rhs_mean);
    println!("     + sqrt(pi/2)(b-a)    = {:.4}", ineq.constant);
    println!("paired-difference se      = {:.5}", ineq.diff_std_err);
    println!("inequality holds: {}", ineq.pass);
    Ok(())
}
