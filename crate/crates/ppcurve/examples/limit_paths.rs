//! Simulate the Gaussian limit process of the P-P process on a grid and
//! check two of its moments against closed forms.
//!
//! ```bash
//! cargo run --example limit_paths
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::limit::{build_limit_sampler, LimitSpec};
use ppcurve::margins::{MarginModel, PPCurve};
use ppcurve::rng::{tag, StreamKey};

fn main() -> Result<(), ppcurve::Error> {
    let curve = PPCurve::new(MarginModel::uniform(0.0, 1.0)?, MarginModel::uniform(0.0, 1.0)?);
    // Odd grid size places u = 0.5 exactly on a midpoint.
    let spec = LimitSpec::paired(curve, CopulaModel::Product, 255);
    let sampler = build_limit_sampler(&spec)?;
    let key = StreamKey::new(1, tag::LIMIT_PATH, 0);

    let draws = 5000;
    let idx = 127; // u = 0.5
    let mut abs_b2 = 0.0;
    let mut norm_sum = 0.0;
    for i in 0..draws as u64 {
        let mut rng = key.replicate(i);
        let (b1, b2) = sampler.sample_bridges(&mut rng);
        abs_b2 += b2[idx].abs();
        let path = sampler.path_from_bridges(&b1, &b2)?;
        norm_sum += path.l1_norm();
    }

    let expected_abs = (2.0 / std::f64::consts::PI * 0.25f64).sqrt();
    let expected_norm = std::f64::consts::PI.sqrt() / 4.0;
    println!("draws = {draws}, grid = {}", sampler.grid_size());
    println!(
        "E|B2(0.5)|    = {:.5}  (closed form {:.5})",
        abs_b2 / draws as f64,
        expected_abs
    );
    println!(
        "E||path||_1   = {:.5}  (closed form {:.5})",
        norm_sum / draws as f64,
        expected_norm
    );
    println!("jitter used   = {:.0e}", sampler.jitter());
    Ok(())
}
