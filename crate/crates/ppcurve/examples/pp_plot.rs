//! Build an empirical P-P plot from paired data and evaluate it.
//!
//! ```bash
//! cargo run --example pp_plot
//! ```

use ppcurve::copulas::CopulaModel;
use ppcurve::empirical::{build_pp_plot, SortedSample};
use ppcurve::margins::{MarginModel, PPCurve};
use ppcurve::rng::{tag, StreamKey};

fn main() -> Result<(), ppcurve::Error> {
    // Two hundred pairs with normal margins coupled by a Clayton copula.
    let fx = MarginModel::normal(0.0, 1.0)?;
    let gy = MarginModel::normal(0.5, 1.5)?;
    let copula = CopulaModel::clayton(2.0)?;

    let mut rng = StreamKey::new(42, tag::DATASET, 200).replicate(0);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..200 {
        let (u, v) = copula.sample_pair(&mut rng);
        x.push(fx.sample(u)?);
        y.push(gy.sample(v)?);
    }

    let plot = build_pp_plot(&SortedSample::new(x)?, &SortedSample::new(y)?);
    let curve = PPCurve::new(fx, gy);

    println!("u      R_n(u)   R(u)");
    for i in 0..=10 {
        let u = i as f64 / 10.0;
        println!("{:.2}   {:.4}   {:.4}", u, plot.eval(u), curve.eval(u));
    }
    println!("cells: {}, classified {:?}", plot.num_cells(), curve.ac_class());
    Ok(())
}
