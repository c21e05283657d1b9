//! Norms and distances: exact L1 distances involving step functions, sup
//! distance against a monotone curve, the shift-modulus diagnostic on grid
//! functions, and the two-sample Kolmogorov-Smirnov distance.

use crate::empirical::StepFunction;
use crate::error::{Error, Result};
use crate::margins::PPCurve;
use crate::quad::adaptive_simpson;

/// Default absolute tolerance for curve integrals; far below the Monte Carlo
/// noise of the O(1) statistics built on top.
pub const DEFAULT_L1_TOL: f64 = 1e-9;

const CROSSING_TOL: f64 = 1e-12;

/// A function known on the midpoint grid u_j = (j - 1/2)/J.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain("grid needs at least 2 points".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid values must be finite".into()));
        }
        Ok(Self { values })
    }

    /// Evaluates `f` on the midpoint grid of size `j`.
    pub fn from_fn<F: FnMut(f64) -> f64>(j: usize, mut f: F) -> Result<Self> {
        if j < 2 {
            return Err(Error::Domain("grid needs at least 2 points".into()));
        }
        Self::new((0..j).map(|i| f(midpoint(i, j))).collect())
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid coordinate of index `i`.
    pub fn u(&self, i: usize) -> f64 {
        midpoint(i, self.values.len())
    }

    /// Midpoint Riemann L1 norm.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }
}

pub fn midpoint(i: usize, j: usize) -> f64 {
    (i as f64 + 0.5) / j as f64
}

/// Exact-to-tolerance integral of |step(u) - R(u)| over [0,1].
///
/// Within each cell the monotone curve crosses the constant cell value at most
/// once; the crossing is located by bisection and each signed piece is
/// integrated by adaptive Simpson with a per-cell budget of `tol / #cells`.
pub fn l1_step_vs_curve(step: &StepFunction, curve: &PPCurve, tol: f64) -> f64 {
    let cell_tol = tol.max(1e-14) / step.num_cells() as f64;
    let mut total = 0.0;
    for (lo, hi, v) in step.cells() {
        let r_lo = curve.eval(lo);
        let r_hi = curve.eval(hi);
        if v <= r_lo {
            total += integrate_curve(curve, lo, hi, cell_tol) - v * (hi - lo);
        } else if v >= r_hi {
            total += v * (hi - lo) - integrate_curve(curve, lo, hi, cell_tol);
        } else {
            let c = bisect_crossing(curve, lo, hi, v);
            total += v * (c - lo) - integrate_curve(curve, lo, c, 0.5 * cell_tol);
            total += integrate_curve(curve, c, hi, 0.5 * cell_tol) - v * (hi - c);
        }
    }
    total
}

fn integrate_curve(curve: &PPCurve, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_simpson(&|u| curve.eval(u), a, b, tol)
}

// Unique crossing of the nondecreasing curve with level v inside [lo, hi].
fn bisect_crossing(curve: &PPCurve, mut lo: f64, mut hi: f64, v: f64) -> f64 {
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if curve.eval(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact integral of |a - b| over the merged breakpoint partition.
pub fn l1_step_vs_step(a: &StepFunction, b: &StepFunction) -> f64 {
    let mut total = 0.0;
    let mut prev = 0.0;
    let (mut ia, mut ib) = (0usize, 0usize);
    let ba = a.breakpoints();
    let bb = b.breakpoints();
    while ia < ba.len() || ib < bb.len() {
        let next_a = ba.get(ia).copied().unwrap_or(1.0);
        let next_b = bb.get(ib).copied().unwrap_or(1.0);
        let next = next_a.min(next_b);
        total += (a.values()[ia.min(ba.len() - 1)] - b.values()[ib.min(bb.len() - 1)]).abs()
            * (next - prev);
        if next_a <= next {
            ia += 1;
        }
        if next_b <= next {
            ib += 1;
        }
        prev = next;
    }
    total
}

/// Sup of |step - curve| over [0,1], taking one-sided limits at each
/// breakpoint; exact for monotone curves. The right limit of the curve is
/// probed a relative epsilon inside each cell, so piecewise-constant curves
/// sampled exactly evaluate to zero.
pub fn sup_step_vs_curve<F: Fn(f64) -> f64>(step: &StepFunction, curve: F) -> f64 {
    const EPS: f64 = 1e-12;
    let mut worst = (step.values()[0] - curve(0.0)).abs();
    for (lo, hi, v) in step.cells() {
        worst = worst.max((v - curve((lo + EPS).min(hi))).abs());
        worst = worst.max((v - curve(hi)).abs());
    }
    worst
}

/// Riemann sum of |g(u+h) - g(u)| over u in [0, 1-h]; h must be a multiple of
/// the grid spacing.
pub fn shift_modulus_l1(g: &GridFunction, h: f64) -> Result<f64> {
    let j = g.grid_size();
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("shift must be in (0,1), got {h}")));
    }
    let steps = h * j as f64;
    let k = steps.round() as usize;
    if k == 0 || (steps - k as f64).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "shift {h} is not aligned to the grid spacing 1/{j}"
        )));
    }
    let v = g.values();
    let sum: f64 = (0..j - k).map(|i| (v[i + k] - v[i]).abs()).sum();
    Ok(sum / j as f64)
}

/// Two-sample Kolmogorov-Smirnov distance by the standard merge scan.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("ks_distance requires nonempty samples".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut worst = 0.0f64;
    while ia < xs.len() && ib < ys.len() {
        let t = xs[ia].min(ys[ib]);
        while ia < xs.len() && xs[ia] <= t {
            ia += 1;
        }
        while ib < ys.len() && ys[ib] <= t {
            ib += 1;
        }
        worst = worst.max((ia as f64 / na - ib as f64 / nb).abs());
    }
    Ok(worst)
}
