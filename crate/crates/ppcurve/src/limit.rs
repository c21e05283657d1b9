//! Simulation of the Gaussian limit process of the P-P process on a grid.
//!
//! The process R(u) = kappa B1(R(u)) - r(u) B2(u) is built from the two
//! Brownian-bridge edges of a tied-down Brownian sheet with intensity C. The
//! joint covariance of (B1(R(u_j)), B2(u_j)) on the midpoint grid is assembled
//! from the bridge kernel s ^ t - s t and the cross kernel C(s,t) - s t, then
//! factorized by Cholesky with an escalating ridge jitter; degenerate kernels
//! (comonotone, countermonotone) are rank-deficient by construction.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::copulas::CopulaModel;
use crate::empirical::{build_pp_plot, SortedSample};
use crate::error::{Error, Result};
use crate::functionals::{l1_step_vs_curve, midpoint, GridFunction, DEFAULT_L1_TOL};
use crate::margins::{AcClass, PPCurve};
use crate::rng::{fill_standard_normal, StreamKey};

// Starting ridge; escalated by 10x on factorization failure. The starting
// value keeps the rank-deficient comonotone case's spurious noise at
// sqrt(2e-14) per coordinate, well under the 1e-6 degeneracy checks.
const JITTER_START: f64 = 1e-14;
const JITTER_MAX: f64 = 1e-8;
const FACTOR_RESIDUAL_TOL: f64 = 1e-8;

/// Specification of the limit process: population curve, copula, the scale
/// kappa on the first bridge (1 in the paired case, sqrt(rho/(1-rho)) for two
/// independent samples), and the grid size.
#[derive(Debug, Clone)]
pub struct LimitSpec {
    pub curve: PPCurve,
    pub copula: CopulaModel,
    pub kappa: f64,
    pub grid_size: usize,
}

impl LimitSpec {
    /// Paired-sample limit process (kappa = 1).
    pub fn paired(curve: PPCurve, copula: CopulaModel, grid_size: usize) -> Self {
        Self { curve, copula, kappa: 1.0, grid_size }
    }

    /// Two-independent-samples limit with n/(m+n) -> rho; the copula must be
    /// the product copula in this regime.
    pub fn two_sample(curve: PPCurve, rho: f64, grid_size: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho must be in [0,1), got {rho}")));
        }
        Ok(Self {
            curve,
            copula: CopulaModel::Product,
            kappa: (rho / (1.0 - rho)).sqrt(),
            grid_size,
        })
    }
}

/// Grid sampler for the limit process; immutable after construction.
#[derive(Debug, Clone)]
pub struct LimitSampler {
    grid: Vec<f64>,
    curve_vals: Vec<f64>,
    density_vals: Vec<f64>,
    kappa: f64,
    factor: DMatrix<f64>,
    jitter: f64,
}

/// Builds the joint sampler for (B1(R(u_j)), B2(u_j)) and the path map.
pub fn build_limit_sampler(spec: &LimitSpec) -> Result<LimitSampler> {
    if spec.curve.ac_class() != AcClass::AbsolutelyContinuous {
        return Err(Error::InvalidState(
            "limit process requires an absolutely continuous P-P curve".into(),
        ));
    }
    if spec.grid_size < 2 {
        return Err(Error::Domain("grid size must be at least 2".into()));
    }
    if !(spec.kappa >= 0.0) {
        return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {}", spec.kappa)));
    }
    if spec.kappa != 1.0 && spec.copula != CopulaModel::Product {
        return Err(Error::InvalidState(
            "two-sample rescaling (kappa != 1) is defined for the product copula only".into(),
        ));
    }
    let j = spec.grid_size;
    let grid: Vec<f64> = (0..j).map(|i| midpoint(i, j)).collect();
    let curve_vals: Vec<f64> = grid.iter().map(|u| spec.curve.eval(*u)).collect();
    let mut density_vals = Vec::with_capacity(j);
    for u in &grid {
        let r = spec.curve.density(*u)?;
        if !r.is_finite() {
            return Err(Error::Numeric(format!("density is not finite at grid point {u}")));
        }
        density_vals.push(r);
    }

    // Joint covariance of (B1(R(u_1)),...,B1(R(u_J)), B2(u_1),...,B2(u_J)).
    let bridge = |s: f64, t: f64| s.min(t) - s * t;
    let mut sigma = DMatrix::zeros(2 * j, 2 * j);
    for a in 0..j {
        for b in a..j {
            let v11 = bridge(curve_vals[a], curve_vals[b]);
            sigma[(a, b)] = v11;
            sigma[(b, a)] = v11;
            let v22 = bridge(grid[a], grid[b]);
            sigma[(j + a, j + b)] = v22;
            sigma[(j + b, j + a)] = v22;
        }
    }
    for a in 0..j {
        for b in 0..j {
            let v12 = spec.copula.bridge_cross_covariance(curve_vals[a], grid[b]);
            sigma[(a, j + b)] = v12;
            sigma[(j + b, a)] = v12;
        }
    }

    let mut jitter = JITTER_START;
    loop {
        let mut ridged = sigma.clone();
        for d in 0..2 * j {
            ridged[(d, d)] += jitter;
        }
        if let Some(chol) = ridged.clone().cholesky() {
            let factor = chol.unpack();
            let residual = (&factor * factor.transpose() - &ridged).amax();
            if residual <= FACTOR_RESIDUAL_TOL {
                return Ok(LimitSampler {
                    grid,
                    curve_vals,
                    density_vals,
                    kappa: spec.kappa,
                    factor,
                    jitter,
                });
            }
        }
        if jitter >= JITTER_MAX {
            return Err(Error::Numeric(format!(
                "Cholesky factorization failed at maximal jitter {JITTER_MAX:e}"
            )));
        }
        jitter *= 10.0;
    }
}

impl LimitSampler {
    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// R(u_j) on the grid.
    pub fn curve_values(&self) -> &[f64] {
        &self.curve_vals
    }

    /// r(u_j) on the grid.
    pub fn density_values(&self) -> &[f64] {
        &self.density_vals
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Ridge that was added to the covariance diagonal.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Maps 2J standard normals to the bridge pair (B1(R(u_j)), B2(u_j)).
    /// Deterministic; the zero vector yields the zero pair.
    pub fn bridges_from_normals(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let j = self.grid.len();
        if z.len() != 2 * j {
            return Err(Error::Domain(format!("expected {} normals, got {}", 2 * j, z.len())));
        }
        let zv = DVector::from_column_slice(z);
        let joint = &self.factor * zv;
        let b1 = joint.as_slice()[..j].to_vec();
        let b2 = joint.as_slice()[j..].to_vec();
        Ok((b1, b2))
    }

    /// kappa b1_j - r(u_j) b2_j on the grid.
    pub fn path_from_bridges(&self, b1: &[f64], b2: &[f64]) -> Result<GridFunction> {
        let j = self.grid.len();
        if b1.len() != j || b2.len() != j {
            return Err(Error::Domain("bridge length does not match the grid".into()));
        }
        GridFunction::new(
            (0..j)
                .map(|i| self.kappa * b1[i] - self.density_vals[i] * b2[i])
                .collect(),
        )
    }

    /// Draws the bridge pair from the given stream.
    pub fn sample_bridges<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
        let mut z = vec![0.0; 2 * self.grid.len()];
        fill_standard_normal(rng, &mut z);
        self.bridges_from_normals(&z).expect("matching length")
    }

    /// Draws one limit path.
    pub fn simulate_path<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> GridFunction {
        let (b1, b2) = self.sample_bridges(rng);
        self.path_from_bridges(&b1, &b2).expect("matching length")
    }

    /// Midpoint-Riemann L1 norms of `draws` independent paths, parallel over
    /// deterministic substreams of `key`.
    pub fn norm_samples(&self, draws: usize, key: StreamKey) -> Vec<f64> {
        (0..draws as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = key.replicate(i);
                self.simulate_path(&mut rng).l1_norm()
            })
            .collect()
    }
}

/// Sampling regime for the empirical oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSize {
    /// n pairs drawn from the copula.
    Paired { n: usize },
    /// m x-values and n y-values, independent (product coupling).
    Independent { m: usize, n: usize },
}

/// Brute-force empirical draw of sqrt(n) ||R_n - R||_1: generates one fresh
/// dataset through the copula and margins, builds the P-P plot, and returns
/// the scaled exact L1 statistic. Cross-checks the Gaussian sampler.
pub fn simulate_limit_oracle<R: rand::Rng + ?Sized>(
    curve: &PPCurve,
    copula: &CopulaModel,
    size: OracleSize,
    rng: &mut R,
) -> Result<f64> {
    let (x, y) = match size {
        OracleSize::Paired { n } => {
            if n < 2 {
                return Err(Error::Domain("oracle needs n >= 2".into()));
            }
            let mut x = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for _ in 0..n {
                let (u, v) = copula.sample_pair(rng);
                x.push(curve.f_model().sample(u)?);
                y.push(curve.g_model().sample(v)?);
            }
            (x, y)
        }
        OracleSize::Independent { m, n } => {
            if n < 2 || m < 2 {
                return Err(Error::Domain("oracle needs m, n >= 2".into()));
            }
            if *copula != CopulaModel::Product {
                return Err(Error::InvalidState(
                    "independent-samples oracle is defined for the product copula".into(),
                ));
            }
            let x = (0..m)
                .map(|_| curve.f_model().sample(crate::rng::uniform_open(rng)))
                .collect::<Result<Vec<f64>>>()?;
            let y = (0..n)
                .map(|_| curve.g_model().sample(crate::rng::uniform_open(rng)))
                .collect::<Result<Vec<f64>>>()?;
            (x, y)
        }
    };
    let n = y.len() as f64;
    let plot = build_pp_plot(&SortedSample::new(x)?, &SortedSample::new(y)?);
    Ok(n.sqrt() * l1_step_vs_curve(&plot, curve, DEFAULT_L1_TOL))
}
