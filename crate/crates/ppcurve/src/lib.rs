//! Percentile-percentile (P-P) curve inference.
//!
//! The population P-P curve of a pair of distributions F and G is the
//! composition R = F o Q of one cdf with the other's quantile function; its
//! empirical counterpart R_n = F_n o Q_n is a step function on [0,1]. This
//! crate builds those objects exactly, bootstraps them with multinomial
//! weights, simulates the Gaussian limit process
//! R(u) = B1(R(u)) - r(u) B2(u) on a grid, and packages seeded Monte Carlo
//! experiment drivers that compare the finite-n laws with the limit law in
//! the L1 norm.
//!
//! Entry points:
//! - [`margins`] and [`copulas`] define the model catalog,
//! - [`empirical`] builds P-P plots from data,
//! - [`bootstrap`] produces weighted plots and replicate distributions,
//! - [`limit`] samples the limit process,
//! - [`experiments`] runs the reportable Monte Carlo drivers,
//! - [`cli`] backs the `ppcurve` binary.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod bootstrap;
pub mod cli;
pub mod copulas;
pub mod empirical;
mod error;
pub mod experiments;
pub mod functionals;
pub mod io;
pub mod limit;
pub mod margins;
mod quad;
pub mod rng;
mod special;

pub use error::{Error, Result};

pub mod numeric {
    //! Shared numerical kernels: quadrature and normal special functions.
    pub use crate::quad::{adaptive_gauss_legendre, adaptive_simpson, binormal_cdf, gauss_legendre};
    pub use crate::special::{binormal_cdf_at_origin, erfc_cody, norm_cdf, norm_pdf, norm_qf};
}
