//! Bivariate copula models: cdf evaluation, pair sampling, and the covariance
//! kernel of the tied-down Brownian sheet,
//! Cov(B(u,v), B(u',v')) = C(u ^ u', v ^ v') - C(u,v) C(u',v').

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quad::binormal_cdf;
use crate::rng::{standard_normal, uniform_open};
use crate::special::{norm_cdf, norm_qf};

/// Cap on |rho| keeping the Gaussian-family quadrature and Cholesky stable.
pub const MAX_GAUSSIAN_RHO: f64 = 0.999;

/// The closed catalog of copula families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaModel {
    /// Independence, C(u,v) = uv.
    Product,
    /// Gaussian copula with correlation rho in (-1,1), |rho| <= 0.999.
    Gaussian { rho: f64 },
    /// Clayton copula with theta > 0.
    Clayton { theta: f64 },
    /// Upper Frechet bound, C(u,v) = min(u,v).
    Comonotone,
    /// Lower Frechet bound, C(u,v) = max(u+v-1, 0).
    Countermonotone,
}

impl CopulaModel {
    pub fn gaussian(rho: f64) -> Result<Self> {
        if !rho.is_finite() || rho.abs() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "gaussian copula requires rho in (-1,1), got {rho}"
            )));
        }
        Ok(CopulaModel::Gaussian { rho: rho.clamp(-MAX_GAUSSIAN_RHO, MAX_GAUSSIAN_RHO) })
    }

    pub fn clayton(theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "clayton copula requires theta > 0, got {theta}"
            )));
        }
        Ok(CopulaModel::Clayton { theta })
    }

    /// C(u,v) for u,v in [0,1].
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let v = v.clamp(0.0, 1.0);
        match self {
            CopulaModel::Product => u * v,
            CopulaModel::Comonotone => u.min(v),
            CopulaModel::Countermonotone => (u + v - 1.0).max(0.0),
            CopulaModel::Clayton { theta } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
                }
            }
            CopulaModel::Gaussian { rho } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else if u == 1.0 {
                    v
                } else if v == 1.0 {
                    u
                } else {
                    binormal_cdf(norm_qf(u), norm_qf(v), *rho)
                }
            }
        }
    }

    /// Draws one pair (U,V) in (0,1)^2 from this copula.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            CopulaModel::Product => (uniform_open(rng), uniform_open(rng)),
            CopulaModel::Comonotone => {
                let u = uniform_open(rng);
                (u, u)
            }
            CopulaModel::Countermonotone => {
                let u = uniform_open(rng);
                (u, 1.0 - u)
            }
            CopulaModel::Gaussian { rho } => {
                let z1 = standard_normal(rng);
                let z2 = standard_normal(rng);
                let w = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
                (clamp_open(norm_cdf(z1)), clamp_open(norm_cdf(w)))
            }
            CopulaModel::Clayton { theta } => {
                // Conditional distribution method with the closed-form inverse
                // of C(v | u).
                let u = uniform_open(rng);
                let w = uniform_open(rng);
                let v = (u.powf(-theta) * (w.powf(-theta / (1.0 + theta)) - 1.0) + 1.0)
                    .powf(-1.0 / theta);
                (u, clamp_open(v))
            }
        }
    }

    /// Covariance kernel of the tied-down Brownian sheet:
    /// C(u ^ u', v ^ v') - C(u,v) C(u',v').
    pub fn sheet_covariance(&self, p1: (f64, f64), p2: (f64, f64)) -> f64 {
        let c_meet = self.cdf(p1.0.min(p2.0), p1.1.min(p2.1));
        c_meet - self.cdf(p1.0, p1.1) * self.cdf(p2.0, p2.1)
    }

    /// Cov(B1(u), B2(v)) = C(u,v) - uv, the cross-covariance of the two
    /// Brownian-bridge edges of the sheet.
    pub fn bridge_cross_covariance(&self, u: f64, v: f64) -> f64 {
        self.cdf(u, v) - u.clamp(0.0, 1.0) * v.clamp(0.0, 1.0)
    }
}

fn clamp_open(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

// Grammar: product | gaussian:rho | clayton:theta | comonotone | countermonotone

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopulaModel::Product => write!(f, "product"),
            CopulaModel::Gaussian { rho } => write!(f, "gaussian:{rho}"),
            CopulaModel::Clayton { theta } => write!(f, "clayton:{theta}"),
            CopulaModel::Comonotone => write!(f, "comonotone"),
            CopulaModel::Countermonotone => write!(f, "countermonotone"),
        }
    }
}

impl FromStr for CopulaModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r.trim())),
            None => (s.trim(), None),
        };
        match (name, rest) {
            ("product", None) => Ok(CopulaModel::Product),
            ("comonotone", None) => Ok(CopulaModel::Comonotone),
            ("countermonotone", None) => Ok(CopulaModel::Countermonotone),
            ("gaussian", Some(r)) => {
                let rho = r
                    .parse::<f64>()
                    .map_err(|_| Error::SpecParse(format!("cannot parse rho from '{r}'")))?;
                CopulaModel::gaussian(rho)
            }
            ("clayton", Some(t)) => {
                let theta = t
                    .parse::<f64>()
                    .map_err(|_| Error::SpecParse(format!("cannot parse theta from '{t}'")))?;
                CopulaModel::clayton(theta)
            }
            _ => Err(Error::SpecParse(format!("unknown copula spec '{s}'"))),
        }
    }
}
