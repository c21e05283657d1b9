//! Parametric univariate margins and the population P-P curve.
//!
//! A [`MarginModel`] supplies a cdf F, the left-continuous quantile function
//! Q(u) = inf{x : F(x) >= u}, an optional density, the list of atoms, and
//! inverse-transform sampling. A [`PPCurve`] composes two margins into
//! R(u) = F(Q(u)) with the limit convention at the endpoints and carries an
//! absolute-continuity classification over the closed family catalog.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::{norm_cdf, norm_pdf, norm_qf};

const PROB_SUM_TOL: f64 = 1e-12;

/// The closed catalog of margin families.
#[derive(Debug, Clone, PartialEq)]
pub enum MarginFamily {
    Uniform { a: f64, b: f64 },
    Normal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    DiscreteAtoms { points: Vec<f64>, probs: Vec<f64> },
    MixtureAtomUniform { atom_point: f64, atom_mass: f64, a: f64, b: f64 },
}

/// A validated univariate distribution model. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginModel {
    family: MarginFamily,
    /// Cumulative probabilities for `DiscreteAtoms`, cached at construction.
    cum: Vec<f64>,
}

impl MarginModel {
    pub fn new(family: MarginFamily) -> Result<Self> {
        match &family {
            MarginFamily::Uniform { a, b } => {
                if !(b > a) || !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "uniform requires b > a, got a={a}, b={b}"
                    )));
                }
            }
            MarginFamily::Normal { mu, sigma } => {
                if !(sigma > &0.0) || !mu.is_finite() || !sigma.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "normal requires sigma > 0, got mu={mu}, sigma={sigma}"
                    )));
                }
            }
            MarginFamily::Exponential { rate } => {
                if !(rate > &0.0) || !rate.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "exponential requires rate > 0, got {rate}"
                    )));
                }
            }
            MarginFamily::DiscreteAtoms { points, probs } => {
                if points.is_empty() || points.len() != probs.len() {
                    return Err(Error::InvalidParameter(
                        "atoms require equal nonzero numbers of points and probs".into(),
                    ));
                }
                if !points.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::InvalidParameter(
                        "atom points must be strictly increasing".into(),
                    ));
                }
                if probs.iter().any(|p| !(*p > 0.0)) {
                    return Err(Error::InvalidParameter("atom probs must be > 0".into()));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > PROB_SUM_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "atom probs must sum to 1 within {PROB_SUM_TOL}, got {total}"
                    )));
                }
            }
            MarginFamily::MixtureAtomUniform { atom_point, atom_mass, a, b } => {
                if !(b > a) || !atom_point.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "atomunif requires b > a, got a={a}, b={b}"
                    )));
                }
                if !(*atom_mass > 0.0 && *atom_mass < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "atomunif requires 0 < atom_mass < 1, got {atom_mass}"
                    )));
                }
            }
        }
        let cum = match &family {
            MarginFamily::DiscreteAtoms { probs, .. } => {
                let mut cum = Vec::with_capacity(probs.len());
                let mut acc = 0.0;
                for p in probs {
                    acc += p;
                    cum.push(acc);
                }
                // Pin the final cumulative to exactly 1 so qf is total on (0,1).
                if let Some(last) = cum.last_mut() {
                    *last = 1.0;
                }
                cum
            }
            _ => Vec::new(),
        };
        Ok(Self { family, cum })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(MarginFamily::Uniform { a, b })
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(MarginFamily::Normal { mu, sigma })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(MarginFamily::Exponential { rate })
    }

    pub fn discrete_atoms(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        Self::new(MarginFamily::DiscreteAtoms { points, probs })
    }

    pub fn mixture_atom_uniform(atom_point: f64, atom_mass: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(MarginFamily::MixtureAtomUniform { atom_point, atom_mass, a, b })
    }

    pub fn family(&self) -> &MarginFamily {
        &self.family
    }

    /// P(X <= x); right-continuous in x.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.family {
            MarginFamily::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            MarginFamily::Normal { mu, sigma } => norm_cdf((x - mu) / sigma),
            MarginFamily::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            MarginFamily::DiscreteAtoms { points, .. } => {
                let k = points.partition_point(|p| *p <= x);
                if k == 0 {
                    0.0
                } else {
                    self.cum[k - 1]
                }
            }
            MarginFamily::MixtureAtomUniform { atom_point, atom_mass, a, b } => {
                let cont = ((x - a) / (b - a)).clamp(0.0, 1.0);
                (1.0 - atom_mass) * cont + if x >= *atom_point { *atom_mass } else { 0.0 }
            }
        }
    }

    /// Left-continuous quantile function inf{x : F(x) >= u}, u in (0,1).
    pub fn qf(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile argument must be in (0,1), got {u}")));
        }
        Ok(match &self.family {
            MarginFamily::Uniform { a, b } => a + u * (b - a),
            MarginFamily::Normal { mu, sigma } => mu + sigma * norm_qf(u),
            MarginFamily::Exponential { rate } => -(-u).ln_1p() / rate,
            MarginFamily::DiscreteAtoms { points, .. } => {
                let k = self.cum.partition_point(|c| *c < u);
                points[k.min(points.len() - 1)]
            }
            MarginFamily::MixtureAtomUniform { atom_point, atom_mass, a, b } => {
                let p = *atom_mass;
                let unif_at_atom = ((atom_point - a) / (b - a)).clamp(0.0, 1.0);
                let lo = (1.0 - p) * unif_at_atom;
                if u <= lo {
                    a + (u / (1.0 - p)) * (b - a)
                } else if u <= lo + p {
                    *atom_point
                } else {
                    a + ((u - p) / (1.0 - p)) * (b - a)
                }
            }
        })
    }

    /// Lebesgue density at `x`, if the model has one there. Returns `None`
    /// at atoms and for purely atomic families.
    pub fn density_at(&self, x: f64) -> Option<f64> {
        match &self.family {
            MarginFamily::Uniform { a, b } => {
                Some(if x >= *a && x <= *b { 1.0 / (b - a) } else { 0.0 })
            }
            MarginFamily::Normal { mu, sigma } => Some(norm_pdf((x - mu) / sigma) / sigma),
            MarginFamily::Exponential { rate } => {
                Some(if x >= 0.0 { rate * (-rate * x).exp() } else { 0.0 })
            }
            MarginFamily::DiscreteAtoms { .. } => None,
            MarginFamily::MixtureAtomUniform { atom_point, atom_mass, a, b } => {
                if x == *atom_point {
                    None
                } else if x >= *a && x <= *b {
                    Some((1.0 - atom_mass) / (b - a))
                } else {
                    Some(0.0)
                }
            }
        }
    }

    /// Atom locations and masses.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match &self.family {
            MarginFamily::DiscreteAtoms { points, probs } => {
                points.iter().copied().zip(probs.iter().copied()).collect()
            }
            MarginFamily::MixtureAtomUniform { atom_point, atom_mass, .. } => {
                vec![(*atom_point, *atom_mass)]
            }
            _ => Vec::new(),
        }
    }

    /// Open interior of the support, for the continuous families.
    fn support_interior(&self) -> Option<(f64, f64)> {
        match &self.family {
            MarginFamily::Uniform { a, b } => Some((*a, *b)),
            MarginFamily::Normal { .. } => Some((f64::NEG_INFINITY, f64::INFINITY)),
            MarginFamily::Exponential { .. } => Some((0.0, f64::INFINITY)),
            _ => None,
        }
    }

    fn is_continuous_family(&self) -> bool {
        matches!(
            self.family,
            MarginFamily::Uniform { .. }
                | MarginFamily::Normal { .. }
                | MarginFamily::Exponential { .. }
        )
    }

    /// Inverse-transform sample: equals `qf(u)` by construction.
    pub fn sample(&self, u: f64) -> Result<f64> {
        self.qf(u)
    }
}

/// Absolute-continuity classification of a P-P curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcClass {
    AbsolutelyContinuous,
    NotAbsolutelyContinuous,
    Unknown,
}

/// Rule table over the catalog deciding whether R = F o Q is absolutely
/// continuous. Combinations outside the table return `Unknown`, never a guess.
pub fn classify_ac(f_model: &MarginModel, g_model: &MarginModel) -> AcClass {
    use MarginFamily::*;

    // G purely atomic: R is a step function taking the values F(y_j); it is
    // absolutely continuous exactly when that step function is constant.
    if let DiscreteAtoms { points, .. } = &g_model.family {
        let first = f_model.cdf(points[0]);
        let last = f_model.cdf(*points.last().unwrap());
        return if first == last {
            AcClass::AbsolutelyContinuous
        } else {
            AcClass::NotAbsolutelyContinuous
        };
    }

    if g_model.is_continuous_family() {
        if f_model.is_continuous_family() {
            // Q is continuous with positive density along its range and F has
            // a density, so the monotone composition is absolutely continuous.
            return AcClass::AbsolutelyContinuous;
        }
        // F carries atoms: an atom strictly inside the support of G is crossed
        // by Q and becomes a jump of R.
        let (lo, hi) = g_model.support_interior().expect("continuous family");
        let crossed = f_model.atoms().iter().any(|(x, _)| *x > lo && *x < hi);
        return if crossed {
            AcClass::NotAbsolutelyContinuous
        } else {
            AcClass::AbsolutelyContinuous
        };
    }

    if let MixtureAtomUniform { atom_point, a, b, .. } = &g_model.family {
        if f_model.is_continuous_family() {
            if *atom_point >= *a && *atom_point <= *b {
                // Support of G is [a,b]; Q has no gap to jump across.
                return AcClass::AbsolutelyContinuous;
            }
            // Q jumps across the gap between the uniform part and the atom.
            let (gap_lo, gap_hi) = if *atom_point > *b {
                (*b, *atom_point)
            } else {
                (*atom_point, *a)
            };
            return if f_model.cdf(gap_lo) == f_model.cdf(gap_hi) {
                AcClass::AbsolutelyContinuous
            } else {
                AcClass::NotAbsolutelyContinuous
            };
        }
    }

    AcClass::Unknown
}

// Endpoint limits are evaluated this close to 0 and 1. Tight enough that the
// stored values are exact to ~1e-12 for the catalog, where the limits exist
// by construction.
const ENDPOINT_EPS: f64 = 1e-12;

/// The population P-P curve R(u) = F(Q(u)) with the endpoint limit convention.
#[derive(Debug, Clone, PartialEq)]
pub struct PPCurve {
    f_model: MarginModel,
    g_model: MarginModel,
    endpoint_lo: f64,
    endpoint_hi: f64,
    ac_class: AcClass,
}

impl PPCurve {
    pub fn new(f_model: MarginModel, g_model: MarginModel) -> Self {
        let ac_class = classify_ac(&f_model, &g_model);
        let endpoint_lo = raw_eval(&f_model, &g_model, ENDPOINT_EPS);
        let endpoint_hi = raw_eval(&f_model, &g_model, 1.0 - ENDPOINT_EPS);
        Self { f_model, g_model, endpoint_lo, endpoint_hi, ac_class }
    }

    pub fn f_model(&self) -> &MarginModel {
        &self.f_model
    }

    pub fn g_model(&self) -> &MarginModel {
        &self.g_model
    }

    pub fn ac_class(&self) -> AcClass {
        self.ac_class
    }

    pub fn endpoint_lo(&self) -> f64 {
        self.endpoint_lo
    }

    pub fn endpoint_hi(&self) -> f64 {
        self.endpoint_hi
    }

    /// R(u) for u in [0,1]; the endpoints return the stored limits.
    pub fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            self.endpoint_lo
        } else if u >= 1.0 {
            self.endpoint_hi
        } else {
            raw_eval(&self.f_model, &self.g_model, u)
        }
    }

    /// Density r(u) of an absolutely continuous curve: the analytic ratio
    /// f(Q(u))/g(Q(u)) where both densities exist with g > 0, a central
    /// finite difference otherwise, and 1 at 0/0 points.
    pub fn density(&self, u: f64) -> Result<f64> {
        if self.ac_class != AcClass::AbsolutelyContinuous {
            return Err(Error::InvalidState(
                "density requested for a curve that is not absolutely continuous".into(),
            ));
        }
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("density argument must be in (0,1), got {u}")));
        }
        let q = self.g_model.qf(u)?;
        if let (Some(fd), Some(gd)) = (self.f_model.density_at(q), self.g_model.density_at(q)) {
            if gd > 0.0 {
                return Ok(fd / gd);
            }
            if fd == 0.0 && gd == 0.0 {
                // Null-set convention.
                return Ok(1.0);
            }
        }
        Ok(self.finite_difference_density(u))
    }

    fn finite_difference_density(&self, u: f64) -> f64 {
        const H: f64 = 1e-5;
        if u < H {
            (self.eval(u + H) - self.eval(u)) / H
        } else if u > 1.0 - H {
            (self.eval(u) - self.eval(u - H)) / H
        } else {
            (self.eval(u + H) - self.eval(u - H)) / (2.0 * H)
        }
    }
}

fn raw_eval(f_model: &MarginModel, g_model: &MarginModel, u: f64) -> f64 {
    let q = g_model.qf(u).expect("u in (0,1)");
    f_model.cdf(q)
}

// ---------------------------------------------------------------------------
// Specification-string grammar:
//   uniform:a,b | normal:mu,sigma | exponential:rate
//   atoms:x1=p1,x2=p2,... | atomunif:atom_point,atom_mass,a,b
// ---------------------------------------------------------------------------

impl fmt::Display for MarginModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            MarginFamily::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            MarginFamily::Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            MarginFamily::Exponential { rate } => write!(f, "exponential:{rate}"),
            MarginFamily::DiscreteAtoms { points, probs } => {
                write!(f, "atoms:")?;
                for (i, (x, p)) in points.iter().zip(probs).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}={p}")?;
                }
                Ok(())
            }
            MarginFamily::MixtureAtomUniform { atom_point, atom_mass, a, b } => {
                write!(f, "atomunif:{atom_point},{atom_mass},{a},{b}")
            }
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::SpecParse(format!("cannot parse {what} from '{s}'")))
}

impl FromStr for MarginModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (s.trim(), ""),
        };
        match name {
            "uniform" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::SpecParse(format!("uniform expects a,b, got '{rest}'")));
                }
                MarginModel::uniform(parse_f64(parts[0], "a")?, parse_f64(parts[1], "b")?)
            }
            "normal" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 2 {
                    return Err(Error::SpecParse(format!("normal expects mu,sigma, got '{rest}'")));
                }
                MarginModel::normal(parse_f64(parts[0], "mu")?, parse_f64(parts[1], "sigma")?)
            }
            "exponential" => MarginModel::exponential(parse_f64(rest, "rate")?),
            "atoms" => {
                let mut points = Vec::new();
                let mut probs = Vec::new();
                for item in rest.split(',') {
                    let (x, p) = item.split_once('=').ok_or_else(|| {
                        Error::SpecParse(format!("atoms expects x=p entries, got '{item}'"))
                    })?;
                    points.push(parse_f64(x, "atom point")?);
                    probs.push(parse_f64(p, "atom prob")?);
                }
                MarginModel::discrete_atoms(points, probs)
            }
            "atomunif" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 4 {
                    return Err(Error::SpecParse(format!(
                        "atomunif expects atom_point,atom_mass,a,b, got '{rest}'"
                    )));
                }
                MarginModel::mixture_atom_uniform(
                    parse_f64(parts[0], "atom_point")?,
                    parse_f64(parts[1], "atom_mass")?,
                    parse_f64(parts[2], "a")?,
                    parse_f64(parts[3], "b")?,
                )
            }
            other => Err(Error::SpecParse(format!("unknown margin family '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bernoulli_halves() -> MarginModel {
        MarginModel::discrete_atoms(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(MarginModel::uniform(1.0, 1.0).is_err());
        assert!(MarginModel::normal(0.0, 0.0).is_err());
        assert!(MarginModel::exponential(-1.0).is_err());
        assert!(MarginModel::discrete_atoms(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(MarginModel::discrete_atoms(vec![0.0, 1.0], vec![0.6, 0.5]).is_err());
        assert!(MarginModel::mixture_atom_uniform(0.5, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(MarginModel::uniform(0.0, 1.0).unwrap().cdf(0.3), 0.3);
        assert_eq!(MarginModel::normal(0.0, 1.0).unwrap().cdf(0.0), 0.5);
        assert_eq!(bernoulli_halves().cdf(0.0), 0.5);
    }

    #[test]
    fn qf_examples() {
        assert_eq!(MarginModel::uniform(0.0, 1.0).unwrap().qf(0.25).unwrap(), 0.25);
        assert_eq!(bernoulli_halves().qf(0.5).unwrap(), 0.0);
        // Invert 1 - exp(-x) = u analytically at u = 1 - e^{-1}.
        let e = MarginModel::exponential(1.0).unwrap();
        let u = 1.0 - (-1.0f64).exp();
        assert!((e.qf(u).unwrap() - 1.0).abs() < 1e-14);
        assert!(e.qf(0.0).is_err());
        assert!(e.qf(1.0).is_err());
    }

    #[test]
    fn sample_equals_qf() {
        let m = MarginModel::uniform(0.0, 1.0).unwrap();
        assert_eq!(m.sample(0.7).unwrap(), 0.7);
        assert_eq!(bernoulli_halves().sample(0.9).unwrap(), 1.0);
        assert_eq!(MarginModel::normal(0.0, 1.0).unwrap().sample(0.5).unwrap(), 0.0);
    }

    #[test]
    fn mixture_qf_branches() {
        // Atom of mass 0.3 at 0.5 inside Uniform(0,1).
        let m = MarginModel::mixture_atom_uniform(0.5, 0.3, 0.0, 1.0).unwrap();
        // lo = 0.7 * 0.5 = 0.35
        assert!((m.qf(0.14).unwrap() - 0.2).abs() < 1e-14);
        assert_eq!(m.qf(0.36).unwrap(), 0.5);
        assert_eq!(m.qf(0.64).unwrap(), 0.5);
        assert!((m.qf(0.79).unwrap() - 0.7).abs() < 1e-14);
        // Atom above the uniform support.
        let m = MarginModel::mixture_atom_uniform(2.0, 0.25, 0.0, 1.0).unwrap();
        assert!((m.qf(0.375).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(m.qf(0.8).unwrap(), 2.0);
    }

    #[test]
    fn cdf_limits_on_a_grid() {
        for m in [
            MarginModel::uniform(-1.0, 3.0).unwrap(),
            MarginModel::normal(0.5, 2.0).unwrap(),
            MarginModel::exponential(0.7).unwrap(),
            bernoulli_halves(),
            MarginModel::mixture_atom_uniform(0.5, 0.3, 0.0, 1.0).unwrap(),
        ] {
            assert!(m.cdf(-1e10) < 1e-12);
            assert!(m.cdf(1e10) > 1.0 - 1e-12);
            let mut prev = f64::NEG_INFINITY;
            for i in -100..=100 {
                let x = i as f64 / 10.0;
                let c = m.cdf(x);
                assert!(c >= prev - 1e-15, "cdf nondecreasing at {x}");
                assert!((0.0..=1.0).contains(&c));
                prev = c;
            }
        }
    }

    #[test]
    fn pp_curve_examples() {
        let uu = PPCurve::new(
            MarginModel::uniform(0.0, 1.0).unwrap(),
            MarginModel::uniform(0.0, 1.0).unwrap(),
        );
        assert!((uu.eval(0.4) - 0.4).abs() < 1e-15);

        let atoms = PPCurve::new(MarginModel::uniform(0.0, 1.0).unwrap(), bernoulli_halves());
        assert_eq!(atoms.eval(0.25), 0.0);
        assert_eq!(atoms.eval(0.75), 1.0);
    }

    #[test]
    fn pp_curve_endpoints_are_stable_limits() {
        // Pairs whose endpoint limits settle fast enough for the 1e-6 check;
        // compositions like exponential-through-normal approach their limits
        // slower than 1e-6 between u = 1e-6 and 1e-9 and are excluded.
        let cases = [
            ("uniform:0,1", "uniform:0,1"),
            ("normal:0,1", "normal:1,2"),
            ("uniform:0,1", "exponential:1"),
            ("uniform:0,2", "uniform:0,1"),
            ("uniform:0,1", "atoms:0=0.5,1=0.5"),
        ];
        for (fs, gs) in cases {
            let f: MarginModel = fs.parse().unwrap();
            let g: MarginModel = gs.parse().unwrap();
            let curve = PPCurve::new(f.clone(), g.clone());
            let near = raw_eval(&f, &g, 1e-6);
            let nearer = raw_eval(&f, &g, 1e-9);
            assert!((near - nearer).abs() < 1e-6, "{fs}/{gs} lower endpoint");
            assert!((curve.endpoint_lo() - nearer).abs() < 1e-6);
            let near = raw_eval(&f, &g, 1.0 - 1e-6);
            let nearer = raw_eval(&f, &g, 1.0 - 1e-9);
            assert!((near - nearer).abs() < 1e-6, "{fs}/{gs} upper endpoint");
            assert!((curve.endpoint_hi() - nearer).abs() < 1e-6);
        }
    }

    #[test]
    fn density_examples() {
        let uu = PPCurve::new(
            MarginModel::uniform(0.0, 1.0).unwrap(),
            MarginModel::uniform(0.0, 1.0).unwrap(),
        );
        assert_eq!(uu.density(0.5).unwrap(), 1.0);

        // r(0.5) = phi(1 + qf(0.5)) / phi(qf(0.5)) = e^{-1/2}.
        let nn = PPCurve::new(
            MarginModel::normal(0.0, 1.0).unwrap(),
            MarginModel::normal(1.0, 1.0).unwrap(),
        );
        assert!((nn.density(0.5).unwrap() - 0.606_530_659_712_633_4).abs() < 1e-12);

        // Q(u) = 2u so r = 2 on (0, 1/2).
        let u_wide = PPCurve::new(
            MarginModel::uniform(0.0, 1.0).unwrap(),
            MarginModel::uniform(0.0, 2.0).unwrap(),
        );
        assert_eq!(u_wide.density(0.25).unwrap(), 2.0);
        assert_eq!(u_wide.density(0.75).unwrap(), 0.0);

        let step = PPCurve::new(
            MarginModel::uniform(0.0, 1.0).unwrap(),
            MarginModel::discrete_atoms(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(),
        );
        assert!(step.density(0.5).is_err());
    }

    #[test]
    fn finite_difference_density_used_for_atomic_f() {
        // F purely atomic with atoms outside supp(G): R constant, r = 0.
        let f = MarginModel::discrete_atoms(vec![-5.0, 9.0], vec![0.5, 0.5]).unwrap();
        let g = MarginModel::uniform(0.0, 1.0).unwrap();
        let curve = PPCurve::new(f, g);
        assert_eq!(curve.ac_class(), AcClass::AbsolutelyContinuous);
        assert_eq!(curve.density(0.3).unwrap(), 0.0);
    }

    #[test]
    fn classify_ac_rule_table() {
        let n01: MarginModel = "normal:0,1".parse().unwrap();
        let n12: MarginModel = "normal:1,2".parse().unwrap();
        let u01: MarginModel = "uniform:0,1".parse().unwrap();
        let bern = bernoulli_halves();
        let mix: MarginModel = "atomunif:0.5,0.3,0,1".parse().unwrap();

        assert_eq!(classify_ac(&n01, &n12), AcClass::AbsolutelyContinuous);
        assert_eq!(classify_ac(&u01, &bern), AcClass::NotAbsolutelyContinuous);
        assert_eq!(classify_ac(&mix, &u01), AcClass::NotAbsolutelyContinuous);

        // Atoms mapped to a flat region of F: R is constant, hence AC.
        let far_atoms = MarginModel::discrete_atoms(vec![5.0, 6.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(classify_ac(&u01, &far_atoms), AcClass::AbsolutelyContinuous);

        // Atom of F outside supp(G) interior.
        let mix_out: MarginModel = "atomunif:2,0.25,0,1".parse().unwrap();
        assert_eq!(classify_ac(&mix_out, &u01), AcClass::AbsolutelyContinuous);
        assert_eq!(classify_ac(&mix_out, &n01), AcClass::NotAbsolutelyContinuous);

        // G mixture with the atom inside its uniform support: Q continuous.
        assert_eq!(classify_ac(&n01, &mix), AcClass::AbsolutelyContinuous);
        // G mixture with a gap that F straddles.
        assert_eq!(classify_ac(&n01, &mix_out), AcClass::NotAbsolutelyContinuous);
        // Both sides atomic against a mixture: outside the table.
        assert_eq!(classify_ac(&bern, &mix), AcClass::Unknown);
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "uniform:0,1",
            "normal:0,1",
            "exponential:1",
            "atoms:0=0.5,1=0.5",
            "atomunif:0.5,0.3,0,1",
        ] {
            let m: MarginModel = s.parse().unwrap();
            let printed = m.to_string();
            let back: MarginModel = printed.parse().unwrap();
            assert_eq!(m, back, "{s} -> {printed}");
        }
        assert!("gamma:1,2".parse::<MarginModel>().is_err());
        assert!("uniform:1".parse::<MarginModel>().is_err());
    }

    proptest! {
        // Galois connection: qf(u) <= x  <=>  u <= cdf(x). For the continuous
        // families the equivalence is only tested away from the measure-zero
        // boundary |u - cdf(x)| ~ ulp where the approximation error decides.
        #[test]
        fn galois_property_continuous(u in 1e-9f64..1.0, x in -50.0f64..50.0) {
            prop_assume!(u < 1.0);
            for m in [
                MarginModel::uniform(-2.0, 3.0).unwrap(),
                MarginModel::normal(0.3, 1.7).unwrap(),
                MarginModel::exponential(0.8).unwrap(),
            ] {
                let c = m.cdf(x);
                if (u - c).abs() > 1e-12 {
                    let q = m.qf(u).unwrap();
                    prop_assert_eq!(q <= x, u <= c, "family {:?} u={} x={}", m.family(), u, x);
                }
            }
        }

        #[test]
        fn galois_property_atomic(u in 1e-9f64..1.0, x in -3.0f64..3.0) {
            prop_assume!(u < 1.0);
            // Purely atomic: partial sums are the only cdf values, exact test.
            let m = MarginModel::discrete_atoms(vec![-1.0, 0.25, 2.0], vec![0.25, 0.5, 0.25]).unwrap();
            let q = m.qf(u).unwrap();
            let c = m.cdf(x);
            prop_assert_eq!(q <= x, u <= c, "u={} x={}", u, x);
            // Mixture: the uniform part shares the continuous-family ulp caveat.
            let m = MarginModel::mixture_atom_uniform(0.5, 0.3, 0.0, 1.0).unwrap();
            let c = m.cdf(x);
            if (u - c).abs() > 1e-12 {
                let q = m.qf(u).unwrap();
                prop_assert_eq!(q <= x, u <= c, "mixture u={} x={}", u, x);
            }
        }

        #[test]
        fn pp_curve_eval_is_nondecreasing(mut grid in proptest::collection::vec(1e-6f64..1.0, 2..40)) {
            grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let pairs = [
                ("normal:0,1", "normal:1,2"),
                ("uniform:0,1", "exponential:1"),
                ("uniform:0,1", "atoms:0=0.5,1=0.5"),
                ("atomunif:0.5,0.3,0,1", "uniform:0,1"),
            ];
            for (fs, gs) in pairs {
                let curve = PPCurve::new(fs.parse().unwrap(), gs.parse().unwrap());
                let mut prev = curve.eval(0.0);
                prop_assert!((0.0..=1.0).contains(&prev));
                for &u in &grid {
                    let v = curve.eval(u);
                    prop_assert!(v >= prev - 1e-15, "{fs}/{gs} at u={u}");
                    prop_assert!((0.0..=1.0).contains(&v));
                    prev = v;
                }
            }
        }

        // Integral of the density recovers the increment of R.
        #[test]
        fn density_integrates_to_curve_increment(a in 0.02f64..0.45, b in 0.55f64..0.98) {
            let pairs = [
                ("normal:0,1", "normal:1,1"),
                ("uniform:0,1", "uniform:0,2"),
                ("exponential:1", "exponential:2"),
                ("normal:0,1", "uniform:0,1"),
            ];
            for (fs, gs) in pairs {
                let curve = PPCurve::new(fs.parse().unwrap(), gs.parse().unwrap());
                let r = |u: f64| curve.density(u).unwrap();
                let integral = crate::quad::adaptive_simpson(&r, a, b, 1e-9);
                let want = curve.eval(b) - curve.eval(a);
                prop_assert!((integral - want).abs() < 1e-6, "{fs}/{gs}: {integral} vs {want}");
            }
        }
    }

    // Finite-difference check of the composition derivative: the directional
    // derivative of R along a smooth perturbation alpha is r * alpha in L1.
    #[test]
    fn composition_derivative_finite_difference() {
        let alpha = |u: f64| (std::f64::consts::PI * u).sin();
        for (fs, gs) in [("normal:0,1", "normal:1,1"), ("uniform:0,1", "uniform:0,2")] {
            let curve = PPCurve::new(fs.parse::<MarginModel>().unwrap(), gs.parse().unwrap());
            let mut errs = Vec::new();
            for t in [1e-2, 1e-3] {
                let j = 4096;
                let mut acc = 0.0;
                for i in 0..j {
                    let u = (i as f64 + 0.5) / j as f64;
                    let shifted = (u + t * alpha(u)).clamp(0.0, 1.0);
                    let fd = (curve.eval(shifted) - curve.eval(u)) / t;
                    acc += (fd - curve.density(u).unwrap() * alpha(u)).abs();
                }
                errs.push(acc / j as f64);
            }
            assert!(errs[1] < errs[0], "{fs}/{gs}: L1 error not decreasing {errs:?}");
            assert!(errs[1] < 0.05, "{fs}/{gs}: L1 error {} too large", errs[1]);
        }
    }
}
