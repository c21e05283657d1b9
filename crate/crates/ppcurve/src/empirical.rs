//! Empirical cdfs, empirical quantile functions, and P-P plot construction.
//!
//! The P-P plot R_n(u) = F_n(Q_n(u)) is piecewise constant on the cells
//! ((k-1)/n, k/n], so a [`StepFunction`] stores breakpoints in (0,1] with one
//! value per cell and evaluates left-continuously; the value at 0 is the right
//! limit, matching the endpoint convention of the population curve.

use crate::error::{Error, Result};

/// An ascending sample of real values.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sorts and stores the sample. Rejects empty and non-finite data.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sample must be nonempty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("sample contains non-finite values".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { values })
    }

    // Never empty by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Empirical cdf: (1/n) #{i : x_i <= x}, right-continuous.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.values.partition_point(|v| *v <= x);
        k as f64 / self.values.len() as f64
    }

    /// Empirical quantile function: the order statistic with 1-based index
    /// ceil(n u), i.e. inf{y : G_n(y) >= u}.
    pub fn qf(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "empirical quantile argument must be in (0,1), got {u}"
            )));
        }
        let n = self.values.len();
        let idx = (n as f64 * u).ceil() as usize;
        Ok(self.values[idx.clamp(1, n) - 1])
    }
}

/// Right-limited-at-0, piecewise-constant function on [0,1] with cells
/// (b_{k-1}, b_k]; the last breakpoint is always 1.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Domain(
                "step function needs one value per breakpoint and at least one cell".into(),
            ));
        }
        if breakpoints[0] <= 0.0 || !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain(
                "breakpoints must be strictly increasing within (0,1]".into(),
            ));
        }
        if *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::Domain("last breakpoint must equal 1".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("step values must be finite".into()));
        }
        Ok(Self { breakpoints, values })
    }

    /// A constant function on [0,1].
    pub fn constant(value: f64) -> Self {
        Self { breakpoints: vec![1.0], values: vec![value] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    /// Point evaluation; `eval(0)` is the right limit (first cell value).
    pub fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.values[0];
        }
        let k = self.breakpoints.partition_point(|b| *b < u);
        self.values[k.min(self.values.len() - 1)]
    }

    /// Iterates cells as (lo, hi, value) with lo exclusive, hi inclusive.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let los = std::iter::once(0.0).chain(self.breakpoints.iter().copied());
        los.zip(self.breakpoints.iter().copied())
            .zip(self.values.iter().copied())
            .map(|((lo, hi), v)| (lo, hi, v))
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Left-continuous version u -> sup_{v in (0,u)} of the function.
    ///
    /// Under the (lo, hi] cell convention a nondecreasing step function is
    /// already left-continuous, so the modification is the identity; the
    /// operation validates monotonicity and exists as the representation of
    /// the left-continuous quantile-function construction.
    pub fn left_continuous_version(&self) -> Result<StepFunction> {
        if !self.is_nondecreasing() {
            return Err(Error::Domain(
                "left-continuous version requires a nondecreasing step function".into(),
            ));
        }
        Ok(self.clone())
    }

    /// The left-continuous empirical cdf of a sample with values in [0,1],
    /// represented on this cell convention. Together with one-sided limits at
    /// breakpoints this carries the full sup-distance information of the
    /// ordinary (right-continuous) empirical cdf.
    pub fn left_continuous_ecdf(sample: &SortedSample) -> Result<StepFunction> {
        let vals = sample.values();
        if vals[0] < 0.0 || *vals.last().unwrap() > 1.0 {
            return Err(Error::Domain("ecdf step requires values in [0,1]".into()));
        }
        let n = vals.len() as f64;
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        let mut below = 0usize; // count of sample points < current breakpoint
        let mut i = 0;
        while i < vals.len() {
            let x = vals[i];
            let mut ties = 0;
            while i < vals.len() && vals[i] == x {
                ties += 1;
                i += 1;
            }
            if x > 0.0 {
                breakpoints.push(x);
                values.push(below as f64 / n);
            }
            below += ties;
        }
        if breakpoints.last() != Some(&1.0) {
            breakpoints.push(1.0);
            values.push(below as f64 / n);
        }
        StepFunction::new(breakpoints, values)
    }
}

/// Builds the P-P plot R_n(u) = F_m(Q_n(u)) from an x-sample of size m and a
/// y-sample of size n: breakpoints k/n with cell values F_m(Y_(k)).
///
/// The paired case passes the two coordinates of the pairs; the construction
/// only needs the marginal samples.
pub fn build_pp_plot(x_sample: &SortedSample, y_sample: &SortedSample) -> StepFunction {
    let n = y_sample.len();
    let mut breakpoints = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for (k, y) in y_sample.values().iter().enumerate() {
        breakpoints.push((k + 1) as f64 / n as f64);
        values.push(x_sample.cdf(*y));
    }
    // k/n is exactly 1 at k = n, so construction cannot fail.
    StepFunction::new(breakpoints, values).expect("valid staircase")
}
