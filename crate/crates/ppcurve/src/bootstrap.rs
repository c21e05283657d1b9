//! Efron multinomial bootstrap of the P-P plot.
//!
//! Weights W_n ~ Multinomial(n; 1/n, ..., 1/n) are drawn exactly by sequential
//! conditional binomials, the weighted empirical functions
//! F_n*(z) = (1/n) sum W_i 1(X_i <= z) are composed into the bootstrap P-P
//! plot R_n* = F_n* o Q_n*, and replicate statistics sqrt(n) ||R_n* - R_n||_1
//! are produced in parallel over deterministic substreams.

use rand::Rng;
use rayon::prelude::*;

use crate::empirical::{build_pp_plot, SortedSample, StepFunction};
use crate::error::{Error, Result};
use crate::functionals::{l1_step_vs_curve, l1_step_vs_step, DEFAULT_L1_TOL};
use crate::margins::PPCurve;
use crate::rng::{uniform_open, StreamKey};

/// Multinomial resampling weights; nonnegative integers summing to n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapWeights {
    weights: Vec<u32>,
}

impl BootstrapWeights {
    /// Validates that the weights sum to their length.
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        let n = weights.len() as u64;
        if n == 0 {
            return Err(Error::Domain("weights must be nonempty".into()));
        }
        let total: u64 = weights.iter().map(|w| *w as u64).sum();
        if total != n {
            return Err(Error::Domain(format!("weights sum to {total}, expected {n}")));
        }
        Ok(Self { weights })
    }

    /// The all-ones vector: the bootstrap degenerates to the sample itself.
    pub fn all_ones(n: usize) -> Self {
        Self { weights: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.weights
    }
}

/// Draws W ~ Binomial(trials, p) by inverse-cdf walk along the pmf recurrence.
fn binomial_inverse_cdf<R: Rng + ?Sized>(rng: &mut R, trials: u32, p: f64) -> u32 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    let u = uniform_open(rng);
    let q = 1.0 - p;
    let ratio = p / q;
    let mut pmf = q.powi(trials as i32);
    let mut cdf = pmf;
    let mut k = 0u32;
    while cdf < u && k < trials {
        pmf *= ratio * (trials - k) as f64 / (k + 1) as f64;
        cdf += pmf;
        k += 1;
    }
    k
}

/// Exact Multinomial(n; 1/n, ..., 1/n) via sequential conditional binomials.
pub fn draw_multinomial_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BootstrapWeights> {
    if n == 0 {
        return Err(Error::Domain("cannot draw weights for n = 0".into()));
    }
    let mut weights = vec![0u32; n];
    let mut remaining = n as u32;
    for i in 0..n {
        let categories_left = (n - i) as f64;
        let w = if n - i == 1 {
            remaining
        } else {
            binomial_inverse_cdf(rng, remaining, 1.0 / categories_left)
        };
        weights[i] = w;
        remaining -= w;
        if remaining == 0 {
            break;
        }
    }
    debug_assert_eq!(weights.iter().map(|w| *w as u64).sum::<u64>(), n as u64);
    Ok(BootstrapWeights { weights })
}

// Sample values paired with their resampling weights, sorted by value, with
// cumulative weights for O(log n) cdf evaluation.
struct WeightedSorted {
    values: Vec<f64>,
    weights: Vec<u32>,
    cum_weights: Vec<u64>,
    total: f64,
}

impl WeightedSorted {
    fn new(values: &[f64], weights: &BootstrapWeights) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::Domain(format!(
                "{} weights for {} sample values",
                weights.len(),
                values.len()
            )));
        }
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|a, b| values[*a].partial_cmp(&values[*b]).unwrap());
        let sorted_values: Vec<f64> = idx.iter().map(|i| values[*i]).collect();
        let sorted_weights: Vec<u32> = idx.iter().map(|i| weights.as_slice()[*i]).collect();
        let mut cum_weights = Vec::with_capacity(sorted_weights.len());
        let mut acc = 0u64;
        for w in &sorted_weights {
            acc += *w as u64;
            cum_weights.push(acc);
        }
        Ok(Self {
            values: sorted_values,
            weights: sorted_weights,
            cum_weights,
            total: values.len() as f64,
        })
    }

    /// Weighted empirical cdf (1/n) sum W_i 1(x_i <= z).
    fn cdf(&self, z: f64) -> f64 {
        let k = self.values.partition_point(|v| *v <= z);
        if k == 0 {
            0.0
        } else {
            self.cum_weights[k - 1] as f64 / self.total
        }
    }
}

/// Bootstrap P-P plot R_n*(u) = F_n*(Q_n*(u)) from raw (unsorted) samples and
/// their weight vectors; the paired mode passes the same weights twice.
pub fn bootstrap_pp_plot(
    x_values: &[f64],
    y_values: &[f64],
    wx: &BootstrapWeights,
    wy: &BootstrapWeights,
) -> Result<StepFunction> {
    let fx = WeightedSorted::new(x_values, wx)?;
    let gy = WeightedSorted::new(y_values, wy)?;
    let n = gy.total;

    // Breakpoints of R_n* sit at the jump locations of G_n* pushed through
    // Q_n*: cumulative weight c_l/n at the l-th positive-weight order value.
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    let mut cum: u64 = 0;
    let mut i = 0;
    while i < gy.values.len() {
        let y = gy.values[i];
        let mut w: u64 = 0;
        while i < gy.values.len() && gy.values[i] == y {
            w += gy.weights[i] as u64;
            i += 1;
        }
        if w > 0 {
            cum += w;
            breakpoints.push(cum as f64 / n);
            values.push(fx.cdf(y));
        }
    }
    if let Some(last) = breakpoints.last_mut() {
        // cum == n exactly; pin against division rounding.
        *last = 1.0;
    }
    StepFunction::new(breakpoints, values)
}

/// Whether the plot is resampled with pairs (one weight vector) or with two
/// independent weight vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResampleMode {
    Paired,
    Independent,
}

/// Statistic computed from each bootstrap replicate.
#[derive(Debug, Clone, Copy)]
pub enum ReplicateStatistic<'a> {
    /// sqrt(n) ||R_n* - R_n||_1
    L1ToPlot,
    /// sqrt(n) ||R_n* - R||_1 for a supplied population curve.
    L1ToCurve(&'a PPCurve),
}

/// Weight generation: the multinomial draw, or the all-ones determinism hook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSource {
    Multinomial,
    AllOnes,
}

/// B bootstrap replicate statistics, parallel over replicates and
/// deterministic in the stream key; replicate i uses `key.replicate(i)`.
pub fn bootstrap_replicates(
    x_values: &[f64],
    y_values: &[f64],
    mode: ResampleMode,
    b: usize,
    statistic: ReplicateStatistic,
    key: StreamKey,
) -> Result<Vec<f64>> {
    bootstrap_replicates_with(x_values, y_values, mode, b, statistic, key, WeightSource::Multinomial)
}

/// As [`bootstrap_replicates`] with an explicit weight source (test hook).
pub fn bootstrap_replicates_with(
    x_values: &[f64],
    y_values: &[f64],
    mode: ResampleMode,
    b: usize,
    statistic: ReplicateStatistic,
    key: StreamKey,
    source: WeightSource,
) -> Result<Vec<f64>> {
    if b == 0 {
        return Err(Error::Domain("need at least one bootstrap replicate".into()));
    }
    if x_values.is_empty() || y_values.is_empty() {
        return Err(Error::Domain("bootstrap requires nonempty samples".into()));
    }
    if mode == ResampleMode::Paired && x_values.len() != y_values.len() {
        return Err(Error::Domain(format!(
            "paired bootstrap requires equal sizes, got {} and {}",
            x_values.len(),
            y_values.len()
        )));
    }
    let base_plot = build_pp_plot(
        &SortedSample::new(x_values.to_vec())?,
        &SortedSample::new(y_values.to_vec())?,
    );
    let scale = (y_values.len() as f64).sqrt();

    (0..b as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = key.replicate(rep);
            let (wx, wy) = match (mode, source) {
                (ResampleMode::Paired, WeightSource::Multinomial) => {
                    let w = draw_multinomial_weights(y_values.len(), &mut rng)?;
                    (w.clone(), w)
                }
                (ResampleMode::Independent, WeightSource::Multinomial) => {
                    let wx = draw_multinomial_weights(x_values.len(), &mut rng)?;
                    let wy = draw_multinomial_weights(y_values.len(), &mut rng)?;
                    (wx, wy)
                }
                (_, WeightSource::AllOnes) => (
                    BootstrapWeights::all_ones(x_values.len()),
                    BootstrapWeights::all_ones(y_values.len()),
                ),
            };
            let star = bootstrap_pp_plot(x_values, y_values, &wx, &wy)?;
            let value = match statistic {
                ReplicateStatistic::L1ToPlot => l1_step_vs_step(&star, &base_plot),
                ReplicateStatistic::L1ToCurve(curve) => {
                    l1_step_vs_curve(&star, curve, DEFAULT_L1_TOL)
                }
            };
            Ok(scale * value)
        })
        .collect()
}
