//! Numerical integration: adaptive Simpson with Richardson extrapolation and
//! adaptive Gauss-Legendre, plus the bivariate standard normal cdf computed by
//! quadrature of its conditional form.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::special::{norm_cdf, norm_pdf};

const MAX_DEPTH: usize = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    simpson_step(f, a, b, fa, fm, fb, whole, tol.max(1e-15), MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    let halves = left + right;
    if depth == 0 || (halves - whole).abs() <= 15.0 * tol {
        halves + (halves - whole) / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Gauss-Legendre nodes and weights on [-1,1], by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = (n + 1) / 2;
    for i in 0..half {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            deriv = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / deriv;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rules() -> &'static ((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>)) {
    static RULES: OnceLock<((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>))> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(7), gauss_legendre(15)))
}

fn fixed_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        sum += w * f(c + h * x);
    }
    sum * h
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` with an adaptive
/// 7/15-point Gauss-Legendre pair.
pub fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (low, high) = rules();
    gl_step(f, a, b, tol.max(1e-15), low, high, MAX_DEPTH)
}

fn gl_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    low: &(Vec<f64>, Vec<f64>),
    high: &(Vec<f64>, Vec<f64>),
    depth: usize,
) -> f64 {
    let coarse = fixed_gl(f, a, b, low);
    let fine = fixed_gl(f, a, b, high);
    if depth == 0 || (fine - coarse).abs() <= tol {
        fine
    } else {
        let m = 0.5 * (a + b);
        gl_step(f, a, m, 0.5 * tol, low, high, depth - 1)
            + gl_step(f, m, b, 0.5 * tol, low, high, depth - 1)
    }
}

// Beyond this the standard normal tail is below 1e-17 and the conditional
// integral can be truncated.
const TAIL_CUTOFF: f64 = 8.5;
const BINORMAL_TOL: f64 = 1e-10;

/// P(Z1 <= x, Z2 <= y) for standard bivariate normals with correlation `rho`,
/// via Phi2(x,y;rho) = int_{-inf}^{x} phi(t) Phi((y - rho t)/sqrt(1-rho^2)) dt.
pub fn binormal_cdf(x: f64, y: f64, rho: f64) -> f64 {
    debug_assert!(rho.abs() < 1.0);
    if x <= -TAIL_CUTOFF || y <= -TAIL_CUTOFF {
        return 0.0;
    }
    if x >= TAIL_CUTOFF {
        return norm_cdf(y);
    }
    if y >= TAIL_CUTOFF {
        return norm_cdf(x);
    }
    let s = (1.0 - rho * rho).sqrt();
    let integrand = |t: f64| norm_pdf(t) * norm_cdf((y - rho * t) / s);
    adaptive_gauss_legendre(&integrand, -TAIL_CUTOFF, x, BINORMAL_TOL).clamp(0.0, 1.0)
}
