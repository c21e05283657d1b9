//! Standard-normal pdf, cdf and quantile function.
//!
//! The cdf uses Cody's rational Chebyshev approximation to erf/erfc
//! (relative error below ~1.2e-16 in double precision). The quantile starts
//! from Acklam's approximation and applies one Halley refinement against the
//! cdf, so `norm_cdf(norm_qf(u))` round-trips to machine precision.

use std::f64::consts::{PI, SQRT_2};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const ONE_OVER_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal cdf.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc_cody(-x / SQRT_2)
}

/// Standard normal quantile, defined for u in (0,1).
pub fn norm_qf(u: f64) -> f64 {
    debug_assert!(u > 0.0 && u < 1.0);
    let x = acklam_qf(u);
    // One Halley step against the high-precision cdf.
    let e = norm_cdf(x) - u;
    let adj = e * SQRT_2PI * (0.5 * x * x).exp();
    x - adj / (1.0 + 0.5 * x * adj)
}

// Cody (1969) coefficients for erf on |x| <= 0.46875.
const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_6e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_5e3,
    1.857_777_061_846_031_5e-1,
];
const ERF_B: [f64; 4] = [
    2.360_129_095_234_412_1e1,
    2.440_246_379_344_441_7e2,
    1.282_616_526_077_372_3e3,
    2.844_236_833_439_170_6e3,
];
// erfc on 0.46875 < x <= 4.
const ERF_C: [f64; 9] = [
    5.641_884_969_886_700_9e-1,
    8.883_149_794_388_375_9e0,
    6.611_919_063_714_163e1,
    2.986_351_381_974_001_3e2,
    8.819_522_212_417_691e2,
    1.712_047_612_634_070_6e3,
    2.051_078_377_826_071_5e3,
    1.230_339_354_797_997_2e3,
    2.153_115_354_744_038_5e-8,
];
const ERF_D: [f64; 8] = [
    1.574_492_611_070_983_5e1,
    1.176_939_508_913_125e2,
    5.371_811_018_620_098_6e2,
    1.621_389_574_566_690_2e3,
    3.290_799_235_733_459_7e3,
    4.362_619_090_143_247e3,
    3.439_367_674_143_721_6e3,
    1.230_339_354_803_749_4e3,
];
// erfc on x > 4.
const ERF_P: [f64; 6] = [
    3.053_266_349_612_323_4e-1,
    3.603_448_999_498_044_4e-1,
    1.257_817_261_112_292_4e-1,
    1.608_378_514_874_227_7e-2,
    6.587_491_615_298_378e-4,
    1.631_538_713_730_209_8e-2,
];
const ERF_Q: [f64; 5] = [
    2.568_520_192_289_822_4e0,
    1.872_952_849_923_460_4e0,
    5.279_051_029_514_284e-1,
    6.051_834_131_244_132e-2,
    2.335_204_976_268_691_8e-3,
];

/// Complementary error function, Cody's CALERF scheme.
pub fn erfc_cody(x: f64) -> f64 {
    let y = x.abs();
    let result = if y <= 0.46875 {
        let ysq = y * y;
        let mut xnum = ERF_A[4] * ysq;
        let mut xden = ysq;
        for i in 0..3 {
            xnum = (xnum + ERF_A[i]) * ysq;
            xden = (xden + ERF_B[i]) * ysq;
        }
        return 1.0 - x * (xnum + ERF_A[3]) / (xden + ERF_B[3]);
    } else if y <= 4.0 {
        let mut xnum = ERF_C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + ERF_C[i]) * y;
            xden = (xden + ERF_D[i]) * y;
        }
        let r = (xnum + ERF_C[7]) / (xden + ERF_D[7]);
        scaled_by_exp(y, r)
    } else if y < 26.6 {
        let ysq = 1.0 / (y * y);
        let mut xnum = ERF_P[5] * ysq;
        let mut xden = ysq;
        for i in 0..4 {
            xnum = (xnum + ERF_P[i]) * ysq;
            xden = (xden + ERF_Q[i]) * ysq;
        }
        let mut r = ysq * (xnum + ERF_P[4]) / (xden + ERF_Q[4]);
        r = (ONE_OVER_SQRT_PI - r) / y;
        scaled_by_exp(y, r)
    } else {
        0.0
    };
    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

// exp(-y^2) * r computed as exp(-ysq^2) * exp(-del) with ysq = trunc(16 y)/16
// to avoid cancellation in the exponent.
fn scaled_by_exp(y: f64, r: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

// Acklam's normal quantile approximation (relative error ~1.15e-9).
fn acklam_qf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239e0,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838e0,
        -2.549_732_539_343_734e0,
        4.374_664_141_464_968e0,
        2.938_163_982_698_783e0,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996e0,
        3.754_408_661_907_416e0,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Exact identity Phi2(0,0;rho) = 1/4 + asin(rho)/(2 pi), used as a quadrature oracle.
pub fn binormal_cdf_at_origin(rho: f64) -> f64 {
    0.25 + rho.asin() / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with mpmath at 40 digits.
    const CDF_CASES: [(f64, f64); 9] = [
        (-8.0, 6.220_960_574_271_784e-16),
        (-3.0, 1.349_898_031_630_094_5e-3),
        (-1.0, 0.158_655_253_931_457_05),
        (-0.5, 0.308_537_538_725_986_9),
        (0.0, 0.5),
        (0.3, 0.617_911_422_188_952_64),
        (1.0, 0.841_344_746_068_543),
        (2.5, 0.993_790_334_674_223_86),
        (6.0, 0.999_999_999_013_412_35),
    ];

    const QF_CASES: [(f64, f64); 6] = [
        (1e-12, -7.034_483_825_301_132),
        (0.001, -3.090_232_306_167_813_5),
        (0.025, -1.959_963_984_540_054_2),
        (0.3, -0.524_400_512_708_040_8),
        (0.5, 0.0),
        (0.999999, 4.753_424_308_822_899),
    ];

    #[test]
    fn cdf_matches_reference() {
        for (x, want) in CDF_CASES {
            let got = norm_cdf(x);
            assert!(
                (got - want).abs() <= 1e-15 + 1e-14 * want.abs(),
                "cdf({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn qf_matches_reference() {
        for (u, want) in QF_CASES {
            let got = norm_qf(u);
            assert!(
                (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                "qf({u}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn qf_cdf_round_trip_near_machine_precision() {
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let back = norm_cdf(norm_qf(u));
            assert!((back - u).abs() < 5e-16, "u={u} back={back}");
        }
        // Lower tail keeps relative precision, upper tail absolute precision.
        for &u in &[1e-10_f64, 1e-6] {
            let back = norm_cdf(norm_qf(u));
            assert!((back / u - 1.0).abs() < 1e-12, "u={u} back={back}");
        }
        for &u in &[1.0 - 1e-10, 1.0 - 1e-6] {
            let back = norm_cdf(norm_qf(u));
            assert!((back - u).abs() < 5e-15, "u={u} back={back}");
        }
    }
}
