//! Adaptive Gauss–Kronrod (10/21) quadrature with interval bisection.
//!
//! The driver keeps a heap of subintervals ordered by local error estimate
//! and bisects the worst one until the global error meets the tolerance.
//! Error estimates follow the QUADPACK `qk21` rescaling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_067_155,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Tolerances and limits for the adaptive driver.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        }
    }

    /// Sum of two independent pieces.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, factor: f64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            error: self.error * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * resabs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let err = (resk - resg) * half;
    let error = rescale_error(err, resabs * half.abs(), resasc * half.abs());
    Segment { a, b, value, error }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::zero());
    }
    if b < a {
        return integrate(f, b, a, cfg).map(|r| r.scale(-1.0));
    }
    let first = kronrod21(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::Quadrature {
            estimate: first.value,
            achieved: f64::INFINITY,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut evaluations = 21;
    // Intervals too narrow to bisect further are retired here.
    let mut retired_value = 0.0;
    let mut retired_err = 0.0;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs() {
            retired_value += worst.value;
            retired_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        evaluations += 42;
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::Quadrature {
                estimate: total,
                achieved: f64::INFINITY,
            });
        }
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the incremental updates.
    let value = heap.iter().map(|s| s.value).sum::<f64>() + retired_value;
    let error = heap.iter().map(|s| s.error).sum::<f64>() + retired_err;
    let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if error > tol && error > 1e3 * f64::EPSILON * value.abs().max(cfg.abs_tol) {
        return Err(Error::Quadrature {
            estimate: value,
            achieved: error,
        });
    }
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Integral over `[a, b]` when the integrand behaves like `(x - a)^exponent`
/// at the left end, `exponent > -1`.
///
/// Substitutes `x = a + (b - a) s^m` with `m = 1/(1 + exponent)` so the
/// transformed integrand is bounded at `s = 0`.
pub fn integrate_left_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    exponent: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if exponent <= -1.0 {
        return Err(Error::Domain {
            module: "quad",
            value: exponent,
            reason: "endpoint exponent must exceed -1",
        });
    }
    let m = if exponent < 0.0 { 1.0 / (1.0 + exponent) } else { 1.0 };
    let width = b - a;
    integrate(
        |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let x = a + width * s.powf(m);
            f(x) * m * width * s.powf(m - 1.0)
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Mirror image of [`integrate_left_singular`] for a singularity at `b`.
pub fn integrate_right_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    exponent: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    integrate_left_singular(|y| f(a + b - y), a, b, exponent, cfg)
}

/// Integral over `[a, ∞)` through `x = a + t/(1 - t)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate(
        |t: f64| {
            let one_minus = 1.0 - t;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = a + t / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Integral over `[a, ∞)` of an integrand decaying like `exp(-rate x)`.
///
/// The bulk is integrated on `[a, a + 40/rate]`; the remainder, below
/// `e^{-40}` of the bulk scale, is added from a mapped semi-infinite rule.
pub fn integrate_exponential_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    rate: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(rate > 0.0) {
        return Err(Error::Domain {
            module: "quad",
            value: rate,
            reason: "exponential tail rate must be positive",
        });
    }
    let cut = a + 40.0 / rate;
    let bulk = integrate(&f, a, cut, cfg)?;
    let rest_cfg = QuadConfig {
        abs_tol: cfg.rel_tol * bulk.value.abs().max(cfg.abs_tol),
        ..*cfg
    };
    let rest = integrate_semi_infinite(&f, cut, &rest_cfg)?;
    Ok(bulk.combine(rest))
}

/// Integral over `[a, ∞)` of an integrand decaying like `x^{-power}`,
/// `power > 1`, through `t = a/x`.
pub fn integrate_power_tail<F: Fn(f64) -> f64>(f: F, a: f64, power: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(power > 1.0) || !(a > 0.0) {
        return Err(Error::Domain {
            module: "quad",
            value: power,
            reason: "power tail needs power > 1 and a positive start",
        });
    }
    // f(a/t) a / t^2 ~ t^{power-2} near t = 0.
    let g = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let v = f(a / t) * a / (t * t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let endpoint = power - 2.0;
    if endpoint < 0.0 {
        integrate_left_singular(g, 0.0, 1.0, endpoint, cfg)
    } else {
        integrate(g, 0.0, 1.0, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-14);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate(|x: f64| x.cos(), 1.0, 0.0, &QuadConfig::default()).unwrap();
        assert!((r.value + 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn algebraic_endpoint() {
        // ∫_0^1 x^{-0.9} dx = 10
        let r = integrate_left_singular(|x: f64| x.powf(-0.9), 0.0, 1.0, -0.9, &QuadConfig::default()).unwrap();
        assert!((r.value - 10.0).abs() < 1e-11, "{}", r.value);
        let r = integrate_right_singular(|x: f64| (1.0 - x).powf(-0.5), 0.0, 1.0, -0.5, &QuadConfig::default())
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tails() {
        let cfg = QuadConfig::default();
        let r = integrate_exponential_tail(|x: f64| (-2.0 * x).exp(), 1.0, 2.0, &cfg).unwrap();
        assert!((r.value - (-2f64).exp() / 2.0).abs() < 1e-15);
        let r = integrate_power_tail(|x: f64| x.powf(-2.5), 1.0, 2.5, &cfg).unwrap();
        assert!((r.value - 1.0 / 1.5).abs() < 1e-12, "{}", r.value);
        let r = integrate_semi_infinite(|x: f64| 1.0 / (1.0 + x * x), 0.0, &cfg).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn nan_integrand_is_an_error() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, &QuadConfig::default());
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
