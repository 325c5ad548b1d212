//! Sturm–Liouville operators `C f = −ρ⁻¹((p f′)′ + q f)` on an interval,
//! their Wronskians, and the integrated Lagrange identity
//!
//! ```text
//! (E1 − E2) ∫_a^b f1 f2 ρ dr = W(b⁻) − W(a⁺),   W = f1 p f2′ − f1′ p f2,
//! ```
//!
//! used as an independent oracle for bilinear integrals.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extrapolate::{endpoint_limit, richardson_best, wynn_epsilon, Extrapolated};
use crate::genquad::RealFn;
use crate::quad::{
    integrate, integrate_left_singular, integrate_power_tail, integrate_right_singular, integrate_semi_infinite,
    QuadConfig, QuadResult,
};
use crate::specfun::bessel::{bessel_k_with_derivative, MAX_ARGUMENT};
use crate::specfun::gegenbauer::{gegenbauer_s, gegenbauer_s_derivative, gegenbauer_z, gegenbauer_z_derivative};

/// Coefficients `(p, q, ρ)` on `]a, b[`.
#[derive(Clone)]
pub struct SturmLiouvilleSpec {
    pub p: RealFn,
    pub q: RealFn,
    pub rho: RealFn,
    pub interval: (f64, f64),
}

impl std::fmt::Debug for SturmLiouvilleSpec {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("SturmLiouvilleSpec")
            .field("interval", &self.interval)
            .finish_non_exhaustive()
    }
}

impl SturmLiouvilleSpec {
    /// Checks `ρ > 0` and `p ≠ 0` on an interior sample grid.
    pub fn new<P, Q, R>(p: P, q: Q, rho: R, interval: (f64, f64)) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
        R: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let spec = Self {
            p: Arc::new(p),
            q: Arc::new(q),
            rho: Arc::new(rho),
            interval,
        };
        if !(interval.0 < interval.1) {
            return Err(Error::Domain {
                module: "sturm",
                value: interval.0,
                reason: "interval must satisfy a < b",
            });
        }
        for r in spec.sample_grid(33) {
            let (pv, rv) = ((spec.p)(r), (spec.rho)(r));
            if !(rv > 0.0) || pv == 0.0 || !pv.is_finite() {
                return Err(Error::Domain {
                    module: "sturm",
                    value: r,
                    reason: "need rho > 0 and p != 0 inside the interval",
                });
            }
        }
        Ok(spec)
    }

    /// Bessel operator on ]0, ∞[ with the measure 2r dr; K_α(br) has
    /// eigenvalue −b².
    pub fn bessel(alpha: f64) -> Self {
        let a2 = alpha * alpha;
        Self::new(
            |r| 2.0 * r,
            move |r| -2.0 * a2 / r,
            |r| 2.0 * r,
            (0.0, f64::INFINITY),
        )
        .expect("valid Bessel coefficients")
    }

    /// Gegenbauer operator on ]−1, 1[ with the measure (1−w²)^α d(2w).
    pub fn gegenbauer_interior(alpha: f64) -> Self {
        Self::new(
            move |w| 2.0 * (1.0 - w).powf(alpha + 1.0) * (1.0 + w).powf(alpha + 1.0),
            |_| 0.0,
            move |w| 2.0 * (1.0 - w).powf(alpha) * (1.0 + w).powf(alpha),
            (-1.0, 1.0),
        )
        .expect("valid Gegenbauer coefficients")
    }

    /// Gegenbauer operator on ]1, ∞[ with the measure (w²−1)^α d(2w).
    pub fn gegenbauer_exterior(alpha: f64) -> Self {
        Self::new(
            move |w| -2.0 * (w - 1.0).powf(alpha + 1.0) * (w + 1.0).powf(alpha + 1.0),
            |_| 0.0,
            move |w| 2.0 * (w - 1.0).powf(alpha) * (w + 1.0).powf(alpha),
            (1.0, f64::INFINITY),
        )
        .expect("valid Gegenbauer coefficients")
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.interval.0 && r < self.interval.1
    }

    /// An interior reference point.
    pub fn midpoint(&self) -> f64 {
        let (a, b) = self.interval;
        match (a.is_finite(), b.is_finite()) {
            (true, true) => 0.5 * (a + b),
            (true, false) => a + a.abs().max(1.0),
            (false, true) => b - b.abs().max(1.0),
            (false, false) => 0.0,
        }
    }

    fn sample_grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.interval;
        (1..n)
            .map(|k| {
                let t = k as f64 / n as f64;
                match (a.is_finite(), b.is_finite()) {
                    (true, true) => a + (b - a) * t,
                    (true, false) => a + t / (1.0 - t),
                    (false, true) => b - (1.0 - t) / t,
                    (false, false) => (t - 0.5) / (t * (1.0 - t)),
                }
            })
            .collect()
    }

    fn check_inside(&self, r: f64) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::Domain {
                module: "sturm",
                value: r,
                reason: "point must lie strictly inside the interval",
            })
        }
    }

    /// Distance from `r` to the nearer endpoint.
    fn clearance(&self, r: f64) -> f64 {
        (r - self.interval.0).min(self.interval.1 - r)
    }
}

/// An eigenfunction with its eigenvalue and, optionally, its derivative.
#[derive(Clone)]
pub struct Eigenpair {
    pub f: RealFn,
    pub df: Option<RealFn>,
    pub energy: f64,
}

impl std::fmt::Debug for Eigenpair {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("Eigenpair")
            .field("energy", &self.energy)
            .field("analytic_derivative", &self.df.is_some())
            .finish_non_exhaustive()
    }
}

impl Eigenpair {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, energy: f64) -> Self {
        Self {
            f: Arc::new(f),
            df: None,
            energy,
        }
    }

    pub fn with_derivative<F, D>(f: F, df: D, energy: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
            energy,
        }
    }

    /// `K_α(br)`, eigenvalue `−b²` of [`SturmLiouvilleSpec::bessel`].
    /// Arguments beyond the overflow guard of `K` return 0.
    pub fn macdonald(alpha: f64, b: f64) -> Self {
        let kd = move |r: f64| {
            if b * r > MAX_ARGUMENT {
                (0.0, 0.0)
            } else {
                bessel_k_with_derivative(alpha, b * r).unwrap_or((f64::NAN, f64::NAN))
            }
        };
        Self::with_derivative(move |r| kd(r).0, move |r| b * kd(r).1, -b * b)
    }

    /// **S**_{α,iβ}, eigenvalue `−β² − (α+½)²`.
    pub fn gegenbauer_s(alpha: f64, beta: f64) -> Self {
        let l = Complex64::new(0.0, beta);
        Self::with_derivative(
            move |w| gegenbauer_s(alpha, l, w).unwrap_or(f64::NAN),
            move |w| gegenbauer_s_derivative(alpha, l, w).unwrap_or(f64::NAN),
            -beta * beta - (alpha + 0.5).powi(2),
        )
    }

    /// **Z**_{α,λ}, eigenvalue `λ² − (α+½)²`.
    pub fn gegenbauer_z(alpha: f64, lambda: f64) -> Self {
        Self::with_derivative(
            move |w| gegenbauer_z(alpha, lambda, w).unwrap_or(f64::NAN),
            move |w| gegenbauer_z_derivative(alpha, lambda, w).unwrap_or(f64::NAN),
            lambda * lambda - (alpha + 0.5).powi(2),
        )
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

/// Relative finite-difference step: `h = STEP_SCALE · max(1, |r|)`.
pub const STEP_SCALE: f64 = 1e-5;

fn default_step(spec: &SturmLiouvilleSpec, r: f64) -> Result<f64> {
    let h = (STEP_SCALE * r.abs().max(1.0)).min(0.25 * spec.clearance(r));
    check_step(h, r)?;
    Ok(h)
}

fn check_step(h: f64, r: f64) -> Result<()> {
    if !(h > 64.0 * f64::EPSILON * r.abs().max(f64::MIN_POSITIVE)) {
        return Err(Error::StepUnderflow {
            module: "sturm",
            step: h,
            at: r,
        });
    }
    Ok(())
}

/// `C f(r)` by central differences with the default step.
pub fn apply_operator(spec: &SturmLiouvilleSpec, f: &dyn Fn(f64) -> f64, r: f64) -> Result<f64> {
    spec.check_inside(r)?;
    let h = default_step(spec, r)?;
    apply_operator_with_step(spec, f, r, h)
}

/// `C f(r)` with the conservative second difference
/// `[p(r+h/2)(f(r+h)−f(r)) − p(r−h/2)(f(r)−f(r−h))]/h²`.
pub fn apply_operator_with_step(spec: &SturmLiouvilleSpec, f: &dyn Fn(f64) -> f64, r: f64, h: f64) -> Result<f64> {
    spec.check_inside(r)?;
    check_step(h, r)?;
    if h >= spec.clearance(r) {
        return Err(Error::Domain {
            module: "sturm",
            value: h,
            reason: "finite difference stencil leaves the interval",
        });
    }
    let (fm, f0, fp) = (f(r - h), f(r), f(r + h));
    let flux = (spec.p)(r + 0.5 * h) * (fp - f0) - (spec.p)(r - 0.5 * h) * (f0 - fm);
    Ok(-(flux / (h * h) + (spec.q)(r) * f0) / (spec.rho)(r))
}

fn derivative(spec: &SturmLiouvilleSpec, e: &Eigenpair, r: f64) -> Result<f64> {
    if let Some(df) = &e.df {
        return Ok(df(r));
    }
    let h = default_step(spec, r)?;
    // fourth order central difference
    let f = &e.f;
    Ok((8.0 * (f(r + 0.5 * h) - f(r - 0.5 * h)) - (f(r + h) - f(r - h))) / (6.0 * h))
}

/// `W(r) = f1 p f2′ − f1′ p f2`.
pub fn wronskian(spec: &SturmLiouvilleSpec, f1: &Eigenpair, f2: &Eigenpair, r: f64) -> Result<f64> {
    spec.check_inside(r)?;
    let p = (spec.p)(r);
    Ok(p * (f1.eval(r) * derivative(spec, f2, r)? - derivative(spec, f1, r)? * f2.eval(r)))
}

/// Samples used for each endpoint limit.
pub const ENDPOINT_TERMS: usize = 21;

/// Limit of `W` at an endpoint along a geometric sequence of points,
/// accelerated with Wynn's epsilon algorithm.
pub fn endpoint_wronskian(spec: &SturmLiouvilleSpec, f1: &Eigenpair, f2: &Eigenpair, upper: bool) -> Result<Extrapolated> {
    let m = spec.midpoint();
    let (a, b) = spec.interval;
    let mut failure = None;
    let mut w = |r: f64| match wronskian(spec, f1, f2, r) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let e = match (upper, if upper { b } else { a }) {
        (_, x) if x.is_finite() => {
            let side = if upper { -1.0 } else { 1.0 };
            endpoint_limit(&mut w, x, 0.5 * (m - x).abs(), ENDPOINT_TERMS, side)
        }
        (up, _) => {
            let sign = if up { 1.0 } else { -1.0 };
            let scale = m.abs().max(1.0);
            let values: Vec<f64> = (0..ENDPOINT_TERMS)
                .map(|k| w(m + sign * scale * 2f64.powi(k as i32)))
                .collect();
            decaying_limit(&values)
        }
    };
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(e)
}

/// Wynn's algorithm, except that a sequence that has already fallen to
/// rounding level relative to its largest entry is taken to vanish.
fn decaying_limit(values: &[f64]) -> Extrapolated {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = values.iter().rev().take(3).fold(0.0f64, |m, v| m.max(v.abs()));
    if tail <= 1e-15 * peak || peak == 0.0 {
        return Extrapolated {
            value: 0.0,
            error: tail,
            last: values[values.len() - 3..].to_vec(),
        };
    }
    wynn_epsilon(values)
}

/// Outcome of [`greens_identity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GreenCheck {
    /// Quadrature of `∫ f1 f2 ρ`.
    pub lhs: f64,
    /// `(W(b⁻) − W(a⁺)) / (E1 − E2)`.
    pub rhs: f64,
    pub quadrature_error: f64,
    pub lower: Extrapolated,
    pub upper: Extrapolated,
}

impl GreenCheck {
    /// `|lhs − rhs| / (|lhs| + |rhs|)`, 0 when both vanish.
    pub fn relative_gap(&self) -> f64 {
        let s = self.lhs.abs() + self.rhs.abs();
        if s == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / s
        }
    }
}

/// Local power of `g` at a finite endpoint: slopes of `ln |g|` along
/// `x + d 4^{−k}`, accelerated with Wynn's algorithm.
fn endpoint_power(g: &dyn Fn(f64) -> f64, x: f64, d: f64) -> f64 {
    let mut slopes = Vec::with_capacity(9);
    for k in 0..9 {
        let h = d * 0.25f64.powi(k);
        let (v1, v2) = (g(x + h).abs(), g(x + 2.0 * h).abs());
        if v1 == 0.0 || v2 == 0.0 || !v1.is_finite() || !v2.is_finite() {
            break;
        }
        slopes.push((v2 / v1).ln() / 2f64.ln());
    }
    if slopes.is_empty() {
        return 0.0;
    }
    let e = wynn_epsilon(&slopes).value;
    if e.is_finite() { e.max(-0.99) } else { slopes[slopes.len() - 1].max(-0.99) }
}

/// `∫ g` over the interval of `spec`, split at its midpoint; endpoint
/// powers and tail decay are estimated from samples.
pub fn integrate_over(spec: &SturmLiouvilleSpec, g: &dyn Fn(f64) -> f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let m = spec.midpoint();
    let (a, b) = spec.interval;
    let lower = if a.is_finite() {
        let d = 1e-3 * (m - a);
        let e = endpoint_power(g, a, d);
        if e < 0.0 {
            integrate_left_singular(g, a, m, e, cfg)?
        } else {
            integrate(g, a, m, cfg)?
        }
    } else {
        integrate_semi_infinite(|t| g(2.0 * m - t), m, cfg)?
    };
    let upper = if b.is_finite() {
        let d = 1e-3 * (b - m);
        let e = endpoint_power(&|s| g(b - (s - m)), m, d);
        if e < 0.0 {
            integrate_right_singular(g, m, b, e, cfg)?
        } else {
            integrate(g, m, b, cfg)?
        }
    } else {
        let x = 1e3 * m.abs().max(1.0);
        let (v1, v2) = (g(x).abs(), g(2.0 * x).abs());
        let power = if v1 > 0.0 && v2 > 0.0 { (v1 / v2).ln() / 2f64.ln() } else { f64::INFINITY };
        if power.is_finite() && power < 30.0 && power > 1.0 && m > 0.0 {
            integrate_power_tail(g, m, power, cfg)?
        } else {
            integrate_semi_infinite(g, m, cfg)?
        }
    };
    Ok(lower.combine(upper))
}

/// Both sides of the integrated Lagrange identity for `E1 ≠ E2`.
pub fn greens_identity_check(spec: &SturmLiouvilleSpec, f1: &Eigenpair, f2: &Eigenpair) -> Result<GreenCheck> {
    if f1.energy == f2.energy {
        return Err(Error::Diagonal {
            formula: "greens_identity_check",
            redirect: "diagonal_integral",
        });
    }
    let g = |r: f64| {
        // mapped nodes may round onto an endpoint
        if !spec.contains(r) {
            return 0.0;
        }
        let v = f1.eval(r) * f2.eval(r);
        if v == 0.0 {
            0.0
        } else {
            v * (spec.rho)(r)
        }
    };
    let q = integrate_over(spec, &g, &QuadConfig::with_rel_tol(1e-10))?;
    let lower = endpoint_wronskian(spec, f1, f2, false)?.require(1e-7, 1e-12)?;
    let upper = endpoint_wronskian(spec, f1, f2, true)?.require(1e-7, 1e-12)?;
    Ok(GreenCheck {
        lhs: q.value,
        rhs: (upper.value - lower.value) / (f1.energy - f2.energy),
        quadrature_error: q.error,
        lower,
        upper,
    })
}

/// Number of separations used by [`diagonal_integral`].
pub const DIAGONAL_TERMS: usize = 6;

/// `∫ f² ρ` for the member of `family` at eigenvalue `energy`, as the
/// limit of the Wronskian side of the identity for the pair
/// `(E + δ, E − δ)`, `δ = 10⁻² max(1, |E|) 2^{−k}`. The quotient is even in δ.
pub fn diagonal_integral<F>(spec: &SturmLiouvilleSpec, family: F, energy: f64) -> Result<Extrapolated>
where
    F: Fn(f64) -> Result<Eigenpair>,
{
    let mut values = Vec::with_capacity(DIAGONAL_TERMS);
    for k in 0..DIAGONAL_TERMS {
        let d = 1e-2 * energy.abs().max(1.0) * 0.5f64.powi(k as i32);
        let f1 = family(energy + d)?;
        let f2 = family(energy - d)?;
        let lower = endpoint_wronskian(spec, &f1, &f2, false)?;
        let upper = endpoint_wronskian(spec, &f1, &f2, true)?;
        values.push((upper.value - lower.value) / (f1.energy - f2.energy));
    }
    richardson_best(&values, 2.0, 2.0).require(1e-6, 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn k_half(b: f64) -> Eigenpair {
        Eigenpair::new(move |r: f64| (PI / (2.0 * b * r)).sqrt() * (-b * r).exp(), -b * b)
    }

    #[test]
    fn bessel_eigen_residual() {
        let spec = SturmLiouvilleSpec::bessel(0.5);
        let f = k_half(1.0);
        let v = apply_operator_with_step(&spec, &*f.f, 1.0, 1e-4).unwrap();
        assert!((v + f.eval(1.0)).abs() < 1e-6);
        let c = apply_operator(&SturmLiouvilleSpec::bessel(0.0), &|_| 1.0, 2.0).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn residual_is_second_order() {
        let spec = SturmLiouvilleSpec::bessel(0.3);
        let f = Eigenpair::macdonald(0.3, 1.5);
        let res = |h: f64| (apply_operator_with_step(&spec, &*f.f, 0.8, h).unwrap() - f.energy * f.eval(0.8)).abs();
        let slope = (res(1e-2) / res(1e-3)).log10();
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn gegenbauer_eigen_residual() {
        let spec = SturmLiouvilleSpec::gegenbauer_interior(0.3);
        let l = Complex64::new(0.7, 0.0);
        let f = move |w: f64| gegenbauer_s(0.3, l, w).unwrap();
        let v = apply_operator_with_step(&spec, &f, 0.2, 1e-4).unwrap();
        let e = 0.49 - 0.64;
        assert!((v - e * f(0.2)).abs() < 1e-6);
    }

    #[test]
    fn endpoints_are_rejected() {
        let spec = SturmLiouvilleSpec::bessel(0.3);
        assert!(apply_operator(&spec, &|r| r, 0.0).is_err());
        assert!(wronskian(&spec, &k_half(1.0), &k_half(2.0), -1.0).is_err());
    }

    #[test]
    fn wronskian_limits_for_half_order() {
        let spec = SturmLiouvilleSpec::bessel(0.5);
        let (f1, f2) = (Eigenpair::macdonald(0.5, 2.0), Eigenpair::macdonald(0.5, 1.0));
        let lo = endpoint_wronskian(&spec, &f1, &f2, false).unwrap();
        assert!((lo.value - PI * (2f64.sqrt() - 0.5f64.sqrt())).abs() < 1e-9, "{lo:?}");
        let hi = endpoint_wronskian(&spec, &f1, &f2, true).unwrap();
        assert!(hi.value.abs() < 1e-12);
        assert_eq!(wronskian(&spec, &f1, &f1, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn green_identity_bessel() {
        let spec = SturmLiouvilleSpec::bessel(0.4);
        let c = greens_identity_check(&spec, &Eigenpair::macdonald(0.4, 2.0), &Eigenpair::macdonald(0.4, 1.0)).unwrap();
        let exact = PI * (2f64.powf(0.4) - 2f64.powf(-0.4)) / ((0.4 * PI).sin() * 3.0);
        assert!((c.lhs - exact).abs() < 1e-9 * exact, "{c:?}");
        assert!((c.rhs - exact).abs() < 1e-8 * exact, "{c:?}");
    }

    #[test]
    fn green_identity_z() {
        let spec = SturmLiouvilleSpec::gegenbauer_exterior(0.5);
        let c = greens_identity_check(&spec, &Eigenpair::gegenbauer_z(0.5, 2.0), &Eigenpair::gegenbauer_z(0.5, 1.0))
            .unwrap();
        assert!((c.lhs - 8.0 / 3.0).abs() < 1e-8, "{c:?}");
        assert!((c.rhs - 8.0 / 3.0).abs() < 1e-7, "{c:?}");
    }

    #[test]
    fn diagonal_bessel() {
        let spec = SturmLiouvilleSpec::bessel(0.5);
        let family = |e: f64| Ok(Eigenpair::macdonald(0.5, (-e).sqrt()));
        let v = diagonal_integral(&spec, family, -1.0).unwrap();
        assert!((v.value - PI / 2.0).abs() < 1e-7, "{v:?}");
    }
}
