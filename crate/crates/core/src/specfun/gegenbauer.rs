//! Gegenbauer functions **S**_{α,λ} and **Z**_{α,λ}.
//!
//! **S** is normalized at the regular point w = 1,
//!
//! ```text
//! S_{α,λ}(w) = Σ_j (½+α+λ)_j (½+α−λ)_j / (Γ(α+1+j) j!) ((1−w)/2)^j
//!            = F(½+α+λ, ½+α−λ; α+1; (1−w)/2) / Γ(α+1),
//! ```
//!
//! and **Z** at infinity,
//!
//! ```text
//! Z_{α,λ}(w) = (w+1)^{−½−α−λ} / Γ(λ+1) Σ_j (½+λ)_j (½+λ+α)_j / ((1+2λ)_j j!) (2/(1+w))^j.
//! ```
//!
//! Near the opposite singular point (w = −1 for **S**, w = 1 for **Z**) the
//! series at the origin converges slowly, and the connection formula of
//! [`hyp2f1`](crate::specfun::hyp2f1) is used instead. The connection
//! formula is a difference of two growing pieces when |λ| times the
//! geodesic distance is large; there the direct series (all terms positive
//! for the parameters in use) is summed instead.
//!
//! All evaluators accept a `log_scale` and return `value · e^{log_scale}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extrapolate::limit_symmetric;
use crate::specfun::gamma::ln_gamma_complex;
use crate::specfun::hyp2f1::{self, Component, Truncation};

/// Evaluation knobs shared by the Gegenbauer routines.
#[derive(Debug, Clone, Copy)]
pub struct GegenbauerConfig {
    /// w* above which **Z** is summed directly at infinity.
    pub crossover: f64,
    /// Relative truncation tolerance of the series.
    pub tol: f64,
    /// Upper bound on the number of series terms.
    pub max_terms: usize,
    /// Largest `4|λ|√t` for which the connection formula is trusted.
    pub cancellation_limit: f64,
}

impl Default for GegenbauerConfig {
    fn default() -> Self {
        Self {
            crossover: 1.5,
            tol: 1e-16,
            max_terms: hyp2f1::DEFAULT_MAX_TERMS,
            cancellation_limit: 8.0,
        }
    }
}

/// Evaluation route for **Z**.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZRoute {
    /// Pick automatically.
    Auto,
    /// Series at infinity in 2/(1+w).
    Direct,
    /// Connection formula at w = 1.
    Connection,
    /// Whipple transform through **S**_{λ,α}.
    Whipple,
}

const NEAR_INTEGER: f64 = 1e-4;
const NEAR_INTEGER_STEP: f64 = 4e-4;

fn half() -> f64 {
    0.5
}

/// λ must be real or purely imaginary for the result to be real.
fn check_realness(lambda: Complex64) -> Result<()> {
    if lambda.re != 0.0 && lambda.im != 0.0 {
        return Err(Error::Domain {
            module: "specfun.gegenbauer",
            value: lambda.im,
            reason: "lambda must be real or purely imaginary",
        });
    }
    Ok(())
}

/// Distance of `x` from the nearest integer.
fn integer_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Runs `f(α)` directly, or, when α sits just off an integer, as a
/// symmetric Richardson limit in α so that the connection formula is never
/// evaluated where 1/sin(πα) destroys digits.
fn guard_near_integer<F: FnMut(f64) -> Result<f64>>(alpha: f64, needs_connection: bool, mut f: F) -> Result<f64> {
    let d = integer_distance(alpha);
    if !needs_connection || d == 0.0 || d >= NEAR_INTEGER || d < hyp2f1::INTEGER_SNAP {
        return f(alpha);
    }
    let mut err = None;
    let e = limit_symmetric(
        |a| match f(a) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        alpha,
        NEAR_INTEGER_STEP,
        3,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(e.value),
    }
}

/// **S**_{α,λ}(w) for complex λ; the raw complex series value.
pub fn gegenbauer_s_complex(alpha: f64, lambda: Complex64, w: f64, log_scale: f64, cfg: &GegenbauerConfig) -> Result<Complex64> {
    if !(w > -1.0 && w < 3.0) {
        return Err(Error::Domain {
            module: "specfun.gegenbauer_s",
            value: w,
            reason: "S is evaluated on (-1, 3)",
        });
    }
    let a = Complex64::new(half() + alpha, 0.0) + lambda;
    let b = Complex64::new(half() + alpha, 0.0) - lambda;
    let c = alpha + 1.0;
    let x = (1.0 - w) / 2.0;
    let pref = Complex64::new(log_scale, 0.0);
    let t = (1.0 + w) / 2.0;
    let use_connection = x > 0.5 && 4.0 * lambda.norm() * t.sqrt() <= cfg.cancellation_limit;
    if use_connection {
        hyp2f1::connection_reg(a, b, c, t, pref, cfg.tol)
    } else {
        hyp2f1::series_reg(a, b, c, x, pref, cfg.tol, cfg.max_terms)
    }
}

/// **S**_{α,λ}(w)·e^{log_scale} for λ real or purely imaginary.
pub fn gegenbauer_s_scaled(alpha: f64, lambda: Complex64, w: f64, log_scale: f64, cfg: &GegenbauerConfig) -> Result<f64> {
    check_realness(lambda)?;
    let x = (1.0 - w) / 2.0;
    let needs_connection = x > 0.5;
    guard_near_integer(alpha, needs_connection, |a| {
        Ok(gegenbauer_s_complex(a, lambda, w, log_scale, cfg)?.re)
    })
}

/// **S**_{α,λ}(w) with default settings.
pub fn gegenbauer_s(alpha: f64, lambda: Complex64, w: f64) -> Result<f64> {
    gegenbauer_s_scaled(alpha, lambda, w, 0.0, &GegenbauerConfig::default())
}

/// d/dw **S**_{α,λ}(w) = −½ (½+α+λ)(½+α−λ) **S**_{α+1,λ}(w).
pub fn gegenbauer_s_derivative(alpha: f64, lambda: Complex64, w: f64) -> Result<f64> {
    let factor = (Complex64::new(half() + alpha, 0.0) + lambda) * (Complex64::new(half() + alpha, 0.0) - lambda);
    Ok(-0.5 * factor.re * gegenbauer_s(alpha + 1.0, lambda, w)?)
}

fn check_z_args(lambda: f64, w: f64) -> Result<()> {
    if !(w > 1.0) {
        return Err(Error::Domain {
            module: "specfun.gegenbauer_z",
            value: w,
            reason: "Z is evaluated on w > 1",
        });
    }
    if lambda + 1.0 <= 0.0 && lambda == lambda.round() {
        return Err(Error::Pole {
            module: "specfun.gegenbauer_z",
            location: lambda + 1.0,
        });
    }
    if !(1.0 + 2.0 * lambda > 0.0) {
        return Err(Error::Domain {
            module: "specfun.gegenbauer_z",
            value: lambda,
            reason: "Z needs Re(lambda) > -1/2",
        });
    }
    Ok(())
}

/// ln of the prefactor Γ(1+2λ)/(Γ(λ+1)(w+1)^{½+α+λ}).
fn z_log_prefactor(alpha: f64, lambda: f64, w: f64) -> f64 {
    ln_gamma_complex(Complex64::new(1.0 + 2.0 * lambda, 0.0)).re
        - ln_gamma_complex(Complex64::new(lambda + 1.0, 0.0)).re
        - (0.5 + alpha + lambda) * (w + 1.0).ln()
}

fn z_route_value(alpha: f64, lambda: f64, w: f64, log_scale: f64, route: ZRoute, cfg: &GegenbauerConfig) -> Result<f64> {
    let a = Complex64::new(0.5 + lambda, 0.0);
    let b = Complex64::new(0.5 + lambda + alpha, 0.0);
    let c = 1.0 + 2.0 * lambda;
    let pref = Complex64::new(log_scale + z_log_prefactor(alpha, lambda, w), 0.0);
    let z = 2.0 / (1.0 + w);
    let t = (w - 1.0) / (w + 1.0);
    match route {
        ZRoute::Direct => Ok(hyp2f1::series_reg(a, b, c, z, pref, cfg.tol, cfg.max_terms)?.re),
        ZRoute::Connection => Ok(hyp2f1::connection_reg(a, b, c, t, pref, cfg.tol)?.re),
        ZRoute::Whipple => gegenbauer_z_whipple(alpha, lambda, w, log_scale, cfg),
        ZRoute::Auto => {
            let route = if w >= cfg.crossover || 4.0 * lambda.abs() * t.sqrt() > cfg.cancellation_limit {
                ZRoute::Direct
            } else {
                ZRoute::Connection
            };
            z_route_value(alpha, lambda, w, log_scale, route, cfg)
        }
    }
}

/// **Z**_{α,λ}(w)·e^{log_scale} along an explicit route.
pub fn gegenbauer_z_route(alpha: f64, lambda: f64, w: f64, log_scale: f64, route: ZRoute, cfg: &GegenbauerConfig) -> Result<f64> {
    check_z_args(lambda, w)?;
    let t = (w - 1.0) / (w + 1.0);
    let needs_connection = match route {
        ZRoute::Connection => true,
        ZRoute::Auto => w < cfg.crossover && 4.0 * lambda.abs() * t.sqrt() <= cfg.cancellation_limit,
        _ => false,
    };
    guard_near_integer(alpha, needs_connection, |a| z_route_value(a, lambda, w, log_scale, route, cfg))
}

/// **Z**_{α,λ}(w)·e^{log_scale}.
pub fn gegenbauer_z_scaled(alpha: f64, lambda: f64, w: f64, log_scale: f64, cfg: &GegenbauerConfig) -> Result<f64> {
    gegenbauer_z_route(alpha, lambda, w, log_scale, ZRoute::Auto, cfg)
}

/// **Z**_{α,λ}(w) with default settings.
pub fn gegenbauer_z(alpha: f64, lambda: f64, w: f64) -> Result<f64> {
    gegenbauer_z_scaled(alpha, lambda, w, 0.0, &GegenbauerConfig::default())
}

/// d/dw **Z**_{α,λ}(w) = −(½+α+λ) **Z**_{α+1,λ}(w).
pub fn gegenbauer_z_derivative(alpha: f64, lambda: f64, w: f64) -> Result<f64> {
    Ok(-(0.5 + alpha + lambda) * gegenbauer_z(alpha + 1.0, lambda, w)?)
}

/// Whipple image point w/√(w²−1).
pub fn whipple_argument(w: f64) -> f64 {
    w / ((w - 1.0) * (w + 1.0)).sqrt()
}

/// **Z**_{α,λ}(w) = (w²−1)^{−¼−α/2−λ/2} **S**_{λ,α}(w/√(w²−1)).
///
/// The image point must stay inside the disc of the **S** series, which
/// restricts this route to w > √(9/8).
pub fn gegenbauer_z_whipple(alpha: f64, lambda: f64, w: f64, log_scale: f64, cfg: &GegenbauerConfig) -> Result<f64> {
    check_z_args(lambda, w)?;
    let v = whipple_argument(w);
    if v >= 3.0 {
        return Err(Error::Domain {
            module: "specfun.gegenbauer_z",
            value: w,
            reason: "Whipple route needs w > sqrt(9/8)",
        });
    }
    let ln_w2 = ((w - 1.0) * (w + 1.0)).ln();
    let scale = log_scale + (-0.25 - alpha / 2.0 - lambda / 2.0) * ln_w2;
    let x = (1.0 - v) / 2.0;
    let a = Complex64::new(0.5 + lambda + alpha, 0.0);
    let b = Complex64::new(0.5 + lambda - alpha, 0.0);
    Ok(hyp2f1::series_reg(a, b, lambda + 1.0, x, Complex64::new(scale, 0.0), cfg.tol, cfg.max_terms)?.re)
}

/// **S**_{α,λ}(w) = (w²−1)^{−¼−α/2−λ/2} **Z**_{λ,α}(w/√(w²−1)) for 1 < w < 3.
pub fn gegenbauer_s_whipple(alpha: f64, lambda: f64, w: f64, cfg: &GegenbauerConfig) -> Result<f64> {
    if !(w > 1.0 && w < 3.0) {
        return Err(Error::Domain {
            module: "specfun.gegenbauer_s",
            value: w,
            reason: "Whipple route for S needs 1 < w < 3",
        });
    }
    let v = whipple_argument(w);
    let ln_w2 = ((w - 1.0) * (w + 1.0)).ln();
    gegenbauer_z_scaled(lambda, alpha, v, (-0.25 - alpha / 2.0 - lambda / 2.0) * ln_w2, cfg)
}

/// Connection components of **S**_{α,λ}·e^{log_scale} at w = −1 in the
/// variable t = (1+w)/2.
pub fn s_endpoint_components(alpha: f64, lambda: Complex64, log_scale: f64, trunc: Truncation) -> Result<Vec<Component>> {
    let a = Complex64::new(0.5 + alpha, 0.0) + lambda;
    let b = Complex64::new(0.5 + alpha, 0.0) - lambda;
    hyp2f1::connection_components(a, b, alpha + 1.0, Complex64::new(log_scale, 0.0), trunc)
}

/// Connection components of the hypergeometric factor of **Z** at w = 1,
/// in t = (w−1)/(w+1); the full function is
/// `2^{−½−α−λ} ((w+1)/2)^{−½−α−λ} Σ components(t)`, with every constant
/// (including `2^{−½−α−λ}` and `e^{log_scale}`) kept inside the components.
pub fn z_endpoint_components(alpha: f64, lambda: f64, log_scale: f64, trunc: Truncation) -> Result<Vec<Component>> {
    let a = Complex64::new(0.5 + lambda, 0.0);
    let b = Complex64::new(0.5 + lambda + alpha, 0.0);
    let c = 1.0 + 2.0 * lambda;
    let lead = log_scale + ln_gamma_complex(Complex64::new(c, 0.0)).re
        - ln_gamma_complex(Complex64::new(lambda + 1.0, 0.0)).re;
    let lead = lead - (0.5 + alpha + lambda) * std::f64::consts::LN_2;
    hyp2f1::connection_components(a, b, c, Complex64::new(lead, 0.0), trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::rgamma;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn im(b: f64) -> Complex64 {
        Complex64::new(0.0, b)
    }

    #[test]
    fn s_at_regular_point() {
        for &(al, l) in &[(0.3, im(0.7)), (-0.4, Complex64::new(1.2, 0.0)), (2.0, im(5.0))] {
            let v = gegenbauer_s(al, l, 1.0).unwrap();
            assert!(rel(v, rgamma(al + 1.0)) < 1e-14);
        }
    }

    #[test]
    fn s_domain() {
        assert!(gegenbauer_s(0.3, im(1.0), -1.0).is_err());
        assert!(gegenbauer_s(0.3, im(1.0), 3.0).is_err());
        assert!(gegenbauer_s(0.3, Complex64::new(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn z_domain() {
        assert!(gegenbauer_z(0.3, 1.0, 1.0).is_err());
        assert!(matches!(gegenbauer_z(0.3, -1.0, 2.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn z_half_integer_order_is_elementary() {
        // Z_{1/2,λ}(cosh r) ∝ e^{-λ r}/sinh r, with the normalization fixed
        // by the λ/Γ(λ+1) asymptotics: Z = 2^{λ+1/2} e^{-λr} / (√π ... )
        // Compare shapes through ratios at two radii.
        let lam = 1.3;
        let f = |r: f64| gegenbauer_z(0.5, lam, r.cosh()).unwrap() * r.sinh() * (lam * r).exp();
        let base = f(0.05);
        for &r in &[0.2, 0.6, 1.0, 2.5] {
            assert!(rel(f(r), base) < 1e-12, "r={r}");
        }
    }

    #[test]
    fn routes_agree_across_the_crossover() {
        let cfg = GegenbauerConfig::default();
        for &(al, l) in &[(0.3, 0.7), (1.3, 1.2), (-0.4, 2.0), (1.0, 0.5), (0.5, 3.0)] {
            for &w in &[1.2, 1.49, 1.51, 2.0] {
                let d = gegenbauer_z_route(al, l, w, 0.0, ZRoute::Direct, &cfg).unwrap();
                if w < cfg.crossover {
                    let c = gegenbauer_z_route(al, l, w, 0.0, ZRoute::Connection, &cfg).unwrap();
                    assert!(rel(c, d) < 1e-11, "al={al} l={l} w={w}: {c} vs {d}");
                }
                let wh = gegenbauer_z_route(al, l, w, 0.0, ZRoute::Whipple, &cfg).unwrap();
                assert!(rel(wh, d) < 1e-11, "al={al} l={l} w={w}: {wh} vs {d}");
            }
        }
    }

    #[test]
    fn near_integer_order_is_continuous() {
        let cfg = GegenbauerConfig::default();
        let at = gegenbauer_z_route(1.0, 0.8, 1.05, 0.0, ZRoute::Connection, &cfg).unwrap();
        let near = gegenbauer_z_route(1.0 + 1e-7, 0.8, 1.05, 0.0, ZRoute::Connection, &cfg).unwrap();
        assert!(rel(near, at) < 1e-6, "{near} vs {at}");
        let s_at = gegenbauer_s(0.0, im(0.7), -0.95).unwrap();
        let s_near = gegenbauer_s(2e-6, im(0.7), -0.95).unwrap();
        assert!(rel(s_near, s_at) < 1e-5);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        let l = im(0.7);
        let fd = (gegenbauer_s(0.3, l, 0.2 + h).unwrap() - gegenbauer_s(0.3, l, 0.2 - h).unwrap()) / (2.0 * h);
        assert!(rel(gegenbauer_s_derivative(0.3, l, 0.2).unwrap(), fd) < 1e-8);
        let fd = (gegenbauer_z(0.5, 1.0, 1.7 + h).unwrap() - gegenbauer_z(0.5, 1.0, 1.7 - h).unwrap()) / (2.0 * h);
        assert!(rel(gegenbauer_z_derivative(0.5, 1.0, 1.7).unwrap(), fd) < 1e-8);
    }
}
