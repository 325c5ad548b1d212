//! The self-energy Σ_d(β²) fixed by `∂_ρ Σ = gen∫ G(−ρ, 0, y)² dy`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{free_prefactor, Geometry, GeometryKind};
use crate::error::{Error, Result};
use crate::extrapolate::limit_richardson;
use crate::genquad::{gen_bilinear_gegenbauer, gen_bilinear_macdonald, GegenbauerKind};
use crate::quad::{integrate, QuadConfig};
use crate::specfun::gamma::{digamma, gamma, pochhammer_real};

/// Additive normalization of the curved Σ, which is only fixed up to a
/// constant (absorbed into γ).
pub const SIGMA_NORMALIZATION: &str = "Sigma(rho=1)=0";

fn check_dim(d: usize, beta: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain {
            module: "pointgreen.sigma",
            value: 0.0,
            reason: "dimension must be at least 1",
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain {
            module: "pointgreen.sigma",
            value: beta,
            reason: "beta must be positive",
        });
    }
    Ok(())
}

/// Σ_d(β²) on ℝ^d: the low-dimensional table for d ≤ 3, the general
/// formula above.
pub fn sigma(d: usize, beta: f64) -> Result<f64> {
    check_dim(d, beta)?;
    Ok(match d {
        1 => -1.0 / (2.0 * beta),
        2 => (beta * beta).ln() / (4.0 * PI),
        3 => beta / (4.0 * PI),
        _ => sigma_general(d, beta)?,
    })
}

/// The odd/even closed form valid in every dimension. For d = 2 it
/// exceeds the table entry by the constant `(2 + 2γ_E − 2 ln 2)/(4π)`.
pub fn sigma_general(d: usize, beta: f64) -> Result<f64> {
    check_dim(d, beta)?;
    let df = d as f64;
    if d % 2 == 1 {
        let m = (d - 1) / 2;
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        Ok(sign * beta.powf(df - 2.0) / ((4.0 * PI).powi(m as i32) * 2.0 * pochhammer_real(0.5, m)))
    } else {
        let m = d / 2;
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        let fact = gamma(m as f64)?;
        Ok(sign * beta.powf(df - 2.0) / ((4.0 * PI).powi(m as i32) * fact)
            * (2.0 - 2.0 * digamma(m as f64)? + (beta * beta / 4.0).ln()))
    }
}

/// Both sides of the ρ-derivative identity for Σ_d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaCheck {
    /// Extrapolated central difference of Σ in ρ = β².
    pub lhs: f64,
    /// Prefactor times the generalized Macdonald square integral.
    pub rhs: f64,
}

impl SigmaCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

/// `∂_ρ Σ_d` by finite differences against the generalized integral.
pub fn sigma_derivative_check(d: usize, beta: f64) -> Result<SigmaCheck> {
    check_dim(d, beta)?;
    let rho = beta * beta;
    let mut failure = None;
    let lhs = limit_richardson(
        |h| {
            let mut s = |r: f64| match sigma(d, r.sqrt()) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            };
            (s(rho + h) - s(rho - h)) / (2.0 * h)
        },
        0.1 * rho,
        2.0,
        6,
        2.0,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let df = d as f64;
    let alpha = df / 2.0 - 1.0;
    let pre = rho.powf(alpha) * PI.powf(df / 2.0) / ((2.0 * PI).powf(df) * gamma(df / 2.0)?);
    let rhs = pre * gen_bilinear_macdonald(alpha, beta, beta)?.value;
    Ok(SigmaCheck { lhs: lhs.value, rhs })
}

/// `∂_ρ Σ` on ℍ^d or 𝕊^d as a diagonal generalized Gegenbauer integral:
/// area of the unit (d−1)-sphere times the squared kernel prefactor times
/// `½ gen∫ F² (±(1−w²))^α d(2w)` in the canonical variable.
pub fn curved_sigma_derivative(g: Geometry, beta: f64) -> Result<f64> {
    let d = g.d as f64;
    let alpha = d / 2.0 - 1.0;
    let area = 2.0 * PI.powf(d / 2.0) / gamma(d / 2.0)?;
    let c = free_prefactor(g, beta)?;
    let integral = match g.kind {
        GeometryKind::Euclidean => {
            return Err(Error::Domain {
                module: "pointgreen.sigma",
                value: 0.0,
                reason: "use sigma for the Euclidean space",
            })
        }
        GeometryKind::Hyperbolic => {
            let l = Complex64::new(beta, 0.0);
            gen_bilinear_gegenbauer(GegenbauerKind::Z, alpha, l, l)?
        }
        GeometryKind::Spherical => {
            let l = Complex64::new(0.0, beta);
            gen_bilinear_gegenbauer(GegenbauerKind::S, alpha, l, l)?
        }
    };
    Ok(area * c * c * 0.5 * integral.value)
}

/// Σ on a curved space with its derivative and normalization.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CurvedSigma {
    pub value: f64,
    pub derivative: f64,
    pub normalization: &'static str,
}

/// Σ(β²) = ∫_1^{β²} ∂_ρ Σ dρ, integrated in b = √ρ.
pub fn sigma_numeric_curved(g: Geometry, beta: f64) -> Result<CurvedSigma> {
    if g.kind == GeometryKind::Euclidean {
        return Err(Error::Domain {
            module: "pointgreen.sigma",
            value: 0.0,
            reason: "use sigma for the Euclidean space",
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain {
            module: "pointgreen.sigma",
            value: beta,
            reason: "beta must be positive",
        });
    }
    let failure = RefCell::new(None);
    let q = integrate(
        |b: f64| match curved_sigma_derivative(g, b) {
            Ok(v) => 2.0 * b * v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        1.0,
        beta,
        &QuadConfig::with_rel_tol(1e-10),
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = if beta == 1.0 { 0.0 } else { q?.value };
    Ok(CurvedSigma {
        value,
        derivative: curved_sigma_derivative(g, beta)?,
        normalization: SIGMA_NORMALIZATION,
    })
}
