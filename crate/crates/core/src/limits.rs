//! Large-degree convergence of Gegenbauer functions and of their
//! generalized square integrals to the Macdonald counterparts, measured as
//! rates along a geometric ladder of degrees.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::closedforms::mac_square_closed;
use crate::error::{Error, Result};
use crate::genquad::{gen_bilinear_gegenbauer_scaled, GegenbauerKind};
use crate::specfun::bessel::bessel_k;
use crate::specfun::gamma::ln_abs_gamma;
use crate::specfun::gegenbauer::{gegenbauer_s_scaled, gegenbauer_z_scaled, GegenbauerConfig};

/// Default ladder of degrees.
pub const LADDER: [f64; 5] = [10.0, 20.0, 40.0, 80.0, 160.0];

/// Default angle / hyperbolic distance for the pointwise comparison.
pub const THETA: f64 = 0.3;

/// Which family is sent to the Macdonald limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LimitKind {
    /// **S**_{α,iβ}(−cos θ), β → ∞.
    S,
    /// **Z**_{α,λ}(cosh θ), λ → ∞.
    Z,
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            module: "limits",
            value: scale,
            reason: "degree must be positive",
        })
    }
}

/// Prefactored Gegenbauer value over `(θ s)^{−α} K_α(s θ)`.
pub fn function_limit_ratio(kind: LimitKind, alpha: f64, scale: f64, theta: f64) -> Result<f64> {
    check_scale(scale)?;
    if !(theta > 0.0 && theta <= PI / 2.0) {
        return Err(Error::Domain {
            module: "limits",
            value: theta,
            reason: "theta must lie in ]0, pi/2]",
        });
    }
    let cfg = GegenbauerConfig::default();
    let lhs = match kind {
        LimitKind::S => {
            let log = PI.ln() - PI * scale - alpha * LN_2;
            let s = gegenbauer_s_scaled(alpha, Complex64::new(0.0, scale), -theta.cos(), log, &cfg)?;
            s * (theta.sin() / theta).powf(alpha + 0.5)
        }
        LimitKind::Z => {
            let log = 0.5 * PI.ln() + ln_abs_gamma(0.5 - alpha + scale) - (scale + 0.5) * LN_2;
            let z = gegenbauer_z_scaled(alpha, scale, theta.cosh(), log, &cfg)?;
            z * (theta.sinh() / theta).powf(alpha + 0.5)
        }
    };
    let x = scale * theta;
    let rhs = x.powf(-alpha) * bessel_k(alpha, x)?;
    Ok(lhs / rhs)
}

/// Prefactored generalized Gegenbauer square integral (canonical variable)
/// over `gen∫ K_α(s r)² 2r dr`.
pub fn integral_limit_ratio(kind: LimitKind, alpha: f64, scale: f64) -> Result<f64> {
    check_scale(scale)?;
    let (gk, l, log) = match kind {
        LimitKind::S => (
            GegenbauerKind::S,
            Complex64::new(0.0, scale),
            2.0 * PI.ln() - 2.0 * PI * scale + 2.0 * alpha * (scale.ln() - LN_2),
        ),
        LimitKind::Z => (
            GegenbauerKind::Z,
            Complex64::new(scale, 0.0),
            PI.ln() + 2.0 * ln_abs_gamma(0.5 + alpha + scale) - (2.0 * scale + 1.0) * LN_2 - 2.0 * alpha * scale.ln(),
        ),
    };
    let lhs = gen_bilinear_gegenbauer_scaled(gk, alpha, l, l, log)?.value;
    Ok(lhs / mac_square_closed(alpha, scale)?)
}

/// Ratios along a ladder and the log-log slope of `|ratio − 1|`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RateReport {
    pub ladder: Vec<f64>,
    pub ratios: Vec<f64>,
    pub slope: f64,
    /// Two standard errors of the fitted slope.
    pub slope_half_width: f64,
}

impl RateReport {
    /// Least-squares fit of `ln|ratio − 1|` against `ln scale`.
    pub fn from_ratios(ladder: Vec<f64>, ratios: Vec<f64>) -> Result<Self> {
        if ladder.len() != ratios.len() || ladder.len() < 3 {
            return Err(Error::Usage("a rate fit needs at least three ladder points".into()));
        }
        if ladder.windows(2).any(|w| !(w[1] > w[0])) || ladder[0] <= 0.0 {
            return Err(Error::Usage("ladder must be positive and strictly increasing".into()));
        }
        if let Some(&bad) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::Domain {
                module: "limits",
                value: bad,
                reason: "ratio must be finite and positive",
            });
        }
        let xs: Vec<f64> = ladder.iter().map(|s| s.ln()).collect();
        // an exact ratio gives ln 0; floor it so the fit stays finite
        let ys: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs().max(1e-300).ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let resid: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
            .sum();
        let se = (resid / (n - 2.0) / sxx).sqrt();
        Ok(Self {
            ladder,
            ratios,
            slope,
            slope_half_width: 2.0 * se,
        })
    }

    /// |ratio − 1| strictly decreasing along the ladder.
    pub fn monotone(&self) -> bool {
        self.ratios
            .windows(2)
            .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs())
    }

    /// Monotone with a slope within `tol` of −1.
    pub fn first_order(&self, tol: f64) -> bool {
        self.monotone() && (self.slope + 1.0).abs() <= tol
    }
}

/// Pointwise rate report over a ladder.
pub fn function_rate(kind: LimitKind, alpha: f64, theta: f64, ladder: &[f64]) -> Result<RateReport> {
    let ratios = ladder
        .iter()
        .map(|&s| function_limit_ratio(kind, alpha, s, theta))
        .collect::<Result<Vec<_>>>()?;
    RateReport::from_ratios(ladder.to_vec(), ratios)
}

/// Integral rate report over a ladder.
pub fn integral_rate(kind: LimitKind, alpha: f64, ladder: &[f64]) -> Result<RateReport> {
    let ratios = ladder
        .iter()
        .map(|&s| integral_limit_ratio(kind, alpha, s))
        .collect::<Result<Vec<_>>>()?;
    RateReport::from_ratios(ladder.to_vec(), ratios)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_order_is_exact_pointwise() {
        for kind in [LimitKind::S, LimitKind::Z] {
            let r = function_limit_ratio(kind, 0.5, 100.0, THETA).unwrap();
            assert!((r - 1.0).abs() < 1e-2, "{kind:?}: {r}");
        }
    }

    #[test]
    fn pointwise_rates_are_first_order() {
        for kind in [LimitKind::S, LimitKind::Z] {
            let rep = function_rate(kind, 0.3, THETA, &LADDER).unwrap();
            assert!(rep.first_order(0.2), "{kind:?}: {rep:?}");
        }
    }

    #[test]
    fn integral_ratios_converge() {
        let ladder = [10.0, 20.0, 40.0];
        for (kind, alpha) in [(LimitKind::Z, 0.3), (LimitKind::S, 0.3), (LimitKind::Z, 1.0)] {
            let rep = integral_rate(kind, alpha, &ladder).unwrap();
            assert!(rep.monotone(), "{kind:?} {alpha}: {rep:?}");
            assert!((rep.ratios[2] - 1.0).abs() < 1e-3);
            // observed rate is second order, faster than the stated bound
            assert!(rep.slope < -1.7 && rep.slope > -2.5, "{rep:?}");
        }
        let exact = integral_limit_ratio(LimitKind::Z, 0.5, 20.0).unwrap();
        assert!((exact - 1.0).abs() < 1e-11);
    }

    #[test]
    fn rate_fit_recovers_slope() {
        let ladder = LADDER.to_vec();
        let ratios = ladder.iter().map(|s| 1.0 + 3.0 / s).collect();
        let rep = RateReport::from_ratios(ladder, ratios).unwrap();
        assert!((rep.slope + 1.0).abs() < 1e-12 && rep.slope_half_width < 1e-10);
        assert!(RateReport::from_ratios(vec![1.0, 1.0, 2.0], vec![1.1; 3]).is_err());
    }
}
