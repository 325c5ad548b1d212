//! Macdonald functions K_ν(x) of real order.
//!
//! Temme's method: for |μ| ≤ 1/2 the pair K_μ, K_{μ+1} comes from the
//! Temme series when x ≤ 2 and from Steed's continued fraction otherwise;
//! forward recurrence then reaches the requested order. K is symmetric in
//! ν, so only |ν| is used.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::gamma::{rgamma, temme_gammas};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
/// Above this argument K underflows.
pub const MAX_ARGUMENT: f64 = 705.0;

/// K_ν(x) and K_{ν+1}(x) for ν ≥ 0.
fn k_pair(nu: f64, x: f64) -> Result<(f64, f64)> {
    let nl = (nu + 0.5).floor() as i64;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut k_mu, mut k_mu1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2) = temme_gammas(mu);
        let gampl = rgamma(1.0 + mu);
        let gammi = rgamma(1.0 - mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SeriesNonConvergence {
                module: "specfun.bessel_k",
                terms: MAX_ITER,
            });
        }
        k_mu = sum;
        k_mu1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SeriesNonConvergence {
                module: "specfun.bessel_k",
                terms: MAX_ITER,
            });
        }
        h *= a1;
        k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        k_mu1 = k_mu * (mu + x + 0.5 - h) * xi;
    }
    for i in 1..=nl {
        let next = (mu + i as f64) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    if !k_mu.is_finite() || !k_mu1.is_finite() {
        return Err(Error::Overflow {
            module: "specfun.bessel_k",
            value: x,
        });
    }
    Ok((k_mu, k_mu1))
}

/// K_α(x) for real α and x > 0.
pub fn bessel_k(alpha: f64, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(k_pair(alpha.abs(), x)?.0)
}

/// K_α(x) together with dK_α/dx = -K_{α+1}(x) + (α/x) K_α(x).
pub fn bessel_k_with_derivative(alpha: f64, x: f64) -> Result<(f64, f64)> {
    check_argument(x)?;
    let nu = alpha.abs();
    let (k, k1) = k_pair(nu, x)?;
    Ok((k, nu / x * k - k1))
}

fn check_argument(x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            module: "specfun.bessel_k",
            value: x,
            reason: "argument must be positive",
        });
    }
    if x > MAX_ARGUMENT {
        return Err(Error::Overflow {
            module: "specfun.bessel_k",
            value: x,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_exponential_tail, QuadConfig};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// K_ν(x) = ∫_0^∞ exp(-x cosh t) cosh(νt) dt
    fn k_integral(nu: f64, x: f64) -> f64 {
        integrate_exponential_tail(
            |t: f64| (-x * t.cosh() + nu * t).exp() * 0.5 + (-x * t.cosh() - nu * t).exp() * 0.5,
            0.0,
            x.max(0.05),
            &QuadConfig::with_rel_tol(1e-14),
        )
        .unwrap()
        .value
    }

    #[test]
    fn half_integer_closed_form() {
        let expected = (PI / 2.0).sqrt() * (-1f64).exp();
        assert!(rel(bessel_k(0.5, 1.0).unwrap(), expected) < 1e-15);
        for &x in &[1e-6, 0.3, 1.9, 2.1, 15.0, 600.0] {
            let k32 = (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 1.0 / x);
            assert!(rel(bessel_k(1.5, x).unwrap(), k32) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn order_zero_against_integral() {
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_3) < 1e-14);
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), k_integral(0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn grid_against_integral_representation() {
        for &nu in &[0.0, 0.3, 0.5, 0.7, 1.0, 2.7, 7.25, 19.5] {
            for &x in &[0.01, 0.5, 1.99, 2.0, 3.3, 25.0, 200.0] {
                let k = bessel_k(nu, x).unwrap();
                let oracle = k_integral(nu, x);
                assert!(rel(k, oracle) < 1e-11, "nu={nu} x={x}: {k} vs {oracle}");
            }
        }
    }

    #[test]
    fn symmetric_in_order() {
        for &(nu, x) in &[(0.4, 0.7), (3.3, 5.0), (11.0, 0.1)] {
            assert_eq!(bessel_k(nu, x).unwrap(), bessel_k(-nu, x).unwrap());
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &(nu, x) in &[(0.4, 0.7), (2.5, 3.0), (0.0, 1.2)] {
            let (_, dk) = bessel_k_with_derivative(nu, x).unwrap();
            let h = 1e-5;
            let fd = (bessel_k(nu, x + h).unwrap() - bessel_k(nu, x - h).unwrap()) / (2.0 * h);
            assert!(rel(dk, fd) < 1e-8);
        }
    }

    #[test]
    fn domain_and_range() {
        assert!(matches!(bessel_k(1.0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(1.0, -2.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(1.0, 800.0), Err(Error::Overflow { .. })));
    }
}
