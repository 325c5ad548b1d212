//! Generalized integrals of Macdonald products `2r K_α(ar) K_α(br)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{gen_integrate, GenIntegrand, GenResult, SingularExpansion, SingularTerm, Tail};
use crate::error::{Error, Result};
use crate::series::{Monomial, Monomials};
use crate::specfun::bessel::{bessel_k, MAX_ARGUMENT};
use crate::specfun::gamma::{digamma, rgamma};

/// Orders closer than this to an integer (but not equal) are rejected.
pub const NEAR_INTEGER: f64 = 1e-8;

fn mono(exponent: f64, log_power: u32, coeff: f64) -> Monomial {
    Monomial {
        exponent,
        log_power,
        coeff: Complex64::new(coeff, 0.0),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Small-r expansion of `K_α(x r)` with `depth` terms per family.
fn k_expansion(alpha: f64, x: f64, depth: usize) -> Result<Monomials> {
    let alpha = alpha.abs();
    let n = alpha.round();
    let dist = (alpha - n).abs();
    let h = x / 2.0;
    let mut terms = Vec::new();
    if dist == 0.0 {
        let n = n as usize;
        let nf = n as f64;
        for k in 0..n {
            let c = 0.5 * factorial(n - k - 1) / factorial(k) * (-1f64).powi(k as i32) * h.powf(2.0 * k as f64 - nf);
            terms.push(mono(2.0 * k as f64 - nf, 0, c));
        }
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let lh = h.ln();
        for k in 0..depth {
            let e = 2.0 * k as f64 + nf;
            let base = h.powf(e) / (factorial(k) * factorial(n + k));
            terms.push(mono(e, 1, sign * base));
            let psi = digamma(k as f64 + 1.0)? + digamma(nf + k as f64 + 1.0)?;
            terms.push(mono(e, 0, sign * base * lh - sign * 0.5 * psi * base));
        }
        return Ok(Monomials::new(terms, 2.0 * depth as f64 + nf).merged());
    }
    if dist < NEAR_INTEGER {
        return Err(Error::NearInteger { alpha, distance: dist });
    }
    let pre = PI / (2.0 * (PI * alpha).sin());
    for k in 0..depth {
        let kf = k as f64;
        let em = 2.0 * kf - alpha;
        let ep = 2.0 * kf + alpha;
        terms.push(mono(em, 0, pre * h.powf(em) * rgamma(kf - alpha + 1.0) / factorial(k)));
        terms.push(mono(ep, 0, -pre * h.powf(ep) * rgamma(kf + alpha + 1.0) / factorial(k)));
    }
    Ok(Monomials::new(terms, 2.0 * depth as f64 - alpha).merged())
}

/// Expansion at 0 of `r ↦ 2r K_α(ar) K_α(br)`.
///
/// Terms with logarithms only occur for integer α and have exponent ≥ 1.
/// The expansion carries the radius on which the truncated sum reproduces
/// the function to rounding level.
pub fn expansion_from_bessel_product(alpha: f64, a: f64, b: f64, depth: usize) -> Result<SingularExpansion> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain {
            module: "genquad.bessel_product",
            value: a.min(b),
            reason: "scale factors must be positive",
        });
    }
    let depth = depth.max(2);
    let ka = k_expansion(alpha, a, depth)?;
    let kb = k_expansion(alpha, b, depth)?;
    let two_r = Monomials::new(vec![mono(1.0, 0, 2.0)], f64::INFINITY);
    let prod = ka.mul(&kb).mul(&two_r);
    let radius = prod.radius(1.0, 1e-17);
    let terms = prod
        .terms
        .iter()
        .filter(|m| m.coeff.re != 0.0)
        .map(|m| SingularTerm::with_log(m.exponent, m.log_power, m.coeff.re))
        .collect();
    Ok(SingularExpansion::new(terms, 1.0)?.converged_on(radius))
}

fn k_or_zero(alpha: f64, x: f64) -> f64 {
    if x > MAX_ARGUMENT {
        0.0
    } else {
        bessel_k(alpha, x).unwrap_or(f64::NAN)
    }
}

/// The integrand `2r K_α(ar) K_α(br)` with its expansion and exponential tail.
pub fn bessel_product_integrand(alpha: f64, a: f64, b: f64) -> Result<GenIntegrand> {
    let expansion = expansion_from_bessel_product(alpha, a, b, 40)?;
    Ok(GenIntegrand::new(
        move |r: f64| 2.0 * r * k_or_zero(alpha, a * r) * k_or_zero(alpha, b * r),
        expansion,
        f64::INFINITY,
        Tail::Exponential { rate: a + b },
    ))
}

/// Generalized integral `gen∫_0^∞ K_α(ar) K_α(br) 2r dr`.
pub fn gen_bilinear_macdonald(alpha: f64, a: f64, b: f64) -> Result<GenResult> {
    gen_integrate(&bessel_product_integrand(alpha, a, b)?, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::EULER_GAMMA;

    #[test]
    fn half_integer_order_has_no_singular_terms() {
        let e = expansion_from_bessel_product(0.5, 1.0, 1.0, 20).unwrap();
        assert!(e.subtracted().all(|t| t.coefficient == 0.0));
    }

    #[test]
    fn three_halves_square() {
        let e = expansion_from_bessel_product(1.5, 1.0, 1.0, 20).unwrap();
        let c2: f64 = e.terms.iter().filter(|t| t.exponent == -2.0).map(|t| t.coefficient).sum();
        assert!((c2 - PI).abs() < 1e-14);
        assert_eq!(e.anomaly(), 0.0);
        let v = gen_bilinear_macdonald(1.5, 1.0, 1.0).unwrap();
        assert!((v.value + 1.5 * PI).abs() < 1e-9, "{}", v.value);
    }

    #[test]
    fn integer_order_is_anomalous() {
        let e = expansion_from_bessel_product(1.0, 1.0, 1.0, 20).unwrap();
        assert!(e.anomaly() != 0.0);
        assert!(e.terms.iter().all(|t| t.log_power == 0 || t.exponent >= 1.0));
    }

    #[test]
    fn expansion_matches_function() {
        for &(al, a, b) in &[(0.4, 2.0, 1.0), (1.0, 1.0, 2.0), (2.7, 1.5, 1.0), (0.0, 3.0, 2.0), (2.0, 1.0, 1.0)] {
            let e = expansion_from_bessel_product(al, a, b, 40).unwrap();
            let r = e.converged_radius.unwrap() * 0.7;
            let f = 2.0 * r * bessel_k(al, a * r).unwrap() * bessel_k(al, b * r).unwrap();
            assert!((e.eval(r) - f).abs() < 1e-12 * f.abs().max(1.0), "al={al}");
        }
    }

    #[test]
    fn near_integer_rejected() {
        assert!(matches!(
            expansion_from_bessel_product(1.0 + 1e-10, 1.0, 1.0, 10),
            Err(Error::NearInteger { .. })
        ));
    }

    #[test]
    fn anomalous_square_value() {
        // α = 1, b = 2: −(1 + 2γ)/4
        let v = gen_bilinear_macdonald(1.0, 2.0, 2.0).unwrap();
        assert!((v.value + (1.0 + 2.0 * EULER_GAMMA) / 4.0).abs() < 1e-9, "{}", v.value);
    }
}
