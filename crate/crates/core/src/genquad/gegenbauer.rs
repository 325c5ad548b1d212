//! Generalized integrals of Gegenbauer products in the variables
//! u = 2(1+w) (for **S**, on ]0, 4[) and u = 2(w−1) (for **Z**, on ]0, ∞[).
//!
//! The expansion at u = 0 is built exactly from the connection formula of
//! each factor at its singular point, composed into powers of u.

use num_complex::Complex64;

use super::{gen_integrate, GenIntegrand, GenResult, SingularExpansion, SingularTerm, Tail};
use crate::error::{Error, Result};
use crate::series::{Monomials, PowerSeries};
use crate::specfun::gegenbauer::{
    gegenbauer_s_scaled, gegenbauer_z_scaled, s_endpoint_components, z_endpoint_components, GegenbauerConfig,
};
use crate::specfun::hyp2f1::{Component, Truncation};

/// Which Gegenbauer family is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GegenbauerKind {
    /// **S** on ]−1, 1[ with weight (1−w²)^α.
    S,
    /// **Z** on ]1, ∞[ with weight (w²−1)^α.
    Z,
}

const TERMS: usize = 48;
const NEAR_INTEGER: f64 = 1e-8;
const CANCELLATION_REACH: f64 = 16.0;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `(1 + x u)^p` as a power series in u.
fn binomial(x: f64, p: f64, len: usize) -> PowerSeries {
    let mut v = vec![c(0.0); len];
    v[0] = c(1.0);
    if len > 1 {
        v[1] = c(x);
    }
    PowerSeries::new(v).powf(p)
}

/// Terminating series come back short; the zeros are exact and must
/// count towards the exactness cut.
fn padded(comp: &Component) -> Component {
    let mut out = comp.clone();
    if out.coeffs.len() < TERMS {
        out.coeffs.resize(TERMS, c(0.0));
    }
    out
}

/// A component in t = u/4.
fn s_component(comp: &Component) -> Monomials {
    let comp = &padded(comp);
    let n = comp.coeffs.len();
    let scaled: Vec<Complex64> = comp
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &ck)| ck * 4f64.powf(-(comp.shift + k as f64)))
        .collect();
    let series = PowerSeries::new(scaled);
    let main = Monomials::from_series(comp.shift, comp.log_power, &series);
    match comp.log_power {
        0 => main,
        1 => main.add(&Monomials::from_series(comp.shift, 0, &series.scale(c(-(4f64.ln()))))),
        _ => unreachable!("connection formulas carry at most one logarithm"),
    }
    .with_cut_at_most(comp.shift + n as f64)
}

/// A component in t = (u/4)/(1 + u/4).
fn z_component(comp: &Component) -> Monomials {
    let comp = &padded(comp);
    let n = comp.coeffs.len();
    let mut t_series = vec![c(0.0); n];
    for (k, v) in t_series.iter_mut().enumerate().skip(1) {
        *v = c(0.25f64.powi(k as i32) * if k % 2 == 1 { 1.0 } else { -1.0 });
    }
    let t_series = PowerSeries::new(t_series);
    let poly = PowerSeries::new(comp.coeffs.clone()).compose(&t_series);
    let series = poly
        .mul(&binomial(0.25, -comp.shift, n))
        .scale(c(4f64.powf(-comp.shift)));
    let main = Monomials::from_series(comp.shift, comp.log_power, &series);
    match comp.log_power {
        0 => main,
        1 => {
            // ln t = ln u − ln 4 − ln(1 + u/4)
            let l1p = binomial(0.25, 1.0, n).ln_normalized();
            let mut shift = l1p.scale(c(-1.0));
            shift.coeffs[0] -= c(4f64.ln());
            main.add(&Monomials::from_series(comp.shift, 0, &series.mul(&shift)))
        }
        _ => unreachable!("connection formulas carry at most one logarithm"),
    }
}

trait CutExt {
    fn with_cut_at_most(self, cut: f64) -> Self;
}

impl CutExt for Monomials {
    fn with_cut_at_most(self, cut: f64) -> Self {
        let c = self.cut.min(cut);
        Monomials::new(self.terms, c)
    }
}

fn sum(parts: Vec<Monomials>) -> Monomials {
    let mut it = parts.into_iter();
    let first = it.next().expect("at least one component");
    it.fold(first, |acc, m| acc.add(&m))
}

fn check_order(alpha: f64) -> Result<()> {
    let d = (alpha - alpha.round()).abs();
    if d > 0.0 && d < NEAR_INTEGER {
        return Err(Error::NearInteger { alpha, distance: d });
    }
    Ok(())
}

/// Expansion at u = 0 of one factor times `e^{log_scale}`.
fn factor_expansion(kind: GegenbauerKind, alpha: f64, lambda: Complex64, log_scale: f64) -> Result<Monomials> {
    match kind {
        GegenbauerKind::S => {
            let comps = s_endpoint_components(alpha, lambda, log_scale, Truncation::Fixed(TERMS))?;
            Ok(sum(comps.iter().map(s_component).collect()))
        }
        GegenbauerKind::Z => {
            let l = lambda.re;
            let comps = z_endpoint_components(alpha, l, log_scale, Truncation::Fixed(TERMS))?;
            let hyp = sum(comps.iter().map(z_component).collect());
            let pref = binomial(0.25, -(0.5 + alpha + l), TERMS);
            Ok(hyp.mul(&Monomials::from_series(0.0, 0, &pref)))
        }
    }
}

/// The integrand `F1 F2 · (u(1 ∓ u/4))^α` in the canonical variable, scaled
/// by `e^{log_scale}`, with its exact expansion at u = 0.
pub fn gegenbauer_integrand(
    kind: GegenbauerKind,
    alpha: f64,
    l1: Complex64,
    l2: Complex64,
    log_scale: f64,
) -> Result<GenIntegrand> {
    check_order(alpha)?;
    if kind == GegenbauerKind::Z && (l1.im != 0.0 || l2.im != 0.0 || l1.re <= 0.0 || l2.re <= 0.0) {
        return Err(Error::Domain {
            module: "genquad.gegenbauer",
            value: l1.re.min(l2.re),
            reason: "Z integrals need real positive degrees",
        });
    }
    let half = 0.5 * log_scale;
    let f1 = factor_expansion(kind, alpha, l1, half)?;
    let f2 = factor_expansion(kind, alpha, l2, half)?;
    let sign = if kind == GegenbauerKind::S { -1.0 } else { 1.0 };
    let weight = Monomials::from_series(alpha, 0, &binomial(0.25 * sign, alpha, TERMS));
    let prod = f1.mul(&f2).mul(&weight);
    // for large degrees the factors behave like K_α(|λ|√u), whose series
    // cancels catastrophically once |λ|√u ≫ 1
    let big = l1.norm().max(l2.norm());
    let radius = prod.radius(1.0, 1e-17).min(CANCELLATION_REACH / (big * big).max(1.0));
    let terms: Vec<SingularTerm> = prod
        .terms
        .iter()
        .filter(|m| m.coeff.re != 0.0)
        .map(|m| SingularTerm::with_log(m.exponent, m.log_power, m.coeff.re))
        .collect();
    let expansion = SingularExpansion::new(terms, 1.0)?.converged_on(radius);
    let cfg = GegenbauerConfig::default();
    Ok(match kind {
        GegenbauerKind::S => GenIntegrand::new(
            move |u: f64| {
                let w = 0.5 * u - 1.0;
                let a = gegenbauer_s_scaled(alpha, l1, w, half, &cfg).unwrap_or(f64::NAN);
                let b = gegenbauer_s_scaled(alpha, l2, w, half, &cfg).unwrap_or(f64::NAN);
                a * b * (u * (1.0 - 0.25 * u)).powf(alpha)
            },
            expansion,
            4.0,
            Tail::Finite { endpoint_exponent: alpha },
        ),
        GegenbauerKind::Z => {
            let (x1, x2) = (l1.re, l2.re);
            GenIntegrand::new(
                move |u: f64| {
                    let w = 1.0 + 0.5 * u;
                    let a = gegenbauer_z_scaled(alpha, x1, w, half, &cfg).unwrap_or(f64::NAN);
                    let b = gegenbauer_z_scaled(alpha, x2, w, half, &cfg).unwrap_or(f64::NAN);
                    a * b * (u * (1.0 + 0.25 * u)).powf(alpha)
                },
                expansion,
                f64::INFINITY,
                Tail::Power {
                    exponent: 1.0 + x1 + x2,
                },
            )
        }
    })
}

/// `e^{log_scale} · gen∫ F1 F2 (u(1 ∓ u/4))^α du`.
pub fn gen_bilinear_gegenbauer_scaled(
    kind: GegenbauerKind,
    alpha: f64,
    l1: Complex64,
    l2: Complex64,
    log_scale: f64,
) -> Result<GenResult> {
    gen_integrate(&gegenbauer_integrand(kind, alpha, l1, l2, log_scale)?, 1.0)
}

/// Generalized bilinear integral of two Gegenbauer functions in the
/// canonical variable.
pub fn gen_bilinear_gegenbauer(kind: GegenbauerKind, alpha: f64, l1: Complex64, l2: Complex64) -> Result<GenResult> {
    gen_bilinear_gegenbauer_scaled(kind, alpha, l1, l2, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gegenbauer::{gegenbauer_s, gegenbauer_z};

    fn expansion_agrees(kind: GegenbauerKind, alpha: f64, l: Complex64) {
        let f = factor_expansion(kind, alpha, l, 0.0).unwrap();
        for &u in &[1e-3, 1e-2, 0.05] {
            let v = match kind {
                GegenbauerKind::S => gegenbauer_s(alpha, l, 0.5 * u - 1.0).unwrap(),
                GegenbauerKind::Z => gegenbauer_z(alpha, l.re, 1.0 + 0.5 * u).unwrap(),
            };
            let e = f.eval(u).re;
            assert!((v - e).abs() < 1e-11 * f.magnitude(u), "{kind:?} α={alpha} u={u}: {v} vs {e}");
        }
    }

    #[test]
    fn factor_expansions_match_evaluations() {
        expansion_agrees(GegenbauerKind::S, 0.3, Complex64::new(0.0, 0.5));
        expansion_agrees(GegenbauerKind::S, 1.0, Complex64::new(0.0, 0.7));
        expansion_agrees(GegenbauerKind::Z, 0.3, c(0.7));
        expansion_agrees(GegenbauerKind::Z, 1.3, c(1.2));
        expansion_agrees(GegenbauerKind::Z, 1.0, c(0.8));
        expansion_agrees(GegenbauerKind::Z, 2.0, c(1.5));
        expansion_agrees(GegenbauerKind::Z, 2.6, c(3.0));
        expansion_agrees(GegenbauerKind::Z, 2.6, c(1.1));
    }

    #[test]
    fn z_square_at_half_integer_order() {
        // λ1 = 2, λ2 = 1 at α = 1/2 gives 8/3
        let v = gen_bilinear_gegenbauer(GegenbauerKind::Z, 0.5, c(2.0), c(1.0)).unwrap();
        assert!((v.value - 8.0 / 3.0).abs() < 1e-9, "{}", v.value);
    }
}
