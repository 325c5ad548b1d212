//! Finite-part (generalized) integrals on ]0, U[ of functions with a
//! homogeneous expansion at 0.
//!
//! For `f(r) ~ Σ f_k r^k` near 0 the generalized integral with split `c` is
//!
//! ```text
//! Σ_{k ≠ -1} f_k c^{k+1}/(k+1) + ∫_0^c (f − Σ f_k r^k) dr + ∫_c^U f dr,
//! ```
//!
//! where the sum runs over the non-integrable exponents. `f_{-1}` is the
//! anomaly: the value then depends on `c` and shifts under rescaling.

mod bessel;
mod gegenbauer;
mod transform;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{
    integrate, integrate_exponential_tail, integrate_power_tail, integrate_right_singular,
    integrate_semi_infinite, QuadConfig, QuadResult,
};

pub use bessel::{bessel_product_integrand, expansion_from_bessel_product, gen_bilinear_macdonald};
pub use gegenbauer::{
    gegenbauer_integrand, gen_bilinear_gegenbauer, gen_bilinear_gegenbauer_scaled, GegenbauerKind,
};
pub use transform::{change_of_var_check, change_of_var_correction, compose_expansion, SmoothMap};

/// Integrability margin: log-free terms with exponent ≤ −1 + DELTA are
/// subtracted.
pub const DELTA: f64 = 0.05;

/// Exponents within this distance are identified.
pub const EXPONENT_TOL: f64 = 1e-10;

/// One term `coefficient · r^exponent · (ln r)^log_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularTerm {
    pub exponent: f64,
    pub log_power: u32,
    pub coefficient: f64,
}

impl SingularTerm {
    pub fn new(exponent: f64, coefficient: f64) -> Self {
        Self {
            exponent,
            log_power: 0,
            coefficient,
        }
    }

    pub fn with_log(exponent: f64, log_power: u32, coefficient: f64) -> Self {
        Self {
            exponent,
            log_power,
            coefficient,
        }
    }

    fn is_subtracted(&self) -> bool {
        self.log_power == 0 && self.exponent <= -1.0 + DELTA
    }

    fn eval(&self, r: f64) -> f64 {
        self.coefficient * r.powf(self.exponent) * r.ln().powi(self.log_power as i32)
    }
}

/// Expansion of an integrand at 0.
///
/// `radius` bounds the region where the subtraction is meaningful. When
/// `converged_radius` is set, the full list of terms reproduces the
/// integrand to working precision on `]0, converged_radius]`, and the
/// engine integrates the expansion analytically there.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularExpansion {
    pub terms: Vec<SingularTerm>,
    pub radius: f64,
    pub converged_radius: Option<f64>,
}

impl SingularExpansion {
    /// Validates and merges `terms`.
    pub fn new(terms: Vec<SingularTerm>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidExpansion {
                detail: format!("radius {radius} must be positive"),
            });
        }
        for t in &terms {
            if t.log_power > 0 && t.exponent <= -1.0 {
                return Err(Error::InvalidExpansion {
                    detail: format!(
                        "log term r^{} ln^{} r is not integrable; only homogeneous singularities are supported",
                        t.exponent, t.log_power
                    ),
                });
            }
            if !t.exponent.is_finite() || !t.coefficient.is_finite() {
                return Err(Error::InvalidExpansion {
                    detail: format!("non-finite term {t:?}"),
                });
            }
        }
        let mut merged: Vec<SingularTerm> = Vec::new();
        for t in terms {
            match merged
                .iter_mut()
                .find(|m| (m.exponent - t.exponent).abs() < EXPONENT_TOL && m.log_power == t.log_power)
            {
                Some(m) => m.coefficient += t.coefficient,
                None => merged.push(t),
            }
        }
        merged.sort_by(|a, b| a.exponent.partial_cmp(&b.exponent).unwrap().then(a.log_power.cmp(&b.log_power)));
        Ok(Self {
            terms: merged,
            radius,
            converged_radius: None,
        })
    }

    /// No singular terms: `f` is integrable at 0.
    pub fn empty() -> Self {
        Self {
            terms: Vec::new(),
            radius: 1.0,
            converged_radius: None,
        }
    }

    /// Declares that the terms sum to the integrand on `]0, r]`.
    pub fn converged_on(mut self, r: f64) -> Self {
        self.converged_radius = Some(r);
        self
    }

    /// Coefficient of `r^{-1}` (no log).
    pub fn anomaly(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.log_power == 0 && (t.exponent + 1.0).abs() < EXPONENT_TOL)
            .map(|t| t.coefficient)
            .sum()
    }

    /// Terms removed before quadrature.
    pub fn subtracted(&self) -> impl Iterator<Item = &SingularTerm> {
        self.terms.iter().filter(|t| t.is_subtracted())
    }

    fn regular(&self) -> impl Iterator<Item = &SingularTerm> {
        self.terms.iter().filter(|t| !t.is_subtracted())
    }

    /// Sum of the subtracted terms at `r`.
    pub fn eval_subtracted(&self, r: f64) -> f64 {
        self.subtracted().map(|t| t.eval(r)).sum()
    }

    /// Sum of all terms at `r`.
    pub fn eval(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(r)).sum()
    }

    fn magnitude(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(r).abs()).sum()
    }

    /// Expansion of `u ↦ a f(a u)`.
    pub fn scaled(&self, a: f64) -> Self {
        let la = a.ln();
        let mut terms = Vec::new();
        for t in &self.terms {
            // (ln a + ln u)^m = Σ_j C(m, j) (ln a)^{m-j} (ln u)^j
            let base = t.coefficient * a.powf(t.exponent + 1.0);
            let m = t.log_power;
            let mut binom = 1.0;
            for j in 0..=m {
                if j > 0 {
                    binom = binom * (m - j + 1) as f64 / j as f64;
                }
                let c = base * binom * la.powi((m - j) as i32);
                if c != 0.0 || j == m {
                    terms.push(SingularTerm::with_log(t.exponent, j, c));
                }
            }
        }
        let mut out = Self::new(terms, self.radius / a).expect("scaling preserves validity");
        out.converged_radius = self.converged_radius.map(|r| r / a);
        out
    }

    /// Expansion of `u ↦ p u^{p-1} f(u^p)`.
    pub fn power_transformed(&self, p: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                SingularTerm::with_log(
                    p * t.exponent + p - 1.0,
                    t.log_power,
                    t.coefficient * p.powi(t.log_power as i32 + 1),
                )
            })
            .collect();
        let mut out = Self::new(terms, self.radius.powf(1.0 / p)).expect("power map preserves validity");
        out.converged_radius = self.converged_radius.map(|r| r.powf(1.0 / p));
        out
    }
}

/// Behaviour of the integrand towards the upper limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Decay like `exp(-rate r)` on ]c, ∞[.
    Exponential { rate: f64 },
    /// Decay like `r^{-exponent}`, exponent > 1, on ]c, ∞[.
    Power { exponent: f64 },
    /// Integrable decay of unknown type on ]c, ∞[.
    Unbounded,
    /// Finite upper limit with behaviour `(U − r)^endpoint_exponent`.
    Finite { endpoint_exponent: f64 },
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An integrand on ]0, upper[ with its expansion at 0 and tail type.
#[derive(Clone)]
pub struct GenIntegrand {
    pub f: RealFn,
    pub expansion: SingularExpansion,
    pub upper: f64,
    pub tail: Tail,
}

impl fmt::Debug for GenIntegrand {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("GenIntegrand")
            .field("expansion", &self.expansion)
            .field("upper", &self.upper)
            .field("tail", &self.tail)
            .finish()
    }
}

impl GenIntegrand {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, expansion: SingularExpansion, upper: f64, tail: Tail) -> Self {
        Self {
            f: Arc::new(f),
            expansion,
            upper,
            tail,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    /// `u ↦ a f(a u)` with the matching expansion and tail.
    pub fn scaled(&self, a: f64) -> Self {
        let f = self.f.clone();
        let tail = match self.tail {
            Tail::Exponential { rate } => Tail::Exponential { rate: rate * a },
            t => t,
        };
        Self {
            f: Arc::new(move |u| a * f(a * u)),
            expansion: self.expansion.scaled(a),
            upper: self.upper / a,
            tail,
        }
    }

    /// `u ↦ p u^{p-1} f(u^p)`.
    pub fn power_transformed(&self, p: f64) -> Self {
        let f = self.f.clone();
        let tail = match self.tail {
            Tail::Power { exponent } => Tail::Power {
                exponent: p * (exponent - 1.0) + 1.0,
            },
            Tail::Exponential { rate } if p >= 1.0 => Tail::Exponential { rate },
            Tail::Finite { endpoint_exponent } => Tail::Finite { endpoint_exponent },
            _ => Tail::Unbounded,
        };
        Self {
            f: Arc::new(move |u| p * u.powf(p - 1.0) * f(u.powf(p))),
            expansion: self.expansion.power_transformed(p),
            upper: self.upper.powf(1.0 / p),
            tail,
        }
    }
}

/// Value of a generalized integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenResult {
    pub value: f64,
    /// Coefficient of `r^{-1}` in the expansion.
    pub anomaly: f64,
    /// Absolute error estimate of the quadrature pieces.
    pub error: f64,
}

impl GenResult {
    /// Relative error estimate.
    pub fn tolerance_achieved(&self) -> f64 {
        if self.value == 0.0 {
            self.error
        } else {
            self.error / self.value.abs()
        }
    }
}

/// Engine settings.
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    /// Relative tolerance of each quadrature piece.
    pub rel_tol: f64,
    /// Compare the integrand with its expansion before integrating.
    pub probe: bool,
    /// Relative mismatch accepted by the probe on converged expansions.
    pub probe_tol: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            probe: true,
            probe_tol: 1e-7,
        }
    }
}

/// `∫_0^c r^e (ln r)^m dr` for e > −1.
fn power_log_integral(e: f64, m: u32, c: f64) -> f64 {
    let lc = c.ln();
    let base = c.powf(e + 1.0) / (e + 1.0);
    let mut prev = base;
    for j in 1..=m {
        prev = base * lc.powi(j as i32) - j as f64 / (e + 1.0) * prev;
    }
    prev
}

/// Generalized integral with the default configuration.
pub fn gen_integrate(f: &GenIntegrand, split: f64) -> Result<GenResult> {
    gen_integrate_with(f, split, &GenConfig::default())
}

fn probe(f: &GenIntegrand, split: f64, r_lo: f64) -> Result<()> {
    let exp = &f.expansion;
    if let Some(_) = exp.converged_radius.filter(|_| r_lo > 0.0) {
        for k in 0..3 {
            let r = r_lo * 0.5f64.powi(k);
            let fv = f.eval(r);
            let ev = exp.eval(r);
            let scale = exp.magnitude(r).max(fv.abs());
            if !((fv - ev).abs() <= 1e-7 * scale) {
                return Err(Error::ExpansionMismatch {
                    detail: format!("at r = {r:e}: integrand {fv:e}, expansion {ev:e}"),
                });
            }
        }
        return Ok(());
    }
    // Scaled remainder |f − Σ| r^{1−δ} must stay bounded towards 0.
    let r0 = split.min(exp.radius);
    let samples: Vec<f64> = (1..=6)
        .map(|k| {
            let r = r0 * 8f64.powi(-k);
            let rem = f.eval(r) - exp.eval_subtracted(r);
            let noise = 64.0 * f64::EPSILON * (f.eval(r).abs() + exp.magnitude(r));
            (rem.abs() - noise).max(0.0) * r.powf(1.0 - DELTA)
        })
        .collect();
    let head = samples[0].max(samples[1]).max(f64::MIN_POSITIVE);
    let last = samples[samples.len() - 1];
    let growing = samples.windows(2).skip(2).all(|w| w[1] > 1.5 * w[0]);
    if !last.is_finite() || (growing && last > 8.0 * head) {
        return Err(Error::ExpansionMismatch {
            detail: format!("remainder times r^(1-delta) grows towards 0: {samples:?}"),
        });
    }
    Ok(())
}

/// Lower cut-off for the singular-only case and the integral of the
/// remainder below it.
///
/// Close to 0 the remainder `f − Σ` is a small difference of large terms.
/// The cut-off balances rounding noise against the error of replacing the
/// remainder on ]0, r_c[ by its local power law.
fn small_r_head(f: &GenIntegrand, split: f64) -> Result<(f64, f64)> {
    let exp = &f.expansion;
    let rem = |r: f64| f.eval(r) - exp.eval_subtracted(r);
    let mut best = (split * 0.5, f64::INFINITY);
    for k in 1..=80 {
        let r = split * 0.5f64.powi(k);
        let fr = f.eval(r);
        let noise = 64.0 * f64::EPSILON * (fr.abs() + exp.magnitude(r));
        let cost = r * (noise + (fr - exp.eval_subtracted(r)).abs() * r);
        if !cost.is_finite() {
            break;
        }
        if cost < best.1 {
            best = (r, cost);
        }
    }
    let r_c = best.0;
    let (v1, v2) = (rem(r_c), rem(2.0 * r_c));
    let e = if v1 != 0.0 && v2 != 0.0 && v1.signum() == v2.signum() {
        (v2 / v1).ln() / 2f64.ln()
    } else {
        0.0
    };
    if !e.is_finite() || e <= -1.0 + 0.5 * DELTA {
        return Err(Error::ExpansionMismatch {
            detail: format!("remainder behaves like r^{e:.3} near 0"),
        });
    }
    let e = e.min(5.0);
    Ok((r_c, v1 * r_c / (e + 1.0)))
}

/// Generalized integral of `f` on ]0, upper[ with split point `split`.
///
/// The `−f_{-1} ln split` term is not added, so the value shifts by
/// `−f_{-1} ln c` when the split moves from 1 to c.
pub fn gen_integrate_with(f: &GenIntegrand, split: f64, cfg: &GenConfig) -> Result<GenResult> {
    if !(split > 0.0 && split < f.upper) {
        return Err(Error::Domain {
            module: "genquad",
            value: split,
            reason: "split must lie inside ]0, upper[",
        });
    }
    let exp = &f.expansion;
    let qcfg = QuadConfig::with_rel_tol(cfg.rel_tol);
    let mut value = 0.0;
    let mut error = 0.0;
    for t in exp.subtracted() {
        if (t.exponent + 1.0).abs() >= EXPONENT_TOL {
            value += t.coefficient * split.powf(t.exponent + 1.0) / (t.exponent + 1.0);
        }
    }
    let r_lo = match exp.converged_radius {
        Some(r) => r.min(split),
        None => 0.0,
    };
    if cfg.probe {
        probe(f, split, r_lo)?;
    }
    if r_lo > 0.0 {
        for t in exp.regular() {
            let v = t.coefficient * power_log_integral(t.exponent, t.log_power, r_lo);
            value += v;
            error += 4.0 * f64::EPSILON * v.abs();
        }
    }
    let remainder = |r: f64| f.eval(r) - exp.eval_subtracted(r);
    let middle = if r_lo > 0.0 {
        if r_lo < split {
            integrate(remainder, r_lo, split, &qcfg)?
        } else {
            QuadResult::zero()
        }
    } else {
        let (r_c, head) = small_r_head(f, split)?;
        value += head;
        error += head.abs() * r_c;
        // the subtraction cannot be resolved below its rounding floor at r_c
        let floor = 64.0 * f64::EPSILON * r_c * exp.magnitude(r_c);
        let mcfg = QuadConfig {
            abs_tol: qcfg.abs_tol.max(floor),
            ..qcfg
        };
        integrate(remainder, r_c, split, &mcfg)?
    };
    let tail = match f.tail {
        Tail::Exponential { rate } => integrate_exponential_tail(|r| f.eval(r), split, rate, &qcfg)?,
        Tail::Power { exponent } => integrate_power_tail(|r| f.eval(r), split, exponent, &qcfg)?,
        Tail::Unbounded => integrate_semi_infinite(|r| f.eval(r), split, &qcfg)?,
        Tail::Finite { endpoint_exponent } => {
            if endpoint_exponent < 0.0 {
                integrate_right_singular(|r| f.eval(r), split, f.upper, endpoint_exponent, &qcfg)?
            } else {
                integrate(|r| f.eval(r), split, f.upper, &qcfg)?
            }
        }
    };
    value += middle.value + tail.value;
    error += middle.error + tail.error;
    Ok(GenResult {
        value,
        anomaly: exp.anomaly(),
        error,
    })
}

/// `gen∫(split = c) − gen∫(split = 1)`; equals `−f_{-1} ln c`.
pub fn split_shift(f: &GenIntegrand, c: f64) -> Result<f64> {
    Ok(gen_integrate(f, c)?.value - gen_integrate(f, 1.0)?.value)
}

/// `(gen∫ f, gen∫ a f(a u) du + f_{-1} ln a)`.
pub fn scaling_check(f: &GenIntegrand, a: f64) -> Result<(f64, f64)> {
    let lhs = gen_integrate(f, 1.0)?;
    let rhs = gen_integrate(&f.scaled(a), 1.0)?;
    Ok((lhs.value, rhs.value + lhs.anomaly * a.ln()))
}

/// `(gen∫ f, gen∫ p u^{p-1} f(u^p) du)`; the two agree.
pub fn power_transform_check(f: &GenIntegrand, p: f64) -> Result<(f64, f64)> {
    let lhs = gen_integrate(f, 1.0)?;
    let rhs = gen_integrate(&f.power_transformed(p), 1.0)?;
    Ok((lhs.value, rhs.value))
}

#[cfg(test)]
mod tests {
    use crate::quad::integrate_left_singular;
    use super::*;
    use crate::specfun::gamma::EULER_GAMMA;
    use std::f64::consts::PI;

    fn gamma_power(s: f64, terms: &[(f64, f64)]) -> GenIntegrand {
        let exp = SingularExpansion::new(terms.iter().map(|&(e, c)| SingularTerm::new(e, c)).collect(), 1.0).unwrap();
        GenIntegrand::new(move |r: f64| r.powf(s) * (-r).exp(), exp, f64::INFINITY, Tail::Exponential { rate: 1.0 })
    }

    #[test]
    fn ordinary_integral_is_reproduced() {
        let f = gamma_power(0.0, &[]);
        let v = gen_integrate(&f, 1.0).unwrap();
        assert!((v.value - 1.0).abs() < 1e-13);
        assert_eq!(v.anomaly, 0.0);
    }

    #[test]
    fn continuation_of_gamma() {
        let f = gamma_power(-1.5, &[(-1.5, 1.0), (-0.5, -1.0)]);
        let v = gen_integrate(&f, 1.0).unwrap();
        assert!((v.value + 2.0 * PI.sqrt()).abs() < 1e-10, "{}", v.value);
    }

    #[test]
    fn anomalous_exponential_integral() {
        let f = gamma_power(-1.0, &[(-1.0, 1.0)]);
        let v = gen_integrate(&f, 1.0).unwrap();
        // independent route: two ordinary quadratures
        let cfg = QuadConfig::with_rel_tol(1e-13);
        let a = integrate(|r: f64| if r == 0.0 { -1.0 } else { ((-r).exp() - 1.0) / r }, 0.0, 1.0, &cfg).unwrap();
        let b = integrate_exponential_tail(|r: f64| (-r).exp() / r, 1.0, 1.0, &cfg).unwrap();
        assert!((v.value - (a.value + b.value)).abs() < 1e-12);
        assert!((v.value + EULER_GAMMA).abs() < 1e-12);
        assert_eq!(v.anomaly, 1.0);
    }

    #[test]
    fn split_law() {
        let f = gamma_power(-1.0, &[(-1.0, 1.0)]);
        assert!((split_shift(&f, 2.0).unwrap() + 2f64.ln()).abs() < 1e-10);
        assert!(split_shift(&f, 1.0).unwrap().abs() < 1e-15);
        let g = gamma_power(-1.5, &[(-1.5, 1.0), (-0.5, -1.0)]);
        assert!(split_shift(&g, 7.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn scaling_and_power_laws() {
        let f = gamma_power(-1.0, &[(-1.0, 1.0)]);
        let (l, r) = scaling_check(&f, 3.0).unwrap();
        assert!((l - r).abs() < 1e-10);
        let g = gamma_power(-1.5, &[(-1.5, 1.0), (-0.5, -1.0)]);
        let (l, r) = power_transform_check(&g, 2.0).unwrap();
        assert!((l - r).abs() < 1e-9, "{l} {r}");
        assert!((r + 2.0 * PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn wrong_expansion_is_detected() {
        let f = gamma_power(-1.5, &[(-1.5, 1.1), (-0.5, -1.0)]);
        assert!(matches!(gen_integrate(&f, 1.0), Err(Error::ExpansionMismatch { .. })));
    }

    #[test]
    fn log_terms_below_minus_one_rejected() {
        assert!(SingularExpansion::new(vec![SingularTerm::with_log(-1.0, 1, 1.0)], 1.0).is_err());
    }

    #[test]
    fn power_log_integral_matches_quadrature() {
        for &(e, m) in &[(0.5, 0u32), (1.0, 1), (-0.3, 2), (2.0, 2)] {
            let exact = power_log_integral(e, m, 0.7);
            let q = integrate_left_singular(
                |r: f64| r.powf(e) * r.ln().powi(m as i32),
                0.0,
                0.7,
                e.min(0.0) - 0.01,
                &QuadConfig::default(),
            )
            .unwrap();
            assert!((exact - q.value).abs() < 1e-11 * exact.abs().max(1.0), "e={e} m={m}");
        }
    }
}
