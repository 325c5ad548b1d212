//! Regularized Gauss hypergeometric function **F**(a, b; c; z) = F(a,b;c;z)/Γ(c)
//! on the real segment, with complex a, b and real c.
//!
//! Two representations are provided:
//!
//! * the power series at z = 0, summed until the tail bound drops below the
//!   tolerance;
//! * the connection to the singular point z = 1, returned as a list of
//!   [`Component`]s `t^shift (ln t)^log_power Σ_k c_k t^k` with `t = 1 - z`.
//!   For non-integer `s = c - a - b` this is the two-term formula with the
//!   factor π / sin(πs); for integer `s` the logarithmic form is used.
//!
//! Every routine takes a complex log-prefactor that is added to the
//! logarithm of each term before exponentiation, so callers can evaluate
//! quantities whose natural size is outside the floating point range.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::gamma::{digamma_complex, ln_gamma_complex};

pub const DEFAULT_TOL: f64 = 1e-16;
pub const DEFAULT_MAX_TERMS: usize = 2_000_000;

/// Distance from an integer below which `s = c - a - b` uses the
/// logarithmic connection formula.
pub const INTEGER_SNAP: f64 = 1e-12;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// ln(1/Γ(z)); `None` at the poles where 1/Γ vanishes.
fn ln_rgamma(z: Complex64) -> Option<Complex64> {
    if is_pole(z) {
        None
    } else {
        Some(-ln_gamma_complex(z))
    }
}

/// `exp(log_pref) · **F**(a, b; c; z)` from the series at the origin, |z| < 1.
pub fn series_reg(
    a: Complex64,
    b: Complex64,
    c: f64,
    z: f64,
    log_pref: Complex64,
    tol: f64,
    max_terms: usize,
) -> Result<Complex64> {
    if z.abs() >= 1.0 {
        return Err(Error::Domain {
            module: "specfun.hyp2f1",
            value: z,
            reason: "series needs |z| < 1",
        });
    }
    // First index with c + j not a pole of Γ.
    let j0 = if c <= 0.0 && c == c.round() { (1.0 - c) as usize } else { 0 };
    let mut head = log_pref;
    if j0 > 0 {
        let pa = crate::specfun::gamma::pochhammer(a, j0);
        let pb = crate::specfun::gamma::pochhammer(b, j0);
        if pa.norm() == 0.0 || pb.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        head += pa.ln() + pb.ln() - ln_gamma_complex(Complex64::new(j0 as f64 + 1.0, 0.0));
        if z == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        head += Complex64::new(z, 0.0).ln() * j0 as f64;
    }
    head -= ln_gamma_complex(Complex64::new(c + j0 as f64, 0.0));
    let mut term = head.exp();
    let mut sum = term;
    let turning = a.norm() + b.norm() + c.abs() + 2.0;
    let mut j = j0;
    loop {
        let jf = j as f64;
        let ratio = (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * z;
        term *= ratio;
        sum += term;
        j += 1;
        if term.norm() == 0.0 && jf > turning {
            break;
        }
        let r = ratio.norm();
        if jf > turning && r < 1.0 {
            let tail = term.norm() * r / (1.0 - r);
            if tail <= tol * sum.norm() {
                break;
            }
        }
        if j - j0 > max_terms {
            return Err(Error::SeriesNonConvergence {
                module: "specfun.hyp2f1",
                terms: max_terms,
            });
        }
    }
    Ok(sum)
}

/// One piece `t^shift (ln t)^log_power Σ_k coeffs[k] t^k` of a connection
/// formula.
#[derive(Debug, Clone)]
pub struct Component {
    pub shift: f64,
    pub log_power: u32,
    pub coeffs: Vec<Complex64>,
}

impl Component {
    pub fn eval(&self, t: f64) -> Complex64 {
        let poly = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c);
        let mut v = poly * t.powf(self.shift);
        for _ in 0..self.log_power {
            v *= t.ln();
        }
        v
    }
}

/// How many coefficients to generate for a series in `t`.
#[derive(Debug, Clone, Copy)]
pub enum Truncation {
    /// Until the tail at `t` is below `tol` relative to the partial sum.
    Adaptive { t: f64, tol: f64 },
    /// Exactly this many coefficients.
    Fixed(usize),
}

/// Coefficients of `exp(lead) Σ_k (a)_k (b)_k / (Γ(c+k) k!) t^k`; a zero
/// series when `lead` is `None` (vanishing reciprocal gamma).
fn reg_coeffs(
    a: Complex64,
    b: Complex64,
    c: f64,
    lead: Option<Complex64>,
    trunc: Truncation,
) -> Result<Vec<Complex64>> {
    let Some(lead) = lead else {
        return Ok(vec![Complex64::new(0.0, 0.0)]);
    };
    if c <= 0.0 && c == c.round() {
        // Shifted start; only needed for c ≤ 0 integer, which the connection
        // formulas below never produce with generic parameters.
        return Err(Error::Domain {
            module: "specfun.hyp2f1",
            value: c,
            reason: "connection series with non-positive integer lower parameter",
        });
    }
    let mut term = (lead - ln_gamma_complex(Complex64::new(c, 0.0))).exp();
    let mut coeffs = vec![term];
    let turning = a.norm() + b.norm() + c.abs() + 2.0;
    let mut sum_scale = term.norm();
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        term *= ratio;
        coeffs.push(term);
        k += 1;
        match trunc {
            Truncation::Fixed(n) => {
                if coeffs.len() >= n {
                    break;
                }
            }
            Truncation::Adaptive { t, tol } => {
                let mag = term.norm() * t.powi(k as i32);
                sum_scale = sum_scale.max(mag);
                let r = ratio.norm() * t;
                if mag == 0.0 && kf > turning {
                    break;
                }
                if kf > turning && r < 1.0 && mag * r / (1.0 - r) <= tol * sum_scale {
                    break;
                }
                if k > DEFAULT_MAX_TERMS {
                    return Err(Error::SeriesNonConvergence {
                        module: "specfun.hyp2f1",
                        terms: k,
                    });
                }
            }
        }
    }
    Ok(coeffs)
}

/// Connection of `exp(log_pref) **F**(a, b; c; 1 - t)` to `t = 0`.
///
/// Requires `s = c - a - b` to be real.
pub fn connection_components(
    a: Complex64,
    b: Complex64,
    c: f64,
    log_pref: Complex64,
    trunc: Truncation,
) -> Result<Vec<Component>> {
    let s_c = Complex64::new(c, 0.0) - a - b;
    if s_c.im.abs() > 1e-12 * (1.0 + s_c.re.abs()) {
        return Err(Error::Domain {
            module: "specfun.hyp2f1",
            value: s_c.im,
            reason: "connection formula needs real c - a - b",
        });
    }
    let s = s_c.re;
    let m = s.round();
    if (s - m).abs() < INTEGER_SNAP {
        if m > 0.0 {
            // Euler: **F**(a,b;c;z) = t^m **F**(c-a, c-b; c; z)
            let ca = Complex64::new(c, 0.0) - a;
            let cb = Complex64::new(c, 0.0) - b;
            let mut comps = log_connection(ca, cb, m as usize, log_pref, trunc)?;
            for comp in &mut comps {
                comp.shift += m;
            }
            return Ok(comps);
        }
        return log_connection(a, b, (-m) as usize, log_pref, trunc);
    }
    let sin = (PI * s).sin();
    let ln_factor = Complex64::new((PI / sin.abs()).ln(), if sin < 0.0 { PI } else { 0.0 });
    let ca = Complex64::new(c, 0.0) - a;
    let cb = Complex64::new(c, 0.0) - b;
    let lead1 = match (ln_rgamma(ca), ln_rgamma(cb)) {
        (Some(x), Some(y)) => Some(log_pref + ln_factor + x + y),
        _ => None,
    };
    let lead2 = match (ln_rgamma(a), ln_rgamma(b)) {
        // minus sign folded in as +iπ
        (Some(x), Some(y)) => Some(log_pref + ln_factor + x + y + Complex64::new(0.0, PI)),
        _ => None,
    };
    let first = Component {
        shift: 0.0,
        log_power: 0,
        coeffs: reg_coeffs(a, b, 1.0 - s, lead1, trunc)?,
    };
    let second = Component {
        shift: s,
        log_power: 0,
        coeffs: reg_coeffs(ca, cb, 1.0 + s, lead2, trunc)?,
    };
    Ok(vec![first, second])
}

/// Logarithmic connection for `c = a + b - m`, m = 0, 1, 2, ...
fn log_connection(
    a: Complex64,
    b: Complex64,
    m: usize,
    log_pref: Complex64,
    trunc: Truncation,
) -> Result<Vec<Component>> {
    let mf = m as f64;
    let mut comps = Vec::new();
    // Γ(m)/(Γ(a)Γ(b)) t^{-m} Σ_{k<m} (a-m)_k (b-m)_k / (k! (1-m)_k) t^k
    if m > 0 {
        if let (Some(ra), Some(rb)) = (ln_rgamma(a), ln_rgamma(b)) {
            let lead = (log_pref + ra + rb + ln_gamma_complex(Complex64::new(mf, 0.0))).exp();
            let mut coeffs = Vec::with_capacity(m);
            let mut term = lead;
            for k in 0..m {
                coeffs.push(term);
                let kf = k as f64;
                term *= (a - mf + kf) * (b - mf + kf) / ((kf + 1.0) * (1.0 - mf + kf));
            }
            // The finite sum is complete; pad so callers see a full-length series.
            if let Truncation::Fixed(n) = trunc {
                coeffs.resize(n.max(m), Complex64::new(0.0, 0.0));
            }
            comps.push(Component {
                shift: -mf,
                log_power: 0,
                coeffs,
            });
        }
    }
    // -(-1)^m / (Γ(a-m)Γ(b-m)) Σ_k (a)_k (b)_k / (k!(k+m)!) t^k
    //     × (ln t - ψ(k+1) - ψ(k+m+1) + ψ(a+k) + ψ(b+k))
    let (Some(ram), Some(rbm)) = (ln_rgamma(a - mf), ln_rgamma(b - mf)) else {
        return Ok(comps);
    };
    let sign_phase = if m % 2 == 0 { PI } else { 0.0 };
    let lead = log_pref + ram + rbm - ln_gamma_complex(Complex64::new(mf + 1.0, 0.0)) + Complex64::new(0.0, sign_phase);
    let mut term = lead.exp();
    let mut psi_a = digamma_complex(a);
    let mut psi_b = digamma_complex(b);
    let mut psi_k1 = -crate::specfun::gamma::EULER_GAMMA; // ψ(1)
    let mut psi_km1 = crate::specfun::gamma::digamma(mf + 1.0).unwrap_or(0.0);
    let mut log_coeffs = Vec::new();
    let mut plain_coeffs = Vec::new();
    let turning = a.norm() + b.norm() + mf + 2.0;
    let mut scale = 0.0f64;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        log_coeffs.push(term);
        let psi_sum = psi_a + psi_b - psi_k1 - psi_km1;
        let plain = if term.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { term * psi_sum };
        plain_coeffs.push(plain);
        let ratio = (a + kf) * (b + kf) / ((kf + 1.0) * (kf + mf + 1.0));
        let next = term * ratio;
        let stop = match trunc {
            Truncation::Fixed(n) => log_coeffs.len() >= n,
            Truncation::Adaptive { t, tol } => {
                let mag = (term.norm() * (1.0 + psi_sum.norm() + t.ln().abs())) * t.powi(k as i32);
                scale = scale.max(mag);
                let r = ratio.norm() * t;
                if k > DEFAULT_MAX_TERMS {
                    return Err(Error::SeriesNonConvergence {
                        module: "specfun.hyp2f1",
                        terms: k,
                    });
                }
                kf > turning && r < 1.0 && mag * r / (1.0 - r) <= tol * scale
            }
        };
        if stop {
            break;
        }
        psi_a += (a + kf).inv();
        psi_b += (b + kf).inv();
        psi_k1 += 1.0 / (kf + 1.0);
        psi_km1 += 1.0 / (kf + mf + 1.0);
        term = next;
        k += 1;
    }
    comps.push(Component {
        shift: 0.0,
        log_power: 1,
        coeffs: log_coeffs,
    });
    comps.push(Component {
        shift: 0.0,
        log_power: 0,
        coeffs: plain_coeffs,
    });
    Ok(comps)
}

/// `exp(log_pref) **F**(a, b; c; 1 - t)` through the connection formula.
pub fn connection_reg(a: Complex64, b: Complex64, c: f64, t: f64, log_pref: Complex64, tol: f64) -> Result<Complex64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain {
            module: "specfun.hyp2f1",
            value: t,
            reason: "connection formula needs 0 < 1 - z < 1",
        });
    }
    let comps = connection_components(a, b, c, log_pref, Truncation::Adaptive { t, tol })?;
    Ok(comps.iter().map(|comp| comp.eval(t)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elementary_reductions() {
        // F(1,1;2;z) = -ln(1-z)/z, Γ(2) = 1
        for &z in &[0.1, 0.5, 0.9] {
            let v = series_reg(c(1.0, 0.0), c(1.0, 0.0), 2.0, z, c(0.0, 0.0), 1e-16, 100_000).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!((v.re - exact).abs() < 1e-14 * exact, "z={z}");
        }
    }

    #[test]
    fn connection_agrees_with_series_non_integer() {
        let (a, b, cc) = (c(0.8, 0.6), c(0.8, -0.6), 1.3);
        for &z in &[0.55, 0.7, 0.9] {
            let s = series_reg(a, b, cc, z, c(0.0, 0.0), 1e-16, 1_000_000).unwrap();
            let k = connection_reg(a, b, cc, 1.0 - z, c(0.0, 0.0), 1e-16).unwrap();
            assert!((s - k).norm() < 1e-13 * s.norm(), "z={z}: {s} vs {k}");
        }
    }

    #[test]
    fn connection_agrees_with_series_integer() {
        // s = c - a - b = -2
        let (a, b) = (c(0.7, 0.4), c(0.9, -0.4));
        let cc = 1.6 - 2.0;
        let z = 0.93;
        let k = connection_reg(a, b, cc, 1.0 - z, c(0.0, 0.0), 1e-16).unwrap();
        // independent 30-digit evaluation
        let expected = c(183.735_707_809_969_506_607_603, 28.473_974_887_439_436_906_150_4);
        assert!((k - expected).norm() < 1e-12 * expected.norm(), "{k}");
        // s = 0 and s = +1 through the Euler branch, compared with the series
        for &cc in &[1.6, 2.6] {
            let z = 0.8;
            let s = series_reg(a, b, cc, z, c(0.0, 0.0), 1e-16, 1_000_000).unwrap();
            let k = connection_reg(a, b, cc, 1.0 - z, c(0.0, 0.0), 1e-16).unwrap();
            assert!((s - k).norm() < 1e-12 * s.norm(), "c={cc}: {s} vs {k}");
        }
    }

    #[test]
    fn log_prefactor_scales_result() {
        let (a, b) = (c(0.5, 2.0), c(0.5, -2.0));
        let v0 = series_reg(a, b, 1.4, 0.3, c(0.0, 0.0), 1e-16, 10_000).unwrap();
        let v1 = series_reg(a, b, 1.4, 0.3, c(-700.0, 0.0), 1e-16, 10_000).unwrap();
        assert!((v1 / (-700f64).exp() - v0).norm() < 1e-12 * v0.norm());
    }
}
