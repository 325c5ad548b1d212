//! Closed forms of the bilinear integrals
//!
//! ```text
//! ∫_0^∞ K_α(ar) K_α(br) 2r dr,   ∫ S_{α,iβ1} S_{α,iβ2} (1−w²)^α d(2w),
//! ∫ Z_{α,λ1} Z_{α,λ2} (w²−1)^α d(2w),
//! ```
//!
//! their generalized continuations in α, the anomalous integer-order
//! values, and extrapolated diagonal limits.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extrapolate::{limit_richardson, limit_symmetric, Extrapolated};
use crate::specfun::gamma::{digamma, ln_abs_gamma_sq, rgamma};

/// Thresholds for the special routes.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormConfig {
    /// Orders closer than this to a non-zero integer are rejected by the
    /// continuation formulas.
    pub integer_distance: f64,
    /// Relative separation |a−b|/b below which the Macdonald bilinear is
    /// evaluated by interpolation in (a−b)².
    pub near_diagonal: f64,
}

impl Default for ClosedFormConfig {
    fn default() -> Self {
        Self {
            integer_distance: 1e-6,
            near_diagonal: 1e-4,
        }
    }
}

fn integer_part(alpha: f64) -> Option<i64> {
    if alpha == alpha.round() {
        Some(alpha.round() as i64)
    } else {
        None
    }
}

fn check_continuation(alpha: f64, cfg: &ClosedFormConfig) -> Result<()> {
    let n = alpha.round();
    let d = (alpha - n).abs();
    if n != 0.0 && d > 0.0 && d < cfg.integer_distance {
        return Err(Error::NearInteger { alpha, distance: d });
    }
    Ok(())
}

/// `f(m + δ, m − δ)` for small δ from samples at larger separations; `f`
/// must be symmetric so the samples are even in δ.
fn even_interpolation<F: Fn(f64, f64) -> Result<f64>>(f: F, a: f64, b: f64) -> Result<f64> {
    let m = 0.5 * (a + b);
    let target = (0.5 * (a - b)).powi(2);
    let h = 0.05 * m;
    let xs: Vec<f64> = (1..=6).map(|j| (j as f64 * h).powi(2)).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for j in 1..=6 {
        let d = j as f64 * h;
        ys.push(f(m + d, m - d)?);
    }
    // Neville
    let n = xs.len();
    for k in 1..n {
        for i in (k..n).rev() {
            ys[i] = ((target - xs[i - k]) * ys[i] - (target - xs[i]) * ys[i - 1]) / (xs[i] - xs[i - k]);
        }
    }
    Ok(ys[n - 1])
}

fn mac_bilinear_raw(alpha: f64, a: f64, b: f64) -> f64 {
    let n = alpha.abs();
    match integer_part(n) {
        Some(0) => 2.0 * (a / b).ln() / (a * a - b * b),
        Some(k) => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let r = a / b;
            let mut v = sign * 2.0 * (r.powi(k as i32) * (a / 2.0).ln() - r.powi(-(k as i32)) * (b / 2.0).ln())
                / (a * a - b * b);
            let mut s = 0.0;
            for j in 0..k {
                let psi = digamma(1.0 + j as f64).unwrap() + digamma((k - j) as f64).unwrap();
                s += r.powi((2 * j - k + 1) as i32) * psi;
            }
            v -= sign / (a * b) * s;
            v
        }
        None => {
            let l = (a / b).ln();
            PI * 2.0 * (alpha * l).sinh() / ((PI * alpha).sin() * (a * a - b * b))
        }
    }
}

/// `∫_0^∞ K_α(ar) K_α(br) 2r dr` for a ≠ b: the standard value on
/// |α| < 1, its continuation for non-integer α, and the anomalous
/// generalized value for integer α.
pub fn mac_bilinear_closed(alpha: f64, a: f64, b: f64) -> Result<f64> {
    mac_bilinear_closed_with(alpha, a, b, &ClosedFormConfig::default())
}

pub fn mac_bilinear_closed_with(alpha: f64, a: f64, b: f64, cfg: &ClosedFormConfig) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain {
            module: "closedforms.mac_bilinear",
            value: a.min(b),
            reason: "scale factors must be positive",
        });
    }
    if a == b {
        return Err(Error::Diagonal {
            formula: "mac_bilinear_closed",
            redirect: "mac_square_closed",
        });
    }
    check_continuation(alpha, cfg)?;
    if (a - b).abs() < cfg.near_diagonal * b {
        return even_interpolation(|x, y| Ok(mac_bilinear_raw(alpha, x, y)), a, b);
    }
    Ok(mac_bilinear_raw(alpha, a, b))
}

/// `∫_0^∞ K_α(br)² 2r dr` (generalized for |α| ≥ 1).
pub fn mac_square_closed(alpha: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain {
            module: "closedforms.mac_square",
            value: b,
            reason: "scale factor must be positive",
        });
    }
    check_continuation(alpha, &ClosedFormConfig::default())?;
    let n = alpha.abs();
    let b2 = b * b;
    Ok(match integer_part(n) {
        Some(0) => 1.0 / b2,
        Some(k) => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let kf = k as f64;
            sign / b2 * (kf * (b2 / 4.0).ln() + 1.0 + 2.0 * kf * (1.0 - digamma(1.0 + kf)?))
        }
        None => PI * alpha / (b2 * (PI * alpha).sin()),
    })
}

/// `(β1²−β2²)`-free part of the **S** bilinear; `cosh(πβ1)/|Γ(½+α+iβ2)|²`.
fn s_term(alpha: f64, b1: f64, b2: f64) -> f64 {
    // ln cosh(πβ) = πβ + ln((1 + e^{−2πβ})/2)
    let x = PI * b1.abs();
    let ln_cosh = x + (-2.0 * x).exp().ln_1p() - 2f64.ln();
    (ln_cosh - ln_abs_gamma_sq(0.5 + alpha, b2)).exp()
}

/// `∫ S_{α,iβ1} S_{α,iβ2} (1−w²)^α d(2w)` over ]−1, 1[ for β1 ≠ β2.
pub fn geg_s_bilinear_closed(alpha: f64, beta1: f64, beta2: f64) -> Result<f64> {
    if beta1.abs() == beta2.abs() {
        return Err(Error::Diagonal {
            formula: "geg_s_bilinear_closed",
            redirect: "limit_diagonal",
        });
    }
    if integer_part(alpha).is_some() {
        return Err(Error::NearInteger { alpha, distance: 0.0 });
    }
    if alpha <= -1.0 {
        return Err(Error::Domain {
            module: "closedforms.geg_s_bilinear",
            value: alpha,
            reason: "order must exceed -1",
        });
    }
    check_continuation(alpha, &ClosedFormConfig::default())?;
    let pre = 2f64.powf(2.0 * alpha + 2.0) / ((beta1 * beta1 - beta2 * beta2) * (PI * alpha).sin());
    Ok(pre * (s_term(alpha, beta1, beta2) - s_term(alpha, beta2, beta1)))
}

/// `∫ Z_{α,λ1} Z_{α,λ2} (w²−1)^α d(2w)` over ]1, ∞[ for λ1 ≠ λ2.
pub fn geg_z_bilinear_closed(alpha: f64, l1: f64, l2: f64) -> Result<f64> {
    if l1 == l2 {
        return Err(Error::Diagonal {
            formula: "geg_z_bilinear_closed",
            redirect: "limit_diagonal",
        });
    }
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::Domain {
            module: "closedforms.geg_z_bilinear",
            value: l1.min(l2),
            reason: "degrees must be positive",
        });
    }
    if integer_part(alpha).is_some() {
        return Err(Error::NearInteger { alpha, distance: 0.0 });
    }
    check_continuation(alpha, &ClosedFormConfig::default())?;
    let pre = 2f64.powf(l1 + l2 + 1.0) / ((l1 * l1 - l2 * l2) * (PI * alpha).sin());
    let t1 = rgamma(0.5 - alpha + l1) * rgamma(0.5 + alpha + l2);
    let t2 = rgamma(0.5 - alpha + l2) * rgamma(0.5 + alpha + l1);
    Ok(pre * (t1 - t2))
}

/// Families whose diagonal value is obtained as a limit of the
/// off-diagonal closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitFamily {
    /// a → b in the Macdonald bilinear.
    Macdonald { alpha: f64, b: f64 },
    /// β1 → β2 in the **S** bilinear.
    GegenbauerS { alpha: f64, beta: f64 },
    /// λ1 → λ2 in the **Z** bilinear.
    GegenbauerZ { alpha: f64, lambda: f64 },
    /// α → 0 in the **S** bilinear.
    GegenbauerSOrder { beta1: f64, beta2: f64 },
    /// α → 0 in the **Z** bilinear.
    GegenbauerZOrder { l1: f64, l2: f64 },
}

/// Number of samples in the geometric sequence.
pub const LIMIT_TERMS: usize = 6;

/// Limit of an off-diagonal closed form, by Richardson extrapolation in
/// the squared separation (the symmetric formulas are even in it).
pub fn limit_diagonal(family: LimitFamily) -> Result<Extrapolated> {
    let mut failure = None;
    let mut guard = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let e = match family {
        LimitFamily::Macdonald { alpha, b } => limit_richardson(
            |h| guard(mac_bilinear_closed(alpha, b + h, b - h)),
            0.1 * b,
            2.0,
            LIMIT_TERMS,
            2.0,
        ),
        LimitFamily::GegenbauerS { alpha, beta } => {
            let h0 = 0.1 * beta.abs().max(0.1);
            limit_richardson(
                |h| guard(geg_s_bilinear_closed(alpha, beta + h, beta - h)),
                h0,
                2.0,
                LIMIT_TERMS,
                2.0,
            )
        }
        LimitFamily::GegenbauerZ { alpha, lambda } => limit_richardson(
            |h| guard(geg_z_bilinear_closed(alpha, lambda + h, lambda - h)),
            0.1 * lambda,
            2.0,
            LIMIT_TERMS,
            2.0,
        ),
        LimitFamily::GegenbauerSOrder { beta1, beta2 } => {
            limit_symmetric(|a| guard(geg_s_bilinear_closed(a, beta1, beta2)), 0.0, 0.05, LIMIT_TERMS)
        }
        LimitFamily::GegenbauerZOrder { l1, l2 } => {
            limit_symmetric(|a| guard(geg_z_bilinear_closed(a, l1, l2)), 0.0, 0.05, LIMIT_TERMS)
        }
    };
    if let Some(err) = failure {
        return Err(err);
    }
    e.require(1e-8, 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::EULER_GAMMA;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn elementary_values() {
        assert!(rel(mac_bilinear_closed(0.5, 2.0, 1.0).unwrap(), PI / (3.0 * 2f64.sqrt())) < 1e-14);
        assert!(rel(mac_bilinear_closed(0.0, 2.0, 1.0).unwrap(), 2.0 * 2f64.ln() / 3.0) < 1e-15);
        assert!(rel(mac_square_closed(0.5, 1.0).unwrap(), PI / 2.0) < 1e-15);
        assert!(rel(mac_square_closed(0.0, 3.0).unwrap(), 1.0 / 9.0) < 1e-15);
        assert!(rel(mac_square_closed(1.0, 2.0).unwrap(), -(1.0 + 2.0 * EULER_GAMMA) / 4.0) < 1e-14);
        assert!(rel(geg_z_bilinear_closed(0.5, 2.0, 1.0).unwrap(), 8.0 / 3.0) < 1e-14);
    }

    #[test]
    fn diagonal_arguments_redirect() {
        assert!(matches!(mac_bilinear_closed(0.3, 1.0, 1.0), Err(Error::Diagonal { .. })));
        assert!(matches!(geg_z_bilinear_closed(0.3, 1.0, 1.0), Err(Error::Diagonal { .. })));
        assert!(matches!(geg_s_bilinear_closed(0.3, 1.0, 1.0), Err(Error::Diagonal { .. })));
    }

    #[test]
    fn symmetric_in_spectral_parameters() {
        let x = mac_bilinear_closed(0.4, 2.0, 1.3).unwrap();
        assert!(rel(mac_bilinear_closed(0.4, 1.3, 2.0).unwrap(), x) < 1e-14);
        let s = geg_s_bilinear_closed(0.3, 0.5, 1.0).unwrap();
        assert!(rel(geg_s_bilinear_closed(0.3, 1.0, 0.5).unwrap(), s) < 1e-14);
        let z = geg_z_bilinear_closed(0.3, 0.5, 1.7).unwrap();
        assert!(rel(geg_z_bilinear_closed(0.3, 1.7, 0.5).unwrap(), z) < 1e-14);
    }

    #[test]
    fn near_diagonal_is_continuous() {
        for &al in &[-0.7, 0.4, 0.0, 1.0] {
            let sq = mac_square_closed(al, 1.0).unwrap();
            let near = mac_bilinear_closed(al, 1.0 + 1e-7, 1.0).unwrap();
            assert!(rel(near, sq) < 1e-6, "α={al}: {near} vs {sq}");
        }
    }

    #[test]
    fn macdonald_limit_matches_square() {
        for &al in &[-0.7, 0.4] {
            let l = limit_diagonal(LimitFamily::Macdonald { alpha: al, b: 1.3 }).unwrap();
            assert!(rel(l.value, mac_square_closed(al, 1.3).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn anomalous_zero_order_reduces_to_logarithm() {
        // empty ψ-sum at α = 0
        let v = mac_bilinear_raw(0.0, 3.0, 2.0);
        assert!(rel(v, 2.0 * 1.5f64.ln() / 5.0) < 1e-15);
    }
}
