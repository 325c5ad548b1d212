//! Smooth reparametrizations r = g(u) of generalized integrals.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{gen_integrate, GenIntegrand, RealFn, SingularExpansion, SingularTerm, Tail, DELTA, EXPONENT_TOL};
use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Taylor length stored for polynomial maps.
const POLYNOMIAL_ORDER: usize = 32;

/// A map with `g(0) = 0`, `g'(0) > 0`, given by values, derivative and
/// Taylor coefficients `taylor[k] = g^{(k)}(0)/k!` (`taylor[0] = 0`).
#[derive(Clone)]
pub struct SmoothMap {
    pub g: RealFn,
    pub dg: RealFn,
    pub taylor: Vec<f64>,
}

impl SmoothMap {
    pub fn new<G, D>(g: G, dg: D, taylor: Vec<f64>) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            g: Arc::new(g),
            dg: Arc::new(dg),
            taylor,
        }
    }

    /// `u ↦ c u`.
    pub fn linear(c: f64) -> Self {
        Self::polynomial(vec![0.0, c])
    }

    /// `u ↦ Σ coeffs[k] u^k`.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let mut taylor = coeffs.clone();
        taylor.resize(taylor.len().max(POLYNOMIAL_ORDER), 0.0);
        let c1 = coeffs.clone();
        let c2 = coeffs.clone();
        Self::new(
            move |u| c1.iter().rev().fold(0.0, |acc, &c| acc * u + c),
            move |u| {
                c2.iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(0.0, |acc, (k, &c)| acc * u + k as f64 * c)
            },
            taylor,
        )
    }

    /// `u ↦ sinh u`.
    pub fn sinh(order: usize) -> Self {
        let mut taylor = vec![0.0; order + 1];
        let mut fact = 1.0;
        for (k, t) in taylor.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            if k % 2 == 1 {
                *t = 1.0 / fact;
            }
        }
        Self::new(f64::sinh, f64::cosh, taylor)
    }

    /// Taylor coefficients up to `order` fitted from values of `g` on
    /// [−h, h] by Chebyshev interpolation; `g` must be smooth there.
    pub fn fitted<G, D>(g: G, dg: D, order: usize, h: f64) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let n = 14usize;
        let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
        let values: Vec<f64> = nodes.iter().map(|&x| g(h * x)).collect();
        // Chebyshev coefficients
        let cheb: Vec<f64> = (0..n)
            .map(|k| {
                let s: f64 = (0..n)
                    .map(|j| values[j] * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .sum();
                if k == 0 {
                    s / n as f64
                } else {
                    2.0 * s / n as f64
                }
            })
            .collect();
        // monomial coefficients of Σ cheb_k T_k(x)
        let mut mono = vec![0.0; n];
        let mut t_prev = vec![0.0; n];
        let mut t_cur = vec![0.0; n];
        t_prev[0] = 1.0;
        t_cur[1] = 1.0;
        for (i, &c) in t_prev.iter().enumerate() {
            mono[i] += cheb[0] * c;
        }
        for (i, &c) in t_cur.iter().enumerate() {
            mono[i] += cheb[1] * c;
        }
        for &ck in cheb.iter().skip(2) {
            let mut next = vec![0.0; n];
            for i in 0..n {
                if i + 1 < n {
                    next[i + 1] += 2.0 * t_cur[i];
                }
                next[i] -= t_prev[i];
            }
            for (i, &c) in next.iter().enumerate() {
                mono[i] += ck * c;
            }
            t_prev = t_cur;
            t_cur = next;
        }
        let taylor: Vec<f64> = (0..=order.min(n - 1))
            .map(|k| if k == 0 { 0.0 } else { mono[k] / h.powi(k as i32) })
            .collect();
        Self::new(g, dg, taylor)
    }

    /// Taylor series of `g(u)/u` with `len` coefficients.
    fn quotient(&self, len: usize) -> Result<PowerSeries> {
        if self.taylor.len() < len + 1 {
            return Err(Error::MissingDerivative {
                order: self.taylor.len().max(1) - 1 + 1,
            });
        }
        Ok(PowerSeries::from_real(&self.taylor[1..=len]))
    }
}

/// Correction `gen∫ f(g(u)) g'(u) du − gen∫ f(r) dr`:
///
/// ```text
/// −f_{-1} ln g'(0) + Σ_{l ≥ 2} f_{-l}/((l−1)(l−1)!) · d^{l−1}/du^{l−1} (u/g(u))^{l−1} |_{u=0}.
/// ```
pub fn change_of_var_correction(expansion: &SingularExpansion, map: &SmoothMap) -> Result<f64> {
    let g1 = map.taylor.get(1).copied().unwrap_or(0.0);
    if !(g1 > 0.0) {
        return Err(Error::Domain {
            module: "genquad",
            value: g1,
            reason: "change of variables needs g'(0) > 0",
        });
    }
    let mut total = -expansion.anomaly() * g1.ln();
    for t in expansion.subtracted() {
        let l = -t.exponent;
        if l < 1.5 || (l - l.round()).abs() > EXPONENT_TOL {
            continue;
        }
        let l = l.round() as usize;
        let n = l - 1;
        // (u/g)^n = (g/u)^{-n}; the n-th derivative at 0 is n! times the
        // coefficient of u^n.
        let q = map.quotient(n + 1).map_err(|_| Error::MissingDerivative { order: n })?;
        let c = q.powf(-(n as f64)).coeffs[n].re;
        total += t.coefficient / n as f64 * c;
    }
    Ok(total)
}

/// Singular part of the expansion of `u ↦ f(g(u)) g'(u)` from that of `f`.
pub fn compose_expansion(expansion: &SingularExpansion, map: &SmoothMap) -> Result<SingularExpansion> {
    let mut terms = Vec::new();
    for t in expansion.subtracted() {
        // number of u-powers needed to reach the integrable range
        let len = ((-1.0 + DELTA - t.exponent).floor().max(0.0) as usize) + 1;
        let q = map.quotient(len)?;
        let dg = PowerSeries::new(
            (0..len)
                .map(|k| Complex64::new((k + 1) as f64 * map.taylor[k + 1], 0.0))
                .collect(),
        );
        let s = q.powf(t.exponent).mul(&dg);
        for (k, c) in s.coeffs.iter().enumerate() {
            let e = t.exponent + k as f64;
            if e <= -1.0 + DELTA + EXPONENT_TOL {
                terms.push(SingularTerm::new(e, t.coefficient * c.re));
            }
        }
    }
    let radius = expansion.radius.min(1.0);
    SingularExpansion::new(terms, radius)
}

/// End-to-end check: `(gen∫ f(g(u)) g'(u) du − gen∫ f dr, correction)`.
///
/// `f` must have an unbounded upper limit and a singular-only expansion;
/// `g` must map ]0, ∞[ onto ]0, ∞[.
pub fn change_of_var_check(f: &GenIntegrand, map: &SmoothMap) -> Result<(f64, f64)> {
    let base = gen_integrate(f, 1.0)?;
    let inner = f.f.clone();
    let g = map.g.clone();
    let dg = map.dg.clone();
    let transformed = GenIntegrand {
        f: Arc::new(move |u| inner(g(u)) * dg(u)),
        expansion: compose_expansion(&f.expansion, map)?,
        upper: f.upper,
        tail: Tail::Unbounded,
    };
    let moved = gen_integrate(&transformed, 1.0)?;
    Ok((moved.value - base.value, change_of_var_correction(&f.expansion, map)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_with_poles(a: f64, b: f64) -> GenIntegrand {
        let exp = SingularExpansion::new(
            vec![
                SingularTerm::new(-2.0, b),
                SingularTerm::new(-1.0, a - b),
            ],
            1.0,
        )
        .unwrap();
        GenIntegrand::new(
            move |r: f64| (b / (r * r) + a / r) * (-r).exp(),
            exp,
            f64::INFINITY,
            Tail::Exponential { rate: 1.0 },
        )
    }

    #[test]
    fn pure_scaling() {
        let f = exp_with_poles(0.7, 0.0);
        let c = change_of_var_correction(&f.expansion, &SmoothMap::linear(3.0)).unwrap();
        assert!((c + 0.7 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(change_of_var_correction(&f.expansion, &SmoothMap::linear(1.0)).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_map_second_order_term() {
        let exp = SingularExpansion::new(vec![SingularTerm::new(-2.0, 1.5)], 1.0).unwrap();
        let c = change_of_var_correction(&exp, &SmoothMap::polynomial(vec![0.0, 1.0, 1.0])).unwrap();
        assert!((c + 1.5).abs() < 1e-14);
    }

    #[test]
    fn end_to_end_maps() {
        let f = exp_with_poles(0.4, 1.3);
        for map in [SmoothMap::polynomial(vec![0.0, 1.0, 1.0]), SmoothMap::sinh(6)] {
            let (diff, corr) = change_of_var_check(&f, &map).unwrap();
            assert!((diff - corr).abs() < 1e-8, "{diff} vs {corr}");
        }
    }

    #[test]
    fn fitted_taylor_of_sinh() {
        let m = SmoothMap::fitted(f64::sinh, f64::cosh, 5, 0.5);
        let exact = SmoothMap::sinh(5);
        for k in 0..=5 {
            assert!((m.taylor[k] - exact.taylor[k]).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn missing_orders_are_reported() {
        let exp = SingularExpansion::new(vec![SingularTerm::new(-3.0, 1.0)], 1.0).unwrap();
        let m = SmoothMap::new(|u| u, |_| 1.0, vec![0.0, 1.0]);
        assert!(matches!(
            change_of_var_correction(&exp, &m),
            Err(Error::MissingDerivative { order: 2 })
        ));
    }
}
