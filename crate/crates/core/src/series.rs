//! Truncated expansion arithmetic used to build endpoint expansions.
//!
//! [`PowerSeries`] is a truncated Taylor series in one variable.
//! [`Monomials`] is a finite sum `Σ c · u^e (ln u)^m` with real exponents,
//! together with the exponent below which the sum is exact.

use num_complex::Complex64;

type C = Complex64;

fn zero() -> C {
    C::new(0.0, 0.0)
}

/// Truncated power series `Σ_{k<n} c_k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<C>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "empty power series");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C::new(c, 0.0)).collect())
    }

    pub fn constant(c: C, len: usize) -> Self {
        let mut coeffs = vec![zero(); len];
        coeffs[0] = c;
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: C) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self::new((0..n).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `self^p` for real `p`; needs a nonzero constant term. The result is
    /// normalized by the principal branch of `c_0^p`.
    pub fn powf(&self, p: f64) -> Self {
        let n = self.len();
        let c0 = self.coeffs[0];
        assert!(c0 != zero(), "powf needs a nonzero constant term");
        // y = s^p satisfies s y' = p s' y.
        let mut y = vec![zero(); n];
        y[0] = c0.powf(p);
        for k in 1..n {
            let mut acc = zero();
            for j in 1..=k {
                let sj = self.coeffs[j];
                acc += sj * y[k - j] * (p * j as f64 - (k - j) as f64);
            }
            y[k] = acc / (c0 * k as f64);
        }
        Self::new(y)
    }

    /// `ln(self / c_0)`; needs a nonzero constant term.
    pub fn ln_normalized(&self) -> Self {
        let n = self.len();
        let c0 = self.coeffs[0];
        assert!(c0 != zero(), "ln needs a nonzero constant term");
        // l' = s'/s
        let mut l = vec![zero(); n];
        for k in 1..n {
            let mut acc = self.coeffs[k] * k as f64;
            for j in 1..k {
                acc -= l[j] * j as f64 * self.coeffs[k - j];
            }
            l[k] = acc / (c0 * k as f64);
        }
        Self::new(l)
    }

    /// `Σ c_k g^k` where `g` has no constant term.
    pub fn compose(&self, g: &Self) -> Self {
        assert!(g.coeffs[0] == zero(), "inner series must vanish at 0");
        let n = self.len().min(g.len());
        let mut out = PowerSeries::constant(zero(), n);
        for &c in self.coeffs.iter().take(n).rev() {
            // Horner: out = out * g + c
            out = out.mul(g);
            out.coeffs[0] += c;
        }
        out
    }

    /// `1/self`.
    pub fn recip(&self) -> Self {
        self.powf(-1.0)
    }
}

/// One term `c · u^exponent · (ln u)^log_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub exponent: f64,
    pub log_power: u32,
    pub coeff: C,
}

/// Finite sum of monomials, exact for exponents below `cut`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomials {
    pub terms: Vec<Monomial>,
    pub cut: f64,
}

/// Exponents closer than this are treated as equal.
pub const EXPONENT_MERGE: f64 = 1e-10;

impl Monomials {
    pub fn new(terms: Vec<Monomial>, cut: f64) -> Self {
        let mut m = Self { terms, cut };
        m.truncate();
        m
    }

    /// `u^shift (ln u)^log_power · series(u)`, exact below `shift + len`.
    pub fn from_series(shift: f64, log_power: u32, series: &PowerSeries) -> Self {
        let terms = series
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| Monomial {
                exponent: shift + k as f64,
                log_power,
                coeff: c,
            })
            .collect();
        Self::new(terms, shift + series.len() as f64)
    }

    fn truncate(&mut self) {
        let cut = self.cut;
        self.terms.retain(|t| t.exponent < cut - EXPONENT_MERGE);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::new(terms, self.cut.min(other.cut)).merged()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lo1 = self.min_exponent();
        let lo2 = other.min_exponent();
        let cut = (self.cut + lo2).min(other.cut + lo1);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let e = a.exponent + b.exponent;
                if e < cut - EXPONENT_MERGE {
                    terms.push(Monomial {
                        exponent: e,
                        log_power: a.log_power + b.log_power,
                        coeff: a.coeff * b.coeff,
                    });
                }
            }
        }
        Self::new(terms, cut).merged()
    }

    pub fn scale(&self, s: C) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Monomial { coeff: t.coeff * s, ..*t })
                .collect(),
            cut: self.cut,
        }
    }

    pub fn min_exponent(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.exponent)
            .fold(self.cut, f64::min)
    }

    /// Combines terms with equal `(exponent, log_power)`. A sum that
    /// cancels to rounding level relative to its parts is set to zero.
    pub fn merged(&self) -> Self {
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| {
            a.exponent
                .partial_cmp(&b.exponent)
                .unwrap()
                .then(a.log_power.cmp(&b.log_power))
        });
        let mut out: Vec<(Monomial, f64)> = Vec::new();
        for t in sorted {
            if let Some((last, mag)) = out.iter_mut().rev().find(|(m, _)| {
                (m.exponent - t.exponent).abs() < EXPONENT_MERGE && m.log_power == t.log_power
            }) {
                last.coeff += t.coeff;
                *mag += t.coeff.norm();
            } else {
                out.push((t, t.coeff.norm()));
            }
        }
        let terms = out
            .into_iter()
            .map(|(mut m, mag)| {
                if m.coeff.norm() <= 64.0 * f64::EPSILON * mag {
                    m.coeff = zero();
                }
                m
            })
            .collect();
        Self { terms, cut: self.cut }
    }

    pub fn eval(&self, u: f64) -> C {
        let l = u.ln();
        self.terms
            .iter()
            .map(|t| t.coeff * u.powf(t.exponent) * l.powi(t.log_power as i32))
            .sum()
    }

    /// Sum of |terms| at `u`, used as a rounding scale.
    pub fn magnitude(&self, u: f64) -> f64 {
        let l = u.ln().abs();
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * u.powf(t.exponent) * l.powi(t.log_power as i32))
            .sum()
    }

    /// Largest `u ≤ max` on the grid `max · 0.8^k` at which the terms in
    /// the top unit of exponents are below `tol` times the total magnitude.
    pub fn radius(&self, max: f64, tol: f64) -> f64 {
        let top = self.cut - 1.0;
        let mut u = max;
        for _ in 0..400 {
            let l = u.ln().abs();
            let tail: f64 = self
                .terms
                .iter()
                .filter(|t| t.exponent >= top)
                .map(|t| t.coeff.norm() * u.powf(t.exponent) * l.powi(t.log_power as i32))
                .sum();
            let all = self.magnitude(u);
            if tail <= tol * all {
                return u;
            }
            u *= 0.8;
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    fn exp_series(n: usize) -> PowerSeries {
        let mut v = vec![c(1.0)];
        for k in 1..n {
            let prev = v[k - 1];
            v.push(prev / k as f64);
        }
        PowerSeries::new(v)
    }

    #[test]
    fn powf_matches_binomial_series() {
        // (1 + x)^{1/2}
        let s = PowerSeries::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let r = s.powf(0.5);
        let expected = [1.0, 0.5, -0.125, 0.0625, -0.0390625];
        for (a, b) in r.coeffs.iter().zip(expected) {
            assert!((a.re - b).abs() < 1e-15);
        }
    }

    #[test]
    fn ln_of_exp_is_identity() {
        let e = exp_series(12);
        let l = e.ln_normalized();
        assert!((l.coeffs[1].re - 1.0).abs() < 1e-15);
        for k in 2..12 {
            assert!(l.coeffs[k].norm() < 1e-14);
        }
    }

    #[test]
    fn compose_exp_with_log1p_gives_one_plus_x() {
        // log(1 + x) = x - x^2/2 + ...
        let n = 15;
        let log1p: Vec<f64> = (0..n)
            .map(|k| if k == 0 { 0.0 } else { (-1f64).powi(k as i32 + 1) / k as f64 })
            .collect();
        let r = exp_series(n).compose(&PowerSeries::from_real(&log1p));
        assert!((r.coeffs[0].re - 1.0).abs() < 1e-15);
        assert!((r.coeffs[1].re - 1.0).abs() < 1e-15);
        for k in 2..n {
            assert!(r.coeffs[k].norm() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn monomial_product_tracks_exactness() {
        // (u^{-1/2}(1 + u + u^2)) * (u^{1/2}(1 - u)) exact below exponent 2
        let a = Monomials::from_series(-0.5, 0, &PowerSeries::from_real(&[1.0, 1.0, 1.0]));
        let b = Monomials::from_series(0.5, 0, &PowerSeries::from_real(&[1.0, -1.0]));
        let p = a.mul(&b);
        assert_eq!(p.cut, 2.0);
        let u = 1e-3;
        let exact = (1.0 + u + u * u) * (1.0 - u);
        assert!((p.eval(u).re - exact).abs() < 2.0 * u * u);
    }

    #[test]
    fn cancelling_terms_are_zeroed() {
        let t = |c0: f64| Monomial {
            exponent: -1.0,
            log_power: 0,
            coeff: c(c0),
        };
        let m = Monomials::new(vec![t(0.1 + 0.2), t(-0.3)], 5.0).merged();
        assert_eq!(m.terms.len(), 1);
        assert_eq!(m.terms[0].coeff, c(0.0));
    }
}
