//! Numerical limits: Richardson tables for integer-power error expansions
//! and Wynn's epsilon algorithm for sequences whose error is a sum of
//! geometric components with unknown ratios.

use crate::error::{Error, Result};

/// Limit estimate with an error indicator taken from the last two
/// extrapolants.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
    /// The last (up to three) extrapolants, most refined last.
    pub last: Vec<f64>,
}

impl Extrapolated {
    /// Fails with [`Error::Extrapolation`] unless the error indicator is
    /// within `rel_tol` of the value (or `abs_floor`).
    pub fn require(self, rel_tol: f64, abs_floor: f64) -> Result<Self> {
        if self.value.is_finite() && self.error <= rel_tol * self.value.abs() + abs_floor {
            Ok(self)
        } else {
            Err(Error::Extrapolation { last: self.last })
        }
    }
}

/// Richardson extrapolation of samples `values[k] = A(h0 / ratio^k)` to
/// `h → 0`, assuming `A(h) = A + c1 h^p + c2 h^{2p} + ...`.
pub fn richardson(values: &[f64], ratio: f64, p: f64) -> Extrapolated {
    let n = values.len();
    assert!(n >= 1, "richardson needs at least one sample");
    let mut table: Vec<Vec<f64>> = vec![values.to_vec()];
    for j in 1..n {
        let prev = &table[j - 1];
        let factor = ratio.powf(p * j as f64) - 1.0;
        let next: Vec<f64> = (1..prev.len())
            .map(|k| prev[k] + (prev[k] - prev[k - 1]) / factor)
            .collect();
        table.push(next);
    }
    // Diagonal: best estimate per level.
    let diag: Vec<f64> = table.iter().map(|col| *col.last().unwrap()).collect();
    let value = *diag.last().unwrap();
    let error = if diag.len() >= 2 {
        let prev = diag[diag.len() - 2];
        // The top entry is a single combination of all samples; compare
        // it with the best estimate one level below.
        (value - prev).abs()
    } else {
        f64::INFINITY
    };
    let start = diag.len().saturating_sub(3);
    Extrapolated {
        value,
        error,
        last: diag[start..].to_vec(),
    }
}

/// Richardson table entry with the smallest local error estimate
/// `|T[j][k] − T[j−1][k+1]|`. Preferable to the top entry when the finest
/// samples carry noise that the table would amplify.
pub fn richardson_best(values: &[f64], ratio: f64, p: f64) -> Extrapolated {
    let n = values.len();
    assert!(n >= 2, "richardson_best needs at least two samples");
    let mut prev = values.to_vec();
    let mut best = (f64::INFINITY, values[n - 1], values[n - 1]);
    for j in 1..n {
        let factor = ratio.powf(p * j as f64) - 1.0;
        let next: Vec<f64> = (1..prev.len())
            .map(|k| prev[k] + (prev[k] - prev[k - 1]) / factor)
            .collect();
        for (k, &v) in next.iter().enumerate() {
            let err = (v - prev[k + 1]).abs();
            if err < best.0 {
                best = (err, v, prev[k + 1]);
            }
        }
        prev = next;
    }
    Extrapolated {
        value: best.1,
        error: best.0,
        last: vec![best.2, best.1],
    }
}

/// Samples `f(h0 / ratio^k)` for `k = 0..n` and extrapolates to `h = 0`.
pub fn limit_richardson<F: FnMut(f64) -> f64>(mut f: F, h0: f64, ratio: f64, n: usize, p: f64) -> Extrapolated {
    let values: Vec<f64> = (0..n).map(|k| f(h0 / ratio.powi(k as i32))).collect();
    richardson(&values, ratio, p)
}

/// Limit of an analytic function at `x0` from a punctured neighbourhood:
/// the symmetric mean `(f(x0+h) + f(x0-h))/2` is even in `h`, so the
/// Richardson table runs in `h^2`.
pub fn limit_symmetric<F: FnMut(f64) -> f64>(mut f: F, x0: f64, h0: f64, n: usize) -> Extrapolated {
    limit_richardson(|h| 0.5 * (f(x0 + h) + f(x0 - h)), h0, 2.0, n, 2.0)
}

/// Wynn's epsilon algorithm. Exact for sequences `S + Σ_{i<k} c_i q_i^n`
/// given `2k + 1` terms.
pub fn wynn_epsilon(values: &[f64]) -> Extrapolated {
    let n = values.len();
    assert!(n >= 1, "wynn_epsilon needs at least one sample");
    // eps[k] holds column k; even columns are extrapolants.
    let mut prev2: Vec<f64> = vec![0.0; n + 1];
    let mut prev: Vec<f64> = values.to_vec();
    let mut estimates = vec![values[n - 1]];
    let mut col = 1;
    while prev.len() > 1 {
        let mut next = Vec::with_capacity(prev.len() - 1);
        for k in 0..prev.len() - 1 {
            let diff = prev[k + 1] - prev[k];
            let base = if col == 1 { 0.0 } else { prev2[k + 1] };
            let v = if diff == 0.0 {
                f64::INFINITY
            } else {
                base + 1.0 / diff
            };
            next.push(v);
        }
        if col % 2 == 0 {
            if let Some(&v) = next.last() {
                if v.is_finite() {
                    estimates.push(v);
                } else {
                    break;
                }
            }
        }
        prev2 = prev;
        prev = next;
        col += 1;
        if prev.iter().any(|v| !v.is_finite()) {
            // Exact convergence (zero differences): stop with what we have.
            break;
        }
    }
    let value = *estimates.last().unwrap();
    let error = if estimates.len() >= 2 {
        let m = estimates.len();
        (estimates[m - 1] - estimates[m - 2]).abs()
    } else {
        (values[n - 1] - values[n.saturating_sub(2)]).abs()
    };
    let start = estimates.len().saturating_sub(3);
    Extrapolated {
        value,
        error,
        last: estimates[start..].to_vec(),
    }
}

/// Limit of `f(x)` as `x → x0` along `x0 ± r0 2^{-n}` (sign from `side`),
/// `n = 0..terms`, accelerated with Wynn's epsilon algorithm.
pub fn endpoint_limit<F: FnMut(f64) -> f64>(mut f: F, x0: f64, r0: f64, terms: usize, side: f64) -> Extrapolated {
    let values: Vec<f64> = (0..terms)
        .map(|k| f(x0 + side * r0 * 0.5f64.powi(k as i32)))
        .collect();
    wynn_epsilon(&values)
}
