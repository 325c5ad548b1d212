//! Gamma, digamma and Pochhammer symbols on real and complex arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

// B_{2k} / (2k (2k-1)), k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

// B_{2k} / (2k), k = 1..10
const DIGAMMA_ASY: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
    -174_611.0 / 6600.0,
];

/// Taylor coefficients of 1/Γ(1+x) around 0.
const RGAMMA1P: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// ln Γ(z) for complex `z` off the poles. The imaginary part is only
/// defined modulo 2π; callers exponentiate.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z, s) - ln_gamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

fn ln_sin_pi(z: Complex64, s: Complex64) -> Complex64 {
    if s.is_finite() && s.norm() > 0.0 {
        s.ln()
    } else {
        // |Im z| large: sin(πz) ≈ ∓ e^{∓iπz}/(2i)
        let sign = if z.im > 0.0 { 1.0 } else { -1.0 };
        let i = Complex64::i();
        -i * sign * PI * z - (2.0 * i * sign).ln() + Complex64::new(0.0, PI)
    }
}

/// Γ(z) for complex `z`.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(gamma_unchecked(z.re), 0.0);
    }
    ln_gamma_complex(z).exp()
}

/// 1/Γ(z); exactly zero at the poles.
pub fn rgamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(rgamma(z.re), 0.0);
    }
    (-ln_gamma_complex(z)).exp()
}

/// |Γ(x + iy)|² as a real number, computed as exp(2 Re ln Γ).
pub fn abs_gamma_sq(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        let g = gamma_unchecked(x);
        return g * g;
    }
    (2.0 * ln_gamma_complex(Complex64::new(x, y)).re).exp()
}

/// ln |Γ(x + iy)|².
pub fn ln_abs_gamma_sq(x: f64, y: f64) -> f64 {
    2.0 * ln_gamma_complex(Complex64::new(x, y)).re
}

/// 1/Γ(1+x) for |x| ≤ 1/2 from its Taylor series.
fn rgamma1p_small(x: f64) -> f64 {
    RGAMMA1P.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// (1/Γ(1-ν) - 1/Γ(1+ν)) / (2ν) and (1/Γ(1-ν) + 1/Γ(1+ν)) / 2 for |ν| ≤ 1/2,
/// without cancellation at small ν.
pub(crate) fn temme_gammas(nu: f64) -> (f64, f64) {
    let mut odd = 0.0;
    let mut even = 0.0;
    for (m, &c) in RGAMMA1P.iter().enumerate().rev() {
        if m % 2 == 1 {
            // contributes c ν^m; gam1 = -Σ_{m odd} c_m ν^{m-1}
            odd = odd * nu * nu + c;
        } else {
            even = even * nu * nu + c;
        }
    }
    (-odd, even)
}

/// 1/Γ(x) for real `x`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x.abs() <= 0.5 {
        return rgamma1p_small(x) * x;
    }
    let g = gamma_unchecked(x);
    if g.is_infinite() {
        0.0
    } else {
        1.0 / g
    }
}

fn gamma_unchecked(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x <= 1.5 {
        return 1.0 / rgamma1p_small(x - 1.0);
    }
    if x < 20.0 && x == x.round() {
        return (1..(x as u64)).map(|k| k as f64).product();
    }
    if x < 15.0 {
        // Recur down into [0.5, 1.5].
        let mut acc = 1.0;
        let mut y = x;
        while y > 1.5 {
            y -= 1.0;
            acc *= y;
        }
        return acc / rgamma1p_small(y - 1.0);
    }
    ln_gamma_complex(Complex64::new(x, 0.0)).re.exp()
}

/// Γ(x) for real `x`.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            module: "specfun",
            location: x,
        });
    }
    Ok(gamma_unchecked(x))
}

/// ln |Γ(x)| for real `x`.
pub fn ln_abs_gamma(x: f64) -> f64 {
    if x > 0.5 && x < 15.0 {
        return gamma_unchecked(x).abs().ln();
    }
    if x < 0.5 {
        return PI.ln() - (PI * x).sin().abs().ln() - ln_abs_gamma(1.0 - x);
    }
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

/// ψ(z) for complex `z`.
pub fn digamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // ψ(1-z) - ψ(z) = π cot(πz)
        let pz = z * PI;
        return digamma_complex(Complex64::new(1.0, 0.0) - z) - PI * pz.cos() / pz.sin();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        acc -= w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for c in DIGAMMA_ASY {
        series += pow * c;
        pow *= inv2;
    }
    acc + w.ln() - inv * 0.5 - series
}

/// ψ(x) for real `x`.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            module: "specfun",
            location: x,
        });
    }
    if x == x.round() && x <= 64.0 {
        // ψ(n) = -γ + H_{n-1}
        let h: f64 = (1..(x as u64)).map(|k| 1.0 / k as f64).sum();
        return Ok(h - EULER_GAMMA);
    }
    Ok(digamma_complex(Complex64::new(x, 0.0)).re)
}

/// (z)_n = z (z+1) ... (z+n-1), (z)_0 = 1.
pub fn pochhammer(z: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (z + k as f64))
}

/// Real Pochhammer symbol.
pub fn pochhammer_real(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// Which member of the gamma family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaKind {
    Gamma,
    Digamma,
    Pochhammer(usize),
}

/// Dispatch over the gamma family on a complex argument.
pub fn eval_gamma_family(kind: GammaKind, z: Complex64) -> Result<Complex64> {
    let at_pole = z.im == 0.0 && is_nonpositive_integer(z.re);
    match kind {
        GammaKind::Gamma | GammaKind::Digamma if at_pole => Err(Error::Pole {
            module: "specfun",
            location: z.re,
        }),
        GammaKind::Gamma => Ok(gamma_complex(z)),
        GammaKind::Digamma if z.im == 0.0 => Ok(Complex64::new(digamma(z.re)?, 0.0)),
        GammaKind::Digamma => Ok(digamma_complex(z)),
        GammaKind::Pochhammer(n) => Ok(pochhammer(z, n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn classical_values() {
        assert!(close(gamma(0.5).unwrap(), PI.sqrt(), 1e-15));
        assert!(close(gamma(5.0).unwrap(), 24.0, 0.0));
        assert!(close(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-15));
        assert!(close(gamma(30.5).unwrap(), 4.8226969334909086e31, 1e-13));
        assert!(close(digamma(1.0).unwrap(), -EULER_GAMMA, 1e-15));
        assert!(close(digamma(2.0).unwrap(), 1.0 - EULER_GAMMA, 1e-15));
        assert!(close(pochhammer_real(0.5, 2), 0.75, 0.0));
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(gamma(-2.0), Err(Error::Pole { location, .. }) if location == -2.0));
        assert!(digamma(0.0).is_err());
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn digamma_matches_log_gamma_derivative() {
        for &x in &[0.3, 1.7, 4.2, 12.5, 40.0] {
            let h = 1e-5;
            let fd = (ln_abs_gamma(x + h) - ln_abs_gamma(x - h)) / (2.0 * h);
            assert!(close(digamma(x).unwrap(), fd, 1e-8), "x={x}");
        }
    }

    #[test]
    fn complex_gamma_recurrence_and_reflection() {
        for &(x, y) in &[(0.3, 0.7), (-1.2, 2.5), (3.5, -4.0), (0.5, 30.0)] {
            let z = Complex64::new(x, y);
            let lhs = gamma_complex(z + 1.0);
            let rhs = z * gamma_complex(z);
            assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm(), "{z}");
            let refl = gamma_complex(z) * gamma_complex(Complex64::new(1.0, 0.0) - z) * (z * PI).sin();
            assert!((refl - PI).norm() < 1e-12 * PI, "{z}: {refl}");
        }
    }

    #[test]
    fn abs_gamma_on_the_critical_line() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for &y in &[0.0, 0.5, 3.0, 40.0] {
            assert!(close(abs_gamma_sq(0.5, y), PI / (PI * y).cosh(), 1e-13), "y={y}");
        }
    }

    #[test]
    fn temme_gammas_agree_with_direct() {
        for &nu in &[0.37, -0.21, 0.5] {
            let (g1, g2) = temme_gammas(nu);
            let a = rgamma(1.0 - nu);
            let b = rgamma(1.0 + nu);
            assert!(close(g1, (a - b) / (2.0 * nu), 1e-13));
            assert!(close(g2, (a + b) / 2.0, 1e-14));
        }
    }

    #[test]
    fn complex_digamma_recurrence() {
        let z = Complex64::new(0.7, 1.3);
        let d = digamma_complex(z + 1.0) - digamma_complex(z) - z.inv();
        assert!(d.norm() < 1e-14);
    }
}
