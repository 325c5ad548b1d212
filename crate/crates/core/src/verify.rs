//! Verification suites: every check compares an implementation against an
//! independent route (closed form, plain quadrature, Wronskian identity,
//! extrapolated limit) at a stated tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closedforms::{geg_s_bilinear_closed, geg_z_bilinear_closed, mac_bilinear_closed, mac_square_closed};
use crate::error::Result;
use crate::extrapolate::limit_richardson;
use crate::genquad::{
    bessel_product_integrand, change_of_var_check, gen_bilinear_gegenbauer, gen_bilinear_macdonald, gen_integrate,
    power_transform_check, scaling_check, split_shift, GegenbauerKind, GenIntegrand, SingularExpansion, SingularTerm,
    SmoothMap, Tail,
};
use crate::limits::{function_rate, integral_rate, LimitKind, RateReport, LADDER, THETA};
use crate::pointgreen::{
    krein_green, pde_residual_check, resolvent_derivative_check_1d, sigma, sigma_derivative_check, sigma_general,
    Geometry, KreinKernelSpec, SpacePoint,
};
use crate::quad::{integrate_exponential_tail, integrate_left_singular, QuadConfig};
use crate::specfun::bessel::bessel_k;
use crate::specfun::gamma::EULER_GAMMA;
use crate::specfun::gegenbauer::{
    gegenbauer_s, gegenbauer_s_whipple, gegenbauer_z, gegenbauer_z_route, GegenbauerConfig, ZRoute,
};
use crate::sturm::{diagonal_integral, greens_identity_check, integrate_over, Eigenpair, SturmLiouvilleSpec};

/// Seed of every sampled grid unless overridden.
pub const DEFAULT_SEED: u64 = 1729;

/// Suites, one per group of acceptance criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Standard, continued and anomalous Macdonald integrals.
    Macdonald,
    /// Bilinear Gegenbauer integrals.
    Gegenbauer,
    /// Laws of the finite-part engine.
    Genquad,
    /// Whipple identity and the S/Z symmetries on a sampled grid.
    Symmetry,
    /// The self-energy.
    Sigma,
    /// Point-interaction kernels.
    Krein,
    /// Large-degree convergence rates.
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Macdonald,
        Suite::Gegenbauer,
        Suite::Genquad,
        Suite::Symmetry,
        Suite::Sigma,
        Suite::Krein,
        Suite::Limits,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Macdonald => "macdonald",
            Suite::Gegenbauer => "gegenbauer",
            Suite::Genquad => "genquad",
            Suite::Symmetry => "symmetry",
            Suite::Sigma => "sigma",
            Suite::Krein => "krein",
            Suite::Limits => "limits",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// One comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    /// Acceptance criterion this row belongs to.
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    pub reference: f64,
    /// Relative gap, or absolute when the reference is zero.
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Collector {
    suite: &'static str,
    criterion: u8,
    rows: Vec<CheckRecord>,
}

impl Collector {
    fn new(suite: Suite) -> Self {
        Self {
            suite: suite.name(),
            criterion: 0,
            rows: Vec::new(),
        }
    }

    fn criterion(&mut self, c: u8) {
        self.criterion = c;
    }

    fn push(&mut self, name: String, value: f64, reference: f64, gap: f64, tol: f64) {
        self.rows.push(CheckRecord {
            suite: self.suite,
            criterion: self.criterion,
            name,
            value,
            reference,
            gap,
            tolerance: tol,
            pass: gap <= tol,
            error: None,
        });
    }

    fn fail(&mut self, name: String, e: crate::Error) {
        self.rows.push(CheckRecord {
            suite: self.suite,
            criterion: self.criterion,
            name,
            value: f64::NAN,
            reference: f64::NAN,
            gap: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            error: Some(format!("{}: {e}", e.code())),
        });
    }

    /// Relative comparison; the reference is computed independently.
    fn rel(&mut self, name: impl Into<String>, pair: Result<(f64, f64)>, tol: f64) {
        let name = name.into();
        match pair {
            Ok((v, r)) => {
                let gap = if r == 0.0 { v.abs() } else { (v - r).abs() / r.abs() };
                self.push(name, v, r, if gap.is_nan() { f64::INFINITY } else { gap }, tol)
            }
            Err(e) => self.fail(name, e),
        }
    }

    fn abs(&mut self, name: impl Into<String>, pair: Result<(f64, f64)>, tol: f64) {
        let name = name.into();
        match pair {
            Ok((v, r)) => {
                let gap = (v - r).abs();
                self.push(name, v, r, if gap.is_nan() { f64::INFINITY } else { gap }, tol)
            }
            Err(e) => self.fail(name, e),
        }
    }

    fn rate(&mut self, name: impl Into<String>, rep: Result<RateReport>, target: f64, tol: f64) {
        let name = name.into();
        match rep {
            Ok(r) => {
                let gap = if r.monotone() { (r.slope - target).abs() } else { f64::INFINITY };
                self.push(name, r.slope, target, gap, tol)
            }
            Err(e) => self.fail(name, e),
        }
    }
}

/// Runs one suite with the given seed for its sampled grids.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckRecord> {
    let mut c = Collector::new(suite);
    match suite {
        Suite::Macdonald => macdonald(&mut c),
        Suite::Gegenbauer => gegenbauer(&mut c),
        Suite::Genquad => genquad(&mut c),
        Suite::Symmetry => symmetry(&mut c, seed),
        Suite::Sigma => sigma_suite(&mut c),
        Suite::Krein => krein(&mut c, seed),
        Suite::Limits => limits(&mut c),
    }
    c.rows
}

/// Plain quadrature of `∫ K_α(ar) K_α(br) 2r dr` for |α| < 1.
pub fn macdonald_quadrature(alpha: f64, a: f64, b: f64) -> Result<f64> {
    let cfg = QuadConfig::with_rel_tol(1e-12);
    let f = |r: f64| 2.0 * r * bessel_k(alpha, a * r).unwrap_or(f64::NAN) * bessel_k(alpha, b * r).unwrap_or(f64::NAN);
    let head = integrate_left_singular(f, 0.0, 1.0, 1.0 - 2.0 * alpha.abs(), &cfg)?;
    let tail = integrate_exponential_tail(f, 1.0, a + b, &cfg)?;
    Ok(head.value + tail.value)
}

fn macdonald(c: &mut Collector) {
    c.criterion(1);
    let pairs = [(2.0, 1.0), (1.5, 1.0), (3.0, 2.0)];
    for &alpha in &[-0.7, -0.3, 0.4, 0.5] {
        for &(a, b) in &pairs {
            c.rel(
                format!("mac1 alpha={alpha} a={a} b={b}"),
                (|| Ok((macdonald_quadrature(alpha, a, b)?, mac_bilinear_closed(alpha, a, b)?)))(),
                1e-8,
            );
        }
    }
    for &(a, b) in &pairs {
        let closed = 2.0 * (a / b as f64).ln() / (a * a - b * b);
        c.rel(
            format!("mac2 a={a} b={b}"),
            (|| Ok((macdonald_quadrature(0.0, a, b)?, closed)))(),
            1e-8,
        );
    }
    let bessel_family = |alpha: f64| move |e: f64| Ok(Eigenpair::macdonald(alpha, (-e).sqrt()));
    for &alpha in &[-0.7, -0.3, 0.0, 0.4, 0.5] {
        for &b in &[1.0, 2.0] {
            let tag = if alpha == 0.0 { "mac4" } else { "mac3" };
            c.rel(
                format!("{tag} quadrature alpha={alpha} b={b}"),
                (|| Ok((macdonald_quadrature(alpha, b, b)?, mac_square_closed(alpha, b)?)))(),
                1e-7,
            );
            let spec = SturmLiouvilleSpec::bessel(alpha);
            c.rel(
                format!("{tag} green alpha={alpha} b={b}"),
                (|| Ok((diagonal_integral(&spec, bessel_family(alpha), -b * b)?.value, mac_square_closed(alpha, b)?)))(),
                1e-7,
            );
        }
    }
    for &alpha in &[-0.7, 0.4] {
        let spec = SturmLiouvilleSpec::bessel(alpha);
        c.rel(
            format!("green identity alpha={alpha} a=2 b=1"),
            greens_identity_check(&spec, &Eigenpair::macdonald(alpha, 2.0), &Eigenpair::macdonald(alpha, 1.0))
                .map(|g| (g.lhs, g.rhs)),
            1e-8,
        );
    }

    c.criterion(2);
    for &alpha in &[1.3, 1.5, 2.7] {
        for &(a, b) in &pairs {
            c.rel(
                format!("continuation alpha={alpha} a={a} b={b}"),
                (|| Ok((gen_bilinear_macdonald(alpha, a, b)?.value, mac_bilinear_closed(alpha, a, b)?)))(),
                1e-6,
            );
        }
        c.rel(
            format!("continuation square alpha={alpha} b=1"),
            (|| Ok((gen_bilinear_macdonald(alpha, 1.0, 1.0)?.value, mac_square_closed(alpha, 1.0)?)))(),
            1e-6,
        );
    }
    c.rel(
        "continuation alpha=1.5 a=b=1 equals -3pi/2",
        gen_bilinear_macdonald(1.5, 1.0, 1.0).map(|g| (g.value, -1.5 * PI)),
        1e-8,
    );

    c.criterion(3);
    for &alpha in &[1.0, 2.0] {
        for &(a, b) in &pairs {
            c.rel(
                format!("anomalous alpha={alpha} a={a} b={b}"),
                (|| Ok((gen_bilinear_macdonald(alpha, a, b)?.value, mac_bilinear_closed(alpha, a, b)?)))(),
                1e-4,
            );
        }
        for &b in &[1.0, 2.0] {
            c.rel(
                format!("anomalous square alpha={alpha} b={b}"),
                (|| Ok((gen_bilinear_macdonald(alpha, b, b)?.value, mac_square_closed(alpha, b)?)))(),
                1e-4,
            );
        }
    }
    let exact = -(1.0 + 2.0 * EULER_GAMMA) / 4.0;
    c.rel(
        "anomalous alpha=1 b=2 quadrature equals -(1+2 gamma_E)/4",
        gen_bilinear_macdonald(1.0, 2.0, 2.0).map(|g| (g.value, exact)),
        1e-6,
    );
    c.rel(
        "anomalous alpha=1 b=2 closed form equals -(1+2 gamma_E)/4",
        mac_square_closed(1.0, 2.0).map(|v| (v, exact)),
        1e-12,
    );
}

/// `∫ S S (1−w²)^α d(2w)` by plain quadrature over ]−1, 1[ (|α| < 1).
pub fn gegenbauer_s_quadrature(alpha: f64, b1: f64, b2: f64) -> Result<f64> {
    let spec = SturmLiouvilleSpec::gegenbauer_interior(alpha);
    let (f1, f2) = (Eigenpair::gegenbauer_s(alpha, b1), Eigenpair::gegenbauer_s(alpha, b2));
    let g = |w: f64| f1.eval(w) * f2.eval(w) * (spec.rho)(w);
    Ok(integrate_over(&spec, &g, &QuadConfig::with_rel_tol(1e-10))?.value)
}

/// `∫ Z Z (w²−1)^α d(2w)` by plain quadrature over ]1, ∞[ (|α| < 1).
pub fn gegenbauer_z_quadrature(alpha: f64, l1: f64, l2: f64) -> Result<f64> {
    let spec = SturmLiouvilleSpec::gegenbauer_exterior(alpha);
    let (f1, f2) = (Eigenpair::gegenbauer_z(alpha, l1), Eigenpair::gegenbauer_z(alpha, l2));
    let g = |w: f64| f1.eval(w) * f2.eval(w) * (spec.rho)(w);
    Ok(integrate_over(&spec, &g, &QuadConfig::with_rel_tol(1e-10))?.value)
}

fn gegenbauer(c: &mut Collector) {
    c.criterion(4);
    let s_quad = gegenbauer_s_quadrature;
    let z_quad = gegenbauer_z_quadrature;
    for &(alpha, b1, b2) in &[(0.3, 0.5, 1.0), (-0.3, 0.5, 1.0)] {
        c.rel(
            format!("geg1 quadrature alpha={alpha} beta=({b1},{b2})"),
            (|| Ok((s_quad(alpha, b1, b2)?, geg_s_bilinear_closed(alpha, b1, b2)?)))(),
            1e-6,
        );
        c.rel(
            format!("geg1 finite part alpha={alpha} beta=({b1},{b2})"),
            (|| {
                let l = |b: f64| Complex64::new(0.0, b);
                Ok((
                    gen_bilinear_gegenbauer(GegenbauerKind::S, alpha, l(b1), l(b2))?.value,
                    geg_s_bilinear_closed(alpha, b1, b2)?,
                ))
            })(),
            1e-6,
        );
    }
    c.rel(
        "geg2 quadrature alpha=0.5 lambda=(2,1)",
        (|| Ok((z_quad(0.5, 2.0, 1.0)?, geg_z_bilinear_closed(0.5, 2.0, 1.0)?)))(),
        1e-6,
    );
    c.rel("geg2 closed alpha=0.5 lambda=(2,1) equals 8/3", geg_z_bilinear_closed(0.5, 2.0, 1.0).map(|v| (v, 8.0 / 3.0)), 1e-12);
    c.rel(
        "geg2 green identity alpha=0.5 lambda=(2,1)",
        greens_identity_check(
            &SturmLiouvilleSpec::gegenbauer_exterior(0.5),
            &Eigenpair::gegenbauer_z(0.5, 2.0),
            &Eigenpair::gegenbauer_z(0.5, 1.0),
        )
        .map(|g| (g.rhs, 8.0 / 3.0)),
        1e-6,
    );
    let cz = |x: f64| Complex64::new(x, 0.0);
    c.rel(
        "geg2 generalized alpha=1.3 lambda=(1.2,0.7)",
        (|| {
            Ok((
                gen_bilinear_gegenbauer(GegenbauerKind::Z, 1.3, cz(1.2), cz(0.7))?.value,
                geg_z_bilinear_closed(1.3, 1.2, 0.7)?,
            ))
        })(),
        1e-4,
    );
}

/// `(b/r² + a/r) e^{−r}` with its exact singular part.
pub fn exp_with_poles(a: f64, b: f64) -> GenIntegrand {
    let exp = SingularExpansion::new(vec![SingularTerm::new(-2.0, b), SingularTerm::new(-1.0, a - b)], 1.0)
        .expect("two log-free terms");
    GenIntegrand::new(
        move |r: f64| (b / (r * r) + a / r) * (-r).exp(),
        exp,
        f64::INFINITY,
        Tail::Exponential { rate: 1.0 },
    )
}

/// `r^{−3/2} e^{−r}`.
pub fn gamma_minus_half() -> GenIntegrand {
    let exp = SingularExpansion::new(vec![SingularTerm::new(-1.5, 1.0), SingularTerm::new(-0.5, -1.0)], 1.0)
        .expect("log-free terms");
    GenIntegrand::new(|r: f64| r.powf(-1.5) * (-r).exp(), exp, f64::INFINITY, Tail::Exponential { rate: 1.0 })
}

fn genquad(c: &mut Collector) {
    c.criterion(5);
    let corpus: Vec<(String, Result<GenIntegrand>)> = vec![
        ("exp/r".into(), Ok(exp_with_poles(1.0, 0.0))),
        ("(1.3/r^2+0.4/r)exp".into(), Ok(exp_with_poles(0.4, 1.3))),
        ("r^-3/2 exp".into(), Ok(gamma_minus_half())),
        ("K_1(2r)K_1(r)2r".into(), bessel_product_integrand(1.0, 2.0, 1.0)),
        ("K_1.5(r)^2 2r".into(), bessel_product_integrand(1.5, 1.0, 1.0)),
    ];
    c.rel("exp/r equals -gamma_E", gen_integrate(&exp_with_poles(1.0, 0.0), 1.0).map(|g| (g.value, -EULER_GAMMA)), 1e-10);
    c.rel(
        "r^-3/2 exp equals -2 sqrt(pi)",
        gen_integrate(&gamma_minus_half(), 1.0).map(|g| (g.value, -2.0 * PI.sqrt())),
        1e-10,
    );
    for (name, f) in &corpus {
        let f = match f {
            Ok(f) => f,
            Err(e) => {
                c.fail(format!("{name} construction"), e.clone());
                continue;
            }
        };
        let anomaly = f.expansion.anomaly();
        for &s in &[0.5, 2.0, 5.0] {
            c.abs(
                format!("split shift {name} c={s}"),
                split_shift(f, s).map(|v| (v, -anomaly * s.ln())),
                1e-10,
            );
        }
        for &a in &[0.5, 3.0] {
            c.abs(format!("scaling {name} a={a}"), scaling_check(f, a), 1e-9);
        }
        c.abs(format!("power transform {name} p=2"), power_transform_check(f, 2.0), 1e-9);
    }
    for (mname, map) in [("u+u^2", SmoothMap::polynomial(vec![0.0, 1.0, 1.0])), ("sinh", SmoothMap::sinh(6))] {
        for &(a, b) in &[(0.4, 1.3), (-0.8, 0.6)] {
            c.abs(
                format!("change of variables g={mname} f=({b}/r^2+{a}/r)exp"),
                change_of_var_check(&exp_with_poles(a, b), &map),
                1e-6,
            );
        }
    }
}

fn symmetry(c: &mut Collector, seed: u64) {
    c.criterion(6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GegenbauerConfig::default();
    let n = 100;
    let worst = |c: &mut Collector, name: &str, rows: Vec<Result<(f64, f64)>>| {
        let mut gap: f64 = 0.0;
        let mut at = (0.0, 0.0);
        for r in rows {
            match r {
                Ok((v, e)) => {
                    let g = (v - e).abs() / e.abs().max(1e-300);
                    if !(g <= gap) {
                        gap = if g.is_nan() { f64::INFINITY } else { g };
                        at = (v, e);
                    }
                }
                Err(e) => {
                    c.fail(name.to_string(), e);
                    return;
                }
            }
        }
        c.push(format!("{name} ({n} samples, seed {seed}, worst case)"), at.0, at.1, gap, 1e-9);
    };
    let rows = (0..n)
        .map(|_| {
            let alpha = rng.gen_range(-0.9..0.9);
            let lambda = rng.gen_range(0.2..3.0);
            let w = rng.gen_range(1.2..4.0);
            Ok((
                gegenbauer_z_route(alpha, lambda, w, 0.0, ZRoute::Whipple, &cfg)?,
                gegenbauer_z_route(alpha, lambda, w, 0.0, ZRoute::Direct, &cfg)?,
            ))
        })
        .collect();
    worst(c, "Whipple Z from S", rows);
    let rows = (0..n)
        .map(|_| {
            let alpha = rng.gen_range(0.1..0.9);
            let lambda = rng.gen_range(-0.9..2.5);
            let w = rng.gen_range(1.1..2.9);
            Ok((gegenbauer_s_whipple(alpha, lambda, w, &cfg)?, gegenbauer_s(alpha, Complex64::new(lambda, 0.0), w)?))
        })
        .collect();
    worst(c, "Whipple S from Z", rows);
    let rows = (0..n)
        .map(|_| {
            let alpha = rng.gen_range(-0.9..2.0);
            let l = if rng.gen_bool(0.5) {
                Complex64::new(rng.gen_range(0.0..3.0), 0.0)
            } else {
                Complex64::new(0.0, rng.gen_range(0.0..3.0))
            };
            let w = rng.gen_range(-0.9..2.9);
            Ok((gegenbauer_s(alpha, l, w)?, gegenbauer_s(alpha, -l, w)?))
        })
        .collect();
    worst(c, "S degree reflection", rows);
    let rows = (0..n)
        .map(|_| {
            let alpha = rng.gen_range(-0.9..0.9);
            let lambda = rng.gen_range(0.2..3.0);
            let w: f64 = rng.gen_range(1.05..6.0);
            let w2 = (w - 1.0) * (w + 1.0);
            Ok((gegenbauer_z(alpha, lambda, w)?, gegenbauer_z(-alpha, lambda, w)? / w2.powf(alpha)))
        })
        .collect();
    worst(c, "Z order reflection", rows);
}

fn sigma_suite(c: &mut Collector) {
    c.criterion(7);
    for &b in &[0.3, 1.0, 2.5] {
        for d in [1, 3] {
            c.rel(
                format!("general formula d={d} beta={b}"),
                (|| Ok((sigma_general(d, b)?, sigma(d, b)?)))(),
                1e-12,
            );
        }
        let off = (2.0 + 2.0 * EULER_GAMMA - 2.0 * 2f64.ln()) / (4.0 * PI);
        c.abs(
            format!("d=2 offset beta={b}"),
            (|| Ok((sigma_general(2, b)? - sigma(2, b)?, off)))(),
            1e-12,
        );
        let rho = b * b;
        let deriv = |f: fn(usize, f64) -> Result<f64>| {
            limit_richardson(
                |h| (f(2, (rho + h).sqrt()).unwrap_or(f64::NAN) - f(2, (rho - h).sqrt()).unwrap_or(f64::NAN)) / (2.0 * h),
                0.1 * rho,
                2.0,
                6,
                2.0,
            )
            .value
        };
        c.rel(format!("d=2 derivative beta={b}"), Ok((deriv(sigma_general), deriv(sigma))), 1e-10);
    }
    for d in 1..=6 {
        for &b in &[0.5, 1.0, 2.0] {
            c.rel(
                format!("derivative identity d={d} beta={b}"),
                sigma_derivative_check(d, b).map(|s| (s.lhs, s.rhs)),
                1e-4,
            );
        }
    }
}

fn explicit_kernel(d: usize, beta: f64, gamma: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let (r, rx, ry) = (n(&diff), n(x), n(y));
    Ok(match d {
        1 => {
            (-beta * r).exp() / (2.0 * beta)
                + (-beta * rx).exp() * (-beta * ry).exp() / ((2.0 * beta).powi(2) * (gamma - 1.0 / (2.0 * beta)))
        }
        2 => {
            bessel_k(0.0, beta * r)? / (2.0 * PI)
                + bessel_k(0.0, beta * rx)? * bessel_k(0.0, beta * ry)?
                    / ((2.0 * PI).powi(2) * (gamma + (beta * beta).ln() / (4.0 * PI)))
        }
        _ => {
            (-beta * r).exp() / (4.0 * PI * r)
                + (-beta * rx).exp() * (-beta * ry).exp() / ((4.0 * PI).powi(2) * rx * ry * (gamma + beta / (4.0 * PI)))
        }
    })
}

fn slope(residual: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let hs = [1e-2, 5e-3, 2.5e-3];
    let r = hs.iter().map(|&h| residual(h).map(f64::abs)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = r.iter().map(|v| v.max(1e-300).ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok((sxy / sxx, 2.0))
}

fn krein(c: &mut Collector, seed: u64) {
    c.criterion(8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 1..=3 {
        let g = Geometry::euclidean(d);
        let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
        let mut err = None;
        let mut done = 0;
        while done < 20 {
            let beta = rng.gen_range(0.3..2.5);
            let gamma = rng.gen_range(-1.0..1.0);
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
            let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            if norm(&x) < 0.1 || norm(&y) < 0.1 || norm(&diff) < 0.1 {
                continue;
            }
            let res = (|| {
                let spec = KreinKernelSpec::new(g, beta, gamma)?;
                if (gamma + spec.sigma).abs() < 1e-3 {
                    return Ok(None);
                }
                let v = krein_green(&spec, &SpacePoint::new(g, x.clone())?, &SpacePoint::new(g, y.clone())?)?;
                Ok(Some((v, explicit_kernel(d, beta, gamma, &x, &y)?)))
            })();
            match res {
                Ok(None) => continue,
                Ok(Some((v, e))) => {
                    let gap = (v - e).abs() / e.abs();
                    if !(gap <= worst.0) {
                        worst = (if gap.is_nan() { f64::INFINITY } else { gap }, v, e);
                    }
                }
                Err(e) => err = Some(e),
            }
            done += 1;
        }
        match err {
            Some(e) => c.fail(format!("explicit display d={d}"), e),
            None => c.push(
                format!("explicit display d={d} (20 pairs, seed {seed}, worst case)"),
                worst.1,
                worst.2,
                worst.0,
                1e-12,
            ),
        }
    }
    for d in 1..=4 {
        let g = Geometry::euclidean(d);
        c.abs(
            format!("pde residual order euclidean d={d} gamma=0.3"),
            (|| {
                let spec = KreinKernelSpec::new(g, 1.0, 0.3)?;
                let mut xc = vec![0.0; d];
                let mut yc = vec![0.0; d];
                xc[0] = 0.7;
                yc[0] = -0.4;
                if d > 1 {
                    xc[1] = 0.3;
                    yc[1] = 0.5;
                }
                let (x, y) = (SpacePoint::new(g, xc)?, SpacePoint::new(g, yc)?);
                slope(|h| pde_residual_check(&spec, &x, &y, h))
            })(),
            0.2,
        );
    }
    for g in [Geometry::hyperbolic(2), Geometry::hyperbolic(3), Geometry::spherical(2), Geometry::spherical(3)] {
        c.abs(
            format!("pde residual order {:?} d={} free", g.kind, g.d).to_lowercase(),
            (|| {
                let spec = KreinKernelSpec::new(g, 1.2, f64::INFINITY)?;
                let (x, y) = (g.along_axis(0.7), g.at_distance(0.4, 1));
                slope(|h| pde_residual_check(&spec, &x, &y, h))
            })(),
            0.2,
        );
    }
    for &(beta, gamma, x, y) in &[(1.0, f64::INFINITY, 0.3, -0.2), (1.0, 1.0, 1.0, 2.0), (0.7, -0.4, -0.5, 1.5)] {
        c.rel(
            format!("resolvent derivative beta={beta} gamma={gamma} x={x} y={y}"),
            resolvent_derivative_check_1d(beta, gamma, x, y).map(|r| (r.lhs, r.rhs)),
            1e-6,
        );
    }
}

fn limits(c: &mut Collector) {
    c.criterion(9);
    let alpha = 0.3;
    for kind in [LimitKind::S, LimitKind::Z] {
        c.rate(
            format!("pointwise {kind:?} alpha={alpha} theta={THETA} slope"),
            function_rate(kind, alpha, THETA, &LADDER),
            -1.0,
            0.2,
        );
    }
    for kind in [LimitKind::S, LimitKind::Z] {
        c.rate(
            format!("integral {kind:?} alpha={alpha} slope"),
            integral_rate(kind, alpha, &LADDER),
            -1.0,
            0.2,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn macdonald_quadrature_half_order() {
        // K_{1/2}(2r)K_{1/2}(r)2r = π/√2 e^{−3r}
        let v = macdonald_quadrature(0.5, 2.0, 1.0).unwrap();
        assert!((v - PI / (3.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn failing_rows_carry_the_error_code() {
        let mut c = Collector::new(Suite::Sigma);
        c.rel("x", sigma(0, 1.0).map(|v| (v, v)), 1.0);
        assert!(!c.rows[0].pass);
        assert!(c.rows[0].error.as_deref().unwrap().starts_with("pointgreen.sigma.domain"));
    }
}
