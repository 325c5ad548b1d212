//! Batch front-end: evaluation, integration, closed-form tables,
//! verification suites, self-energy tables and kernel profiles.
//!
//! Output is CSV or JSON lines with every float printed to 17 significant
//! digits, so identical invocations produce identical bytes.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closedforms::{geg_s_bilinear_closed, geg_z_bilinear_closed, mac_bilinear_closed, mac_square_closed};
use crate::error::{Error, Result};
use crate::genquad::{
    bessel_product_integrand, gegenbauer_integrand, gen_integrate_with, GegenbauerKind, GenConfig, GenIntegrand,
    SingularExpansion, SingularTerm, Tail,
};
use crate::pointgreen::{
    krein_green, sigma, sigma_derivative_check, sigma_numeric_curved, Geometry, GeometryKind,
    KreinKernelSpec, SpacePoint,
};
use crate::specfun::bessel::bessel_k;
use crate::specfun::gamma::{eval_gamma_family, GammaKind};
use crate::specfun::gegenbauer::{gegenbauer_s_scaled, gegenbauer_z_scaled, GegenbauerConfig};
use crate::verify::{
    gegenbauer_s_quadrature, gegenbauer_z_quadrature, macdonald_quadrature, run_suite, CheckRecord, Suite,
    DEFAULT_SEED,
};

/// Environment variable holding the default tolerance.
pub const TOL_ENV: &str = "GENINT_TOL";

const DEFAULT_TOL: f64 = 1e-12;

// plain quadratures behind the table run at this relative tolerance
const TABLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "genint", version, about = "Generalized integrals and point-interaction kernels")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Jsonl, global = true)]
    pub format: Format,
    /// Relative tolerance of series and quadratures (default from GENINT_TOL, else 1e-12).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed of sampled grids.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one special function.
    Eval(EvalArgs),
    /// Generalized integral of a built-in integrand.
    Integrate(IntegrateArgs),
    /// Closed forms against quadrature over a parameter grid.
    Table(TableArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Self-energy table over a range of dimensions.
    Sigma(SigmaArgs),
    /// Point-interaction kernel along a geodesic.
    Green(GreenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FnName {
    Gamma,
    Digamma,
    Pochhammer,
    BesselK,
    GegenbauerS,
    GegenbauerZ,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FnName,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Degree; accepts `0.7`, `0.7i`, `1+2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    /// Complex argument of the gamma family.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegrandName {
    BesselProduct,
    GegenbauerS,
    GegenbauerZ,
    GammaPower,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, value_enum)]
    pub integrand: IntegrandName,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Degrees of the Gegenbauer factors (`0.5i` for S).
    #[arg(long, allow_hyphen_values = true)]
    pub l1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l2: Option<String>,
    /// Exponent s of `r^s e^{-r}`; non-integer s ≤ −1 is continued.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub split: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    /// ∫ K_α(ar) K_α(br) 2r dr.
    Mac,
    /// ∫ K_α(br)² 2r dr.
    MacSquare,
    /// ∫ S S (1−w²)^α d2w.
    Geg1,
    /// ∫ Z Z (w²−1)^α d2w.
    Geg2,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub formula: Formula,
    /// Comma separated orders.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    /// Comma separated first spectral parameters (a, β1 or λ1).
    #[arg(long, value_delimiter = ',')]
    pub p1: Vec<f64>,
    /// Comma separated second spectral parameters (b, β2 or λ2).
    #[arg(long, value_delimiter = ',')]
    pub p2: Vec<f64>,
    /// Replace the grid by this many points sampled with the seed.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Euclidean => GeometryKind::Euclidean,
            GeometryArg::Hyperbolic => GeometryKind::Hyperbolic,
            GeometryArg::Spherical => GeometryKind::Spherical,
        }
    }
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    /// Inclusive range `lo..hi`.
    #[arg(long, default_value = "1..8")]
    pub dim_range: String,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = GeometryArg::Euclidean)]
    pub geometry: GeometryArg,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub beta: f64,
    /// Coupling; `inf` for the free kernel.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    /// Arclength grid `start:stop:count` along the first axis.
    #[arg(long, default_value = "0.1:3:30")]
    pub along: String,
    /// Distance of the second point from the base point (second axis; the
    /// negative half-line when d = 1).
    #[arg(long, default_value_t = 1.0)]
    pub source: f64,
}

/// A value of an output field.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}
impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}
impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.to_string())
    }
}
impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Str(v)
    }
}
impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

pub type Record = Vec<(&'static str, Field)>;

/// Float with 17 significant digits; non-finite values as `nan`/`inf`.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_field(f: &Field) -> String {
    match f {
        Field::Num(v) if v.is_finite() => fmt_num(*v),
        Field::Num(_) => "null".into(),
        Field::Int(i) => i.to_string(),
        Field::Str(s) => serde_json::to_string(s).expect("strings serialize"),
        Field::Bool(b) => b.to_string(),
    }
}

fn csv_field(f: &Field) -> String {
    match f {
        Field::Num(v) => fmt_num(*v),
        Field::Int(i) => i.to_string(),
        Field::Bool(b) => b.to_string(),
        Field::Str(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Field::Str(s) => s.clone(),
    }
}

/// Writes records in the chosen format. CSV takes its header from the
/// first record; later records must share the keys.
pub fn write_records(out: &mut dyn Write, format: Format, records: &[Record]) -> std::io::Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                let body: Vec<String> = r.iter().map(|(k, v)| format!("\"{k}\":{}", json_field(v))).collect();
                writeln!(out, "{{{}}}", body.join(","))?;
            }
        }
        Format::Csv => {
            let mut header: Vec<&str> = Vec::new();
            for r in records {
                for (k, _) in r {
                    if !header.contains(k) {
                        header.push(k);
                    }
                }
            }
            if !header.is_empty() {
                writeln!(out, "{}", header.join(","))?;
            }
            for r in records {
                let row: Vec<String> = header
                    .iter()
                    .map(|h| r.iter().find(|(k, _)| k == h).map(|(_, v)| csv_field(v)).unwrap_or_default())
                    .collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// Parses `1.5`, `0.7i`, `-2i`, `1+2i`, `1-0.5i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    let bad = || usage(format!("cannot parse complex number '{s}'"));
    if let Some(body) = t.strip_suffix('i') {
        let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').last();
        let (re, im) = match split {
            Some((k, _)) if !body[..k].ends_with(['e', 'E']) => (&body[..k], &body[k..]),
            _ => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
    } else {
        Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn need_complex(v: &Option<String>, flag: &str) -> Result<Complex64> {
    parse_complex(v.as_deref().ok_or_else(|| usage(format!("--{flag} is required here")))?)
}

fn reject(present: bool, flag: &str, what: &str) -> Result<()> {
    if present {
        Err(usage(format!("--{flag} is not a parameter of {what}")))
    } else {
        Ok(())
    }
}

/// Default tolerance: the environment override when set and valid.
pub fn default_tolerance() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && *t < 1.0)
            .ok_or_else(|| usage(format!("{TOL_ENV}='{v}' is not a tolerance in ]0, 1["))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn eval(args: &EvalArgs, tol: f64) -> Result<Vec<Record>> {
    let what = "this function";
    let complex_record = |name: &str, v: Complex64| -> Record {
        vec![
            ("fn", name.into()),
            ("re", v.re.into()),
            ("im", v.im.into()),
            ("tolerance", 1e-14.into()),
        ]
    };
    // series truncation never looser than the library default
    let base = GegenbauerConfig::default();
    let cfg = GegenbauerConfig {
        tol: tol.min(base.tol),
        ..base
    };
    let rec = match args.function {
        FnName::Gamma | FnName::Digamma | FnName::Pochhammer => {
            reject(args.alpha.is_some(), "alpha", what)?;
            reject(args.lambda.is_some(), "lambda", what)?;
            reject(args.w.is_some() || args.x.is_some(), "w/--x", what)?;
            let z = need_complex(&args.z, "z")?;
            let (kind, name) = match args.function {
                FnName::Gamma => (GammaKind::Gamma, "gamma"),
                FnName::Digamma => (GammaKind::Digamma, "digamma"),
                _ => (GammaKind::Pochhammer(need(args.n, "n")?), "pochhammer"),
            };
            reject(args.function != FnName::Pochhammer && args.n.is_some(), "n", what)?;
            complex_record(name, eval_gamma_family(kind, z)?)
        }
        FnName::BesselK => {
            reject(args.lambda.is_some() || args.z.is_some() || args.n.is_some(), "lambda/--z/--n", what)?;
            reject(args.w.is_some(), "w", what)?;
            let (alpha, x) = (need(args.alpha, "alpha")?, need(args.x, "x")?);
            vec![
                ("fn", "bessel-k".into()),
                ("alpha", alpha.into()),
                ("x", x.into()),
                ("value", bessel_k(alpha, x)?.into()),
                ("tolerance", 1e-12.into()),
            ]
        }
        FnName::GegenbauerS | FnName::GegenbauerZ => {
            reject(args.z.is_some() || args.n.is_some() || args.x.is_some(), "z/--n/--x", what)?;
            let alpha = need(args.alpha, "alpha")?;
            let l = need_complex(&args.lambda, "lambda")?;
            let w = need(args.w, "w")?;
            let (name, v) = if args.function == FnName::GegenbauerS {
                ("gegenbauer-s", gegenbauer_s_scaled(alpha, l, w, 0.0, &cfg)?)
            } else {
                if l.im != 0.0 {
                    return Err(usage("gegenbauer-z takes a real --lambda"));
                }
                ("gegenbauer-z", gegenbauer_z_scaled(alpha, l.re, w, 0.0, &cfg)?)
            };
            vec![
                ("fn", name.into()),
                ("alpha", alpha.into()),
                ("lambda_re", l.re.into()),
                ("lambda_im", l.im.into()),
                ("w", w.into()),
                ("value", v.into()),
                ("tolerance", tol.into()),
            ]
        }
    };
    Ok(vec![rec])
}

fn gamma_power(s: f64) -> Result<GenIntegrand> {
    // r^s e^{-r} = Σ (−1)^k r^{s+k}/k!, subtract every non-integrable term
    let mut terms = Vec::new();
    let mut coeff = 1.0;
    let mut k = 0;
    while s + k as f64 <= -1.0 + 0.05 {
        terms.push(SingularTerm::new(s + k as f64, coeff));
        k += 1;
        coeff *= -1.0 / k as f64;
    }
    Ok(GenIntegrand::new(
        move |r: f64| r.powf(s) * (-r).exp(),
        SingularExpansion::new(terms, 1.0)?,
        f64::INFINITY,
        Tail::Exponential { rate: 1.0 },
    ))
}

fn integrate_cmd(args: &IntegrateArgs, tol: f64) -> Result<Vec<Record>> {
    let what = "this integrand";
    let mut rec: Record = vec![];
    let f = match args.integrand {
        IntegrandName::BesselProduct => {
            reject(args.l1.is_some() || args.l2.is_some() || args.s.is_some(), "l1/--l2/--s", what)?;
            let (alpha, a, b) = (need(args.alpha, "alpha")?, need(args.a, "a")?, need(args.b, "b")?);
            rec.extend([("integrand", "bessel-product".into()), ("alpha", alpha.into()), ("a", a.into()), ("b", b.into())]);
            bessel_product_integrand(alpha, a, b)?
        }
        IntegrandName::GegenbauerS | IntegrandName::GegenbauerZ => {
            reject(args.a.is_some() || args.b.is_some() || args.s.is_some(), "a/--b/--s", what)?;
            let alpha = need(args.alpha, "alpha")?;
            let (l1, l2) = (need_complex(&args.l1, "l1")?, need_complex(&args.l2, "l2")?);
            let (kind, name) = if args.integrand == IntegrandName::GegenbauerS {
                (GegenbauerKind::S, "gegenbauer-s")
            } else {
                (GegenbauerKind::Z, "gegenbauer-z")
            };
            rec.extend([
                ("integrand", name.into()),
                ("alpha", alpha.into()),
                ("l1_re", l1.re.into()),
                ("l1_im", l1.im.into()),
                ("l2_re", l2.re.into()),
                ("l2_im", l2.im.into()),
            ]);
            gegenbauer_integrand(kind, alpha, l1, l2, 0.0)?
        }
        IntegrandName::GammaPower => {
            reject(args.alpha.is_some() || args.a.is_some() || args.b.is_some(), "alpha/--a/--b", what)?;
            reject(args.l1.is_some() || args.l2.is_some(), "l1/--l2", what)?;
            let s = need(args.s, "s")?;
            rec.extend([("integrand", "gamma-power".into()), ("s", s.into())]);
            gamma_power(s)?
        }
    };
    let cfg = GenConfig {
        rel_tol: tol,
        ..GenConfig::default()
    };
    let r = gen_integrate_with(&f, args.split, &cfg)?;
    rec.extend([
        ("split", args.split.into()),
        ("value", r.value.into()),
        ("anomaly", r.anomaly.into()),
        ("tolerance", tol.into()),
        ("tolerance_achieved", r.tolerance_achieved().into()),
    ]);
    Ok(vec![rec])
}

fn table_row(formula: Formula, alpha: f64, p1: f64, p2: f64) -> Result<(f64, f64)> {
    let generalized = alpha.abs() >= 1.0;
    Ok(match formula {
        Formula::Mac => {
            let q = if generalized {
                crate::genquad::gen_bilinear_macdonald(alpha, p1, p2)?.value
            } else {
                macdonald_quadrature(alpha, p1, p2)?
            };
            (mac_bilinear_closed(alpha, p1, p2)?, q)
        }
        Formula::MacSquare => {
            let q = if generalized {
                crate::genquad::gen_bilinear_macdonald(alpha, p1, p1)?.value
            } else {
                macdonald_quadrature(alpha, p1, p1)?
            };
            (mac_square_closed(alpha, p1)?, q)
        }
        Formula::Geg1 => {
            let q = if generalized {
                let l = |b: f64| Complex64::new(0.0, b);
                crate::genquad::gen_bilinear_gegenbauer(GegenbauerKind::S, alpha, l(p1), l(p2))?.value
            } else {
                gegenbauer_s_quadrature(alpha, p1, p2)?
            };
            (geg_s_bilinear_closed(alpha, p1, p2)?, q)
        }
        Formula::Geg2 => {
            let q = if generalized {
                let l = |x: f64| Complex64::new(x, 0.0);
                crate::genquad::gen_bilinear_gegenbauer(GegenbauerKind::Z, alpha, l(p1), l(p2))?.value
            } else {
                gegenbauer_z_quadrature(alpha, p1, p2)?
            };
            (geg_z_bilinear_closed(alpha, p1, p2)?, q)
        }
    })
}

fn table(args: &TableArgs, seed: u64) -> Result<Vec<Record>> {
    let name = match args.formula {
        Formula::Mac => "mac",
        Formula::MacSquare => "mac-square",
        Formula::Geg1 => "geg1",
        Formula::Geg2 => "geg2",
    };
    let mut grid = Vec::new();
    if let Some(n) = args.samples {
        if !(args.alpha.is_empty() && args.p1.is_empty() && args.p2.is_empty()) {
            return Err(usage("--samples replaces --alpha/--p1/--p2"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n {
            let alpha = rng.gen_range(-0.9..0.9);
            let p1: f64 = rng.gen_range(0.3..3.0);
            let mut p2: f64 = rng.gen_range(0.3..3.0);
            if (p1 - p2).abs() < 0.05 {
                p2 += 0.1;
            }
            grid.push((alpha, p1, p2));
        }
    } else {
        if args.alpha.is_empty() || args.p1.is_empty() {
            return Err(usage("--alpha and --p1 (or --samples) are required"));
        }
        let p2s = if args.formula == Formula::MacSquare {
            if !args.p2.is_empty() {
                return Err(usage("--p2 is not a parameter of mac-square"));
            }
            vec![f64::NAN]
        } else if args.p2.is_empty() {
            return Err(usage("--p2 is required here"));
        } else {
            args.p2.clone()
        };
        for &alpha in &args.alpha {
            for &p1 in &args.p1 {
                for &p2 in &p2s {
                    grid.push((alpha, p1, p2));
                }
            }
        }
    }
    Ok(grid
        .into_iter()
        .map(|(alpha, p1, p2)| {
            let mut rec: Record = vec![("formula", name.into()), ("alpha", alpha.into()), ("p1", p1.into())];
            if args.formula != Formula::MacSquare {
                rec.push(("p2", p2.into()));
            }
            match table_row(args.formula, alpha, p1, p2) {
                Ok((c, q)) => rec.extend([
                    ("closed_form", c.into()),
                    ("quadrature", q.into()),
                    ("rel_diff", ((c - q).abs() / c.abs()).into()),
                    ("tolerance", TABLE_TOL.into()),
                ]),
                Err(e) => rec.push(("error", e.code().into())),
            }
            rec
        })
        .collect())
}

fn check_record(r: &CheckRecord) -> Record {
    let mut rec: Record = vec![
        ("suite", r.suite.into()),
        ("criterion", (r.criterion as usize).into()),
        ("name", r.name.clone().into()),
        ("value", r.value.into()),
        ("reference", r.reference.into()),
        ("gap", r.gap.into()),
        ("tolerance", r.tolerance.into()),
        ("pass", r.pass.into()),
    ];
    if let Some(e) = &r.error {
        rec.push(("error", e.clone().into()));
    }
    rec
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || usage(format!("cannot parse range '{s}', expected lo..hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn sigma_cmd(args: &SigmaArgs) -> Result<Vec<Record>> {
    let (lo, hi) = parse_range(&args.dim_range)?;
    let kind: GeometryKind = args.geometry.into();
    let mut out = Vec::new();
    for d in lo..=hi {
        let mut rec: Record = vec![("geometry", format!("{kind:?}").to_lowercase().into()), ("d", d.into()), ("beta", args.beta.into())];
        let row = if kind == GeometryKind::Euclidean {
            sigma(d, args.beta).and_then(|s| {
                let c = sigma_derivative_check(d, args.beta)?;
                Ok(vec![
                    ("sigma", s.into()),
                    ("dsigma_lhs", c.lhs.into()),
                    ("dsigma_rhs", c.rhs.into()),
                    ("rel_diff", c.relative_gap().into()),
                    ("tolerance", 1e-8.into()),
                ])
            })
        } else {
            let g = Geometry::new(kind, d)?;
            sigma_numeric_curved(g, args.beta).map(|s| {
                vec![
                    ("sigma", s.value.into()),
                    ("dsigma", s.derivative.into()),
                    ("normalization", s.normalization.into()),
                    ("tolerance", 1e-10.into()),
                ]
            })
        };
        match row {
            Ok(fields) => rec.extend(fields),
            Err(e) => rec.push(("error", e.code().into())),
        }
        out.push(rec);
    }
    Ok(out)
}

fn green_cmd(args: &GreenArgs, tol: f64) -> Result<Vec<Record>> {
    let parts: Vec<&str> = args.along.split(':').collect();
    let bad = || usage(format!("cannot parse --along '{}', expected start:stop:count", args.along));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 || !(stop >= start) {
        return Err(bad());
    }
    let gamma = match args.gamma.as_str() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        v => v.parse::<f64>().map_err(|_| usage(format!("cannot parse --gamma '{v}'")))?,
    };
    let g = Geometry::new(args.geometry.into(), args.dim)?;
    let spec = KreinKernelSpec::new(g, args.beta, gamma)?;
    let y: SpacePoint = if g.d == 1 {
        g.along_axis(-args.source)
    } else {
        g.at_distance(args.source, 1)
    };
    let mut out = Vec::new();
    for k in 0..count {
        let t = if count == 1 {
            start
        } else {
            start + (stop - start) * k as f64 / (count - 1) as f64
        };
        let mut rec: Record = vec![("arclength", t.into())];
        match krein_green(&spec, &g.along_axis(t), &y) {
            Ok(v) => rec.extend([("kernel", v.into()), ("tolerance", tol.into())]),
            Err(e) => {
                rec.extend([("kernel", f64::NAN.into()), ("tolerance", tol.into())]);
                rec.push(("error", e.code().into()));
            }
        }
        out.push(rec);
    }
    Ok(out)
}

/// Runs a parsed configuration, writing records to `out`. Returns the
/// exit status: 0 on success, 2 when a verification row fails.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let tol = match config.tol {
        Some(t) if t > 0.0 && t < 1.0 => t,
        Some(t) => return Err(usage(format!("--tol {t} is not in ]0, 1["))),
        None => default_tolerance()?,
    };
    let mut status = 0;
    let records = match &config.command {
        Command::Eval(a) => eval(a, tol)?,
        Command::Integrate(a) => integrate_cmd(a, tol)?,
        Command::Table(a) => table(a, config.seed)?,
        Command::Verify(a) => {
            let suites: Vec<Suite> = if a.suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::from_name(&a.suite).ok_or_else(|| {
                    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    usage(format!("unknown suite '{}', expected one of {} or all", a.suite, names.join(", ")))
                })?]
            };
            let rows: Vec<CheckRecord> = suites.into_iter().flat_map(|s| run_suite(s, config.seed)).collect();
            if rows.iter().any(|r| !r.pass) {
                status = 2;
            }
            rows.iter().map(check_record).collect()
        }
        Command::Sigma(a) => sigma_cmd(a)?,
        Command::Green(a) => green_cmd(a, tol)?,
    };
    write_records(out, config.format, &records).map_err(|e| usage(format!("cannot write output: {e}")))?;
    Ok(status)
}

/// Parses `args`, runs and reports errors on `err`. Usage errors give 1.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&config, out) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["genint"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.7i").unwrap(), Complex64::new(0.0, 0.7));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("1e-3-0.5i").unwrap(), Complex64::new(1e-3, -0.5));
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn eval_s_at_one() {
        let (code, out, _) = run_args(&["eval", "--fn", "gegenbauer-s", "--alpha", "0.3", "--lambda", "0.7i", "--w", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        let expect = crate::specfun::gamma::rgamma(1.3);
        assert!((v["value"].as_f64().unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn sigma_rows() {
        let (code, out, _) = run_args(&["sigma", "--dim-range", "1..6", "--beta", "1", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 7);
        let d3: Vec<&str> = lines[3].split(',').collect();
        let s: f64 = d3[3].parse().unwrap();
        assert!((s - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["eval", "--fn", "bessel-k", "--alpha", "0.3"]).0, 1);
        assert_eq!(run_args(&["eval", "--fn", "bessel-k", "--alpha", "0.3", "--x", "1", "--bogus", "2"]).0, 1);
        assert_eq!(run_args(&["eval", "--fn", "bessel-k", "--alpha", "0.3", "--x", "1", "--w", "2"]).0, 1);
        assert_eq!(run_args(&["verify", "--suite", "nope"]).0, 1);
        assert_eq!(run_args(&["sigma", "--dim-range", "3..1", "--beta", "1"]).0, 1);
    }

    #[test]
    fn numeric_errors_carry_codes() {
        let (code, _, err) = run_args(&["eval", "--fn", "gamma", "--z", "-2"]);
        assert_eq!(code, 1);
        assert!(err.contains("specfun.pole"), "{err}");
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["table", "--formula", "mac", "--samples", "4", "--format", "csv"];
        let a = run_args(&args);
        let b = run_args(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert!(a.1.starts_with("formula,alpha,p1,p2,closed_form,quadrature,rel_diff"));
    }

    #[test]
    fn integrate_gamma_power() {
        let (code, out, _) = run_args(&["integrate", "--integrand", "gamma-power", "--s", "-1.5"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["value"].as_f64().unwrap() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn green_profile_free_kernel() {
        let (code, out, _) = run_args(&[
            "green", "--geometry", "euclidean", "--dim", "3", "--beta", "1", "--gamma", "inf", "--along", "0:2:3",
            "--format", "csv",
        ]);
        assert_eq!(code, 0);
        let last: Vec<f64> = out.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        let r = 5f64.sqrt();
        assert!((last[1] - (-r).exp() / (4.0 * std::f64::consts::PI * r)).abs() < 1e-15);
    }
}
