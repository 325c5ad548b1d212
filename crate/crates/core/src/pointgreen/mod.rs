//! Resolvent kernels of the Laplacian on ℝ^d, ℍ^d and 𝕊^d and their
//! rank-one (Krein-type) perturbations supported at a base point.

mod checks;
mod sigma;

pub use checks::{pde_residual_check, resolvent_derivative_check_1d, ResolventCheck};
pub use sigma::{
    curved_sigma_derivative, sigma, sigma_derivative_check, sigma_general, sigma_numeric_curved, CurvedSigma,
    SigmaCheck, SIGMA_NORMALIZATION,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::bessel::{bessel_k, MAX_ARGUMENT};
use crate::specfun::gamma::{abs_gamma_sq, gamma};
use crate::specfun::gegenbauer::{gegenbauer_s, gegenbauer_z};

/// Tolerance on the defining quadric of curved points.
pub const MANIFOLD_TOL: f64 = 1e-12;

/// Resonance guard on `|γ + Σ|`.
pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Euclidean,
    Hyperbolic,
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Geometry {
    pub kind: GeometryKind,
    pub d: usize,
}

impl Geometry {
    pub fn new(kind: GeometryKind, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain {
                module: "pointgreen",
                value: 0.0,
                reason: "dimension must be at least 1",
            });
        }
        Ok(Self { kind, d })
    }

    pub fn euclidean(d: usize) -> Self {
        Self::new(GeometryKind::Euclidean, d).expect("d >= 1")
    }

    pub fn hyperbolic(d: usize) -> Self {
        Self::new(GeometryKind::Hyperbolic, d).expect("d >= 1")
    }

    pub fn spherical(d: usize) -> Self {
        Self::new(GeometryKind::Spherical, d).expect("d >= 1")
    }

    /// Constant `s` in the operator `−Δ + s + β²` whose kernel is computed:
    /// 0, `−((d−1)/2)²` and `+((d−1)/2)²`.
    pub fn shift(&self) -> f64 {
        let c = ((self.d as f64 - 1.0) / 2.0).powi(2);
        match self.kind {
            GeometryKind::Euclidean => 0.0,
            GeometryKind::Hyperbolic => -c,
            GeometryKind::Spherical => c,
        }
    }

    /// Number of coordinates of a point.
    pub fn coordinate_len(&self) -> usize {
        match self.kind {
            GeometryKind::Euclidean => self.d,
            _ => self.d + 1,
        }
    }

    /// Origin of ℝ^d, or (1, 0, …, 0) on the curved models.
    pub fn base_point(&self) -> SpacePoint {
        let mut coords = vec![0.0; self.coordinate_len()];
        if self.kind != GeometryKind::Euclidean {
            coords[0] = 1.0;
        }
        SpacePoint {
            geometry: *self,
            coords,
        }
    }

    /// The point at geodesic distance `r` from the base point in direction
    /// of the first spatial axis.
    pub fn along_axis(&self, r: f64) -> SpacePoint {
        self.at_distance(r, 0)
    }

    /// The point at geodesic distance `r` from the base point along spatial
    /// axis `axis`.
    pub fn at_distance(&self, r: f64, axis: usize) -> SpacePoint {
        let mut coords = vec![0.0; self.coordinate_len()];
        match self.kind {
            GeometryKind::Euclidean => coords[axis] = r,
            GeometryKind::Hyperbolic => {
                coords[0] = r.cosh();
                coords[1 + axis] = r.sinh();
            }
            GeometryKind::Spherical => {
                coords[0] = r.cos();
                coords[1 + axis] = r.sin();
            }
        }
        SpacePoint {
            geometry: *self,
            coords,
        }
    }
}

/// A point of one of the three model spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacePoint {
    pub geometry: Geometry,
    pub coords: Vec<f64>,
}

fn minkowski(x: &[f64], y: &[f64]) -> f64 {
    x[0] * y[0] - x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<f64>()
}

fn euclid(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl SpacePoint {
    /// Validates the coordinates and rescales curved points onto the
    /// quadric when they are off by at most [`MANIFOLD_TOL`].
    pub fn new(geometry: Geometry, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != geometry.coordinate_len() {
            return Err(Error::Domain {
                module: "pointgreen",
                value: coords.len() as f64,
                reason: "wrong number of coordinates for this geometry",
            });
        }
        let norm = match geometry.kind {
            GeometryKind::Euclidean => return Ok(Self { geometry, coords }),
            GeometryKind::Hyperbolic => {
                if coords[0] < 1.0 - MANIFOLD_TOL {
                    return Err(Error::Domain {
                        module: "pointgreen",
                        value: coords[0],
                        reason: "hyperboloid points need x0 >= 1",
                    });
                }
                minkowski(&coords, &coords)
            }
            GeometryKind::Spherical => euclid(&coords, &coords),
        };
        if (norm - 1.0).abs() > MANIFOLD_TOL * coords.iter().map(|c| c * c).sum::<f64>().max(1.0) {
            return Err(Error::Domain {
                module: "pointgreen",
                value: norm,
                reason: "point is off the model quadric",
            });
        }
        let s = norm.sqrt().recip();
        Ok(Self {
            geometry,
            coords: coords.into_iter().map(|c| c * s).collect(),
        })
    }
}

/// `|x−y|`, `[x|y] = cosh r` or `(x|y) = cos r`.
pub fn invariant_argument(x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    if x.geometry != y.geometry {
        return Err(Error::GeometryMismatch);
    }
    Ok(match x.geometry.kind {
        GeometryKind::Euclidean => x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt(),
        GeometryKind::Hyperbolic => minkowski(&x.coords, &y.coords).max(1.0),
        GeometryKind::Spherical => euclid(&x.coords, &y.coords).clamp(-1.0, 1.0),
    })
}

/// Geodesic distance between two points.
pub fn distance(x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    let v = invariant_argument(x, y)?;
    Ok(match x.geometry.kind {
        GeometryKind::Euclidean => v,
        GeometryKind::Hyperbolic => v.acosh(),
        GeometryKind::Spherical => v.acos(),
    })
}

/// Constant in front of the special function in the free kernel.
pub fn free_prefactor(g: Geometry, beta: f64) -> Result<f64> {
    let d = g.d as f64;
    Ok(match g.kind {
        GeometryKind::Euclidean => (2.0 * PI).powf(-d / 2.0) * beta.powf(d / 2.0 - 1.0),
        GeometryKind::Hyperbolic => {
            PI.sqrt() * gamma((d - 1.0) / 2.0 + beta)? / (2f64.sqrt() * (2.0 * PI).powf(d / 2.0) * 2f64.powf(beta))
        }
        GeometryKind::Spherical => {
            let x = d / 2.0 - 0.5;
            if x <= 0.0 && beta == 0.0 {
                return Err(Error::Pole {
                    module: "pointgreen",
                    location: x,
                });
            }
            abs_gamma_sq(x, beta) / (2f64.powf(d) * PI.powf(d / 2.0))
        }
    })
}

/// The free kernel as a function of the invariant argument.
pub fn green_free_invariant(g: Geometry, beta: f64, v: f64) -> Result<f64> {
    check_beta(g, beta)?;
    let alpha = g.d as f64 / 2.0 - 1.0;
    let c = free_prefactor(g, beta)?;
    match g.kind {
        GeometryKind::Euclidean if g.d == 1 => Ok((-beta * v).exp() / (2.0 * beta)),
        GeometryKind::Euclidean => {
            if !(v > 0.0) {
                return Err(Error::Coincident);
            }
            let x = beta * v;
            if x > MAX_ARGUMENT {
                return Ok(0.0);
            }
            Ok(c * v.powf(-alpha) * bessel_k(alpha, x)?)
        }
        GeometryKind::Hyperbolic => {
            if !(v > 1.0) {
                return Err(Error::Coincident);
            }
            Ok(c * gegenbauer_z(alpha, beta, v)?)
        }
        GeometryKind::Spherical => {
            if !(v < 1.0) {
                return Err(Error::Coincident);
            }
            Ok(c * gegenbauer_s(alpha, Complex64::new(0.0, beta), -v)?)
        }
    }
}

fn check_beta(g: Geometry, beta: f64) -> Result<()> {
    let ok = match g.kind {
        GeometryKind::Spherical => beta.is_finite(),
        _ => beta > 0.0 && beta.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            module: "pointgreen",
            value: beta,
            reason: "spectral parameter must be positive (real for the sphere)",
        })
    }
}

/// Free resolvent kernel `G(−β²; x, x′)`.
pub fn green_free(g: Geometry, beta: f64, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    if x.geometry != g || y.geometry != g {
        return Err(Error::GeometryMismatch);
    }
    green_free_invariant(g, beta, invariant_argument(x, y)?)
}

/// Coupling `γ ∈ ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Finite(f64),
    Infinite,
}

impl From<f64> for Coupling {
    fn from(g: f64) -> Self {
        if g.is_infinite() {
            Coupling::Infinite
        } else {
            Coupling::Finite(g)
        }
    }
}

/// Data of the perturbed kernel. Σ is evaluated once on construction
/// (closed form on ℝ^d, normalized quadrature on curved spaces).
#[derive(Debug, Clone)]
pub struct KreinKernelSpec {
    pub geometry: Geometry,
    pub beta: f64,
    pub gamma: Coupling,
    pub base_point: SpacePoint,
    pub sigma: f64,
}

impl KreinKernelSpec {
    pub fn new(geometry: Geometry, beta: f64, gamma: impl Into<Coupling>) -> Result<Self> {
        check_beta(geometry, beta)?;
        let gamma = gamma.into();
        let sigma = match (gamma, geometry.kind) {
            (Coupling::Infinite, _) => f64::NAN,
            (_, GeometryKind::Euclidean) => sigma(geometry.d, beta)?,
            _ => sigma_numeric_curved(geometry, beta)?.value,
        };
        Ok(Self {
            geometry,
            beta,
            gamma,
            base_point: geometry.base_point(),
            sigma,
        })
    }

    /// `1/(γ + Σ)`, zero for γ = ∞.
    pub fn coupling_factor(&self) -> Result<f64> {
        match self.gamma {
            Coupling::Infinite => Ok(0.0),
            Coupling::Finite(g) => {
                let den = g + self.sigma;
                if den.abs() < RESONANCE_TOL {
                    return Err(Error::Resonance { denominator: den.abs() });
                }
                Ok(1.0 / den)
            }
        }
    }
}

/// `G(x,x′) + G(x,0) G(0,x′)/(γ + Σ)`.
pub fn krein_green(spec: &KreinKernelSpec, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    let g = spec.geometry;
    let free = green_free(g, spec.beta, x, y)?;
    if spec.gamma == Coupling::Infinite {
        return Ok(free);
    }
    let k = spec.coupling_factor()?;
    let gx = green_free(g, spec.beta, x, &spec.base_point)?;
    let gy = green_free(g, spec.beta, &spec.base_point, y)?;
    Ok(free + gx * gy * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(g: Geometry, c: &[f64]) -> SpacePoint {
        SpacePoint::new(g, c.to_vec()).unwrap()
    }

    #[test]
    fn invariant_arguments() {
        let e = Geometry::euclidean(3);
        assert_eq!(invariant_argument(&pt(e, &[0.0, 0.0, 0.0]), &pt(e, &[3.0, 4.0, 0.0])).unwrap(), 5.0);
        let h = Geometry::hyperbolic(2);
        let x = h.along_axis(0.7);
        assert!((invariant_argument(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let s = Geometry::spherical(2);
        assert_eq!(invariant_argument(&pt(s, &[0.0, 0.0, 1.0]), &pt(s, &[0.0, 0.0, -1.0])).unwrap(), -1.0);
        assert!(matches!(invariant_argument(&x, &s.base_point()), Err(Error::GeometryMismatch)));
    }

    #[test]
    fn off_quadric_points_are_rejected() {
        let s = Geometry::spherical(2);
        assert!(SpacePoint::new(s, vec![1.0, 1e-3, 0.0]).is_err());
        let p = SpacePoint::new(s, vec![1.0 + 4e-13, 0.0, 0.0]).unwrap();
        assert_eq!(p.coords[0], 1.0);
    }

    #[test]
    fn euclidean_kernels_are_elementary() {
        for &(r, b) in &[(0.3, 1.0), (2.0, 0.5), (5.0, 2.0)] {
            let g3 = green_free_invariant(Geometry::euclidean(3), b, r).unwrap();
            let e3 = (-b * r).exp() / (4.0 * PI * r);
            assert!((g3 - e3).abs() < 1e-12 * e3);
            let g1 = green_free_invariant(Geometry::euclidean(1), b, r).unwrap();
            let e1 = (-b * r).exp() / (2.0 * b);
            assert!((g1 - e1).abs() < 1e-12 * e1);
        }
    }

    #[test]
    fn hyperbolic_three_dimensional_kernel() {
        // e^{−βr}/(4π sinh r)
        let g = Geometry::hyperbolic(3);
        for &(r, b) in &[(0.4, 1.0), (1.5, 0.7)] {
            let v = green_free_invariant(g, b, f64::cosh(r)).unwrap();
            let e = (-b * r).exp() / (4.0 * PI * r.sinh());
            assert!((v - e).abs() < 1e-12 * e, "{v} vs {e}");
        }
    }

    #[test]
    fn krein_three_dimensional_example() {
        let g = Geometry::euclidean(3);
        let spec = KreinKernelSpec::new(g, 1.0, 0.0).unwrap();
        let x = pt(g, &[1.0, 0.0, 0.0]);
        let y = pt(g, &[-1.0, 0.0, 0.0]);
        let v = krein_green(&spec, &x, &y).unwrap();
        let e = (-2f64).exp() / (8.0 * PI) + (-2f64).exp() / (4.0 * PI);
        assert!((v - e).abs() < 1e-14);
    }

    #[test]
    fn infinite_coupling_is_free() {
        let g = Geometry::euclidean(2);
        let spec = KreinKernelSpec::new(g, 1.3, f64::INFINITY).unwrap();
        let (x, y) = (pt(g, &[0.2, 0.5]), pt(g, &[-1.0, 0.1]));
        assert_eq!(krein_green(&spec, &x, &y).unwrap(), green_free(g, 1.3, &x, &y).unwrap());
    }

    #[test]
    fn resonance_is_reported() {
        let g = Geometry::euclidean(1);
        let spec = KreinKernelSpec::new(g, 2.0, 0.25).unwrap();
        let x = pt(g, &[1.0]);
        assert!(matches!(krein_green(&spec, &x, &x.clone()), Err(Error::Coincident) | Err(Error::Resonance { .. })));
        let y = pt(g, &[0.5]);
        assert!(matches!(krein_green(&spec, &x, &y), Err(Error::Resonance { .. })));
    }
}
