//! Kernel-level checks of the resolvent equations.

use super::{
    green_free_invariant, invariant_argument, krein_green, Coupling, Geometry, GeometryKind, KreinKernelSpec,
    SpacePoint,
};
use crate::error::{Error, Result};
use crate::extrapolate::limit_richardson;
use crate::quad::{integrate, integrate_exponential_tail, QuadConfig};
use crate::sturm::{apply_operator_with_step, SturmLiouvilleSpec};

fn too_close(gap: f64) -> Error {
    Error::Domain {
        module: "pointgreen.pde",
        value: gap,
        reason: "point closer than 10 h to the source or the base point",
    }
}

/// `(−Δ_x + β² + s) G^γ(x, x′)` by finite differences with step `h`.
///
/// On ℝ^d `h` is the coordinate step of the Cartesian stencil. On the curved
/// models the kernel is a sum of functions of `[x|x′]` (or `(x|x′)`) and of
/// `[x|0]`; each is differentiated with the radial Gegenbauer form of the
/// operator in that variable, with step `h`.
pub fn pde_residual_check(spec: &KreinKernelSpec, x: &SpacePoint, y: &SpacePoint, h: f64) -> Result<f64> {
    let g = spec.geometry;
    if x.geometry != g || y.geometry != g {
        return Err(Error::GeometryMismatch);
    }
    let mass = spec.beta * spec.beta + g.shift();
    match g.kind {
        GeometryKind::Euclidean => {
            for p in [y, &spec.base_point] {
                let gap = invariant_argument(x, p)?;
                if gap < 10.0 * h && !(spec.gamma == Coupling::Infinite && std::ptr::eq(p, &spec.base_point)) {
                    return Err(too_close(gap));
                }
            }
            let at = |c: &[f64]| krein_green(spec, &SpacePoint { geometry: g, coords: c.to_vec() }, y);
            let g0 = at(&x.coords)?;
            let mut lap = 0.0;
            for i in 0..g.d {
                let mut plus = x.coords.clone();
                let mut minus = x.coords.clone();
                plus[i] += h;
                minus[i] -= h;
                lap += (at(&plus)? - 2.0 * g0 + at(&minus)?) / (h * h);
            }
            Ok(-lap + mass * g0)
        }
        GeometryKind::Hyperbolic | GeometryKind::Spherical => {
            let alpha = g.d as f64 / 2.0 - 1.0;
            let (radial, sign) = if g.kind == GeometryKind::Hyperbolic {
                // the exterior operator is +Δ in w = cosh r
                (SturmLiouvilleSpec::gegenbauer_exterior(alpha), -1.0)
            } else {
                // the interior operator is −Δ in w = cos r
                (SturmLiouvilleSpec::gegenbauer_interior(alpha), 1.0)
            };
            let beta = spec.beta;
            let f = move |w: f64| green_free_invariant(g, beta, w).unwrap_or(f64::NAN);
            let residual = |w: f64| -> Result<f64> {
                let gap = if g.kind == GeometryKind::Hyperbolic { w - 1.0 } else { 1.0 - w };
                if gap < 10.0 * h {
                    return Err(too_close(gap));
                }
                Ok(sign * apply_operator_with_step(&radial, &f, w, h)? + mass * f(w))
            };
            let mut total = residual(invariant_argument(x, y)?)?;
            if spec.gamma != Coupling::Infinite {
                let k = spec.coupling_factor()?;
                let gy = green_free_invariant(g, beta, invariant_argument(&spec.base_point, y)?)?;
                total += k * gy * residual(invariant_argument(x, &spec.base_point)?)?;
            }
            Ok(total)
        }
    }
}

/// Both sides of `∂_ρ G^γ(x,x′) = −∫ G^γ(x,y) G^γ(y,x′) dy` on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl ResolventCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(f64::MIN_POSITIVE)
    }
}

/// d = 1 check of the differential resolvent formula at ρ = β².
pub fn resolvent_derivative_check_1d(beta: f64, gamma: impl Into<Coupling>, x: f64, y: f64) -> Result<ResolventCheck> {
    let gamma = gamma.into();
    let g = Geometry::euclidean(1);
    let pt = |v: f64| SpacePoint {
        geometry: g,
        coords: vec![v],
    };
    let kernel = |b: f64, u: f64, v: f64| -> Result<f64> {
        let spec = KreinKernelSpec::new(g, b, gamma)?;
        krein_green(&spec, &pt(u), &pt(v))
    };
    let rho = beta * beta;
    let mut failure = None;
    let lhs = limit_richardson(
        |dr| {
            let mut ev = |r: f64| match kernel(r.sqrt(), x, y) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            };
            (ev(rho + dr) - ev(rho - dr)) / (2.0 * dr)
        },
        0.05 * rho,
        2.0,
        6,
        2.0,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let spec = KreinKernelSpec::new(g, beta, gamma)?;
    let prod = |v: f64| -> f64 {
        let a = krein_green(&spec, &pt(x), &pt(v));
        let b = krein_green(&spec, &pt(v), &pt(y));
        match (a, b) {
            (Ok(a), Ok(b)) => a * b,
            _ => f64::NAN,
        }
    };
    let mut cuts = vec![x, y, 0.0];
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let cfg = QuadConfig::with_rel_tol(1e-12);
    let rate = 2.0 * beta;
    let mut total = integrate_exponential_tail(|t| prod(cuts[0] - (t - cuts[0])), cuts[0], rate, &cfg)?.value;
    for w in cuts.windows(2) {
        total += integrate(prod, w[0], w[1], &cfg)?.value;
    }
    let last = *cuts.last().unwrap();
    total += integrate_exponential_tail(prod, last, rate, &cfg)?.value;
    Ok(ResolventCheck {
        lhs: lhs.value,
        rhs: -total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_line_resolvent_identity() {
        let c = resolvent_derivative_check_1d(1.0, f64::INFINITY, 0.3, -0.2).unwrap();
        assert!(c.relative_gap() < 1e-9, "{c:?}");
        let c = resolvent_derivative_check_1d(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(c.relative_gap() < 1e-6, "{c:?}");
    }

    #[test]
    fn euclidean_residual_is_second_order() {
        let g = Geometry::euclidean(3);
        let spec = KreinKernelSpec::new(g, 1.0, 0.0).unwrap();
        let x = SpacePoint::new(g, vec![0.6, 0.3, -0.2]).unwrap();
        let y = SpacePoint::new(g, vec![-0.5, 0.1, 0.4]).unwrap();
        let r: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&h| pde_residual_check(&spec, &x, &y, h).unwrap().abs())
            .collect();
        let slope = (r[0] / r[2]).log2() / 2.0;
        assert!((slope - 2.0).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn curved_free_residuals_vanish() {
        for g in [Geometry::hyperbolic(3), Geometry::spherical(2), Geometry::hyperbolic(4)] {
            let spec = KreinKernelSpec::new(g, 1.2, f64::INFINITY).unwrap();
            let x = g.along_axis(0.7);
            let y = g.at_distance(0.4, 1);
            let r1 = pde_residual_check(&spec, &x, &y, 1e-3).unwrap().abs();
            let r2 = pde_residual_check(&spec, &x, &y, 5e-4).unwrap().abs();
            assert!(r1 < 1e-4 && r2 < r1, "{g:?}: {r1} {r2}");
        }
    }
}
