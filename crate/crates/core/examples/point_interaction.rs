//! Resolvent kernels with a point interaction at the base point.
use genint::pointgreen::{krein_green, pde_residual_check, Geometry, KreinKernelSpec};

fn main() -> genint::error::Result<()> {
    for g in [Geometry::euclidean(3), Geometry::hyperbolic(3), Geometry::spherical(2)] {
        let y = g.at_distance(1.0, 1);
        for gamma in [f64::INFINITY, 0.5] {
            let spec = KreinKernelSpec::new(g, 1.0, gamma)?;
            let x = g.along_axis(0.8);
            let v = krein_green(&spec, &x, &y)?;
            let res = pde_residual_check(&spec, &x, &y, 1e-3)?;
            println!("{:?} d={} gamma={gamma}: G = {v:.16e}, residual {res:.2e}", g.kind, g.d);
        }
    }
    Ok(())
}
