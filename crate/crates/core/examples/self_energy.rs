//! Self-energy of the point interaction across dimensions and geometries.
use genint::pointgreen::{sigma, sigma_derivative_check, sigma_numeric_curved, Geometry};

fn main() -> genint::error::Result<()> {
    let beta = 1.5;
    for d in 1..=6 {
        let c = sigma_derivative_check(d, beta)?;
        println!("R^{d}: Sigma = {:.16e}, dSigma {:.12e} vs {:.12e}", sigma(d, beta)?, c.lhs, c.rhs);
    }
    for g in [Geometry::hyperbolic(3), Geometry::spherical(3)] {
        let s = sigma_numeric_curved(g, beta)?;
        println!("{:?} d=3: Sigma = {:.16e}, dSigma = {:.16e} [{}]", g.kind, s.value, s.derivative, s.normalization);
    }
    Ok(())
}
