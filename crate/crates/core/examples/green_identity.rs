//! Bilinear integrals from endpoint Wronskians of Sturm-Liouville problems.
use genint::sturm::{diagonal_integral, greens_identity_check, Eigenpair, SturmLiouvilleSpec};

fn main() -> genint::error::Result<()> {
    let alpha = 0.3;
    let spec = SturmLiouvilleSpec::bessel(alpha);
    let c = greens_identity_check(&spec, &Eigenpair::macdonald(alpha, 1.0), &Eigenpair::macdonald(alpha, 2.0))?;
    println!("Macdonald: quadrature {:.16e} wronskians {:.16e}", c.lhs, c.rhs);

    // the diagonal as a derivative in the energy
    let d = diagonal_integral(&spec, |e: f64| Ok(Eigenpair::macdonald(alpha, e.sqrt())), 4.0)?;
    println!("Macdonald square at b=2: {:.16e} (+/- {:.1e})", d.value, d.error);

    let spec = SturmLiouvilleSpec::gegenbauer_exterior(0.5);
    let c = greens_identity_check(&spec, &Eigenpair::gegenbauer_z(0.5, 2.0), &Eigenpair::gegenbauer_z(0.5, 1.0))?;
    println!("Gegenbauer Z: quadrature {:.16e} wronskians {:.16e} (exact 8/3)", c.lhs, c.rhs);
    Ok(())
}
