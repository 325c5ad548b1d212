//! Gamma family, Macdonald functions and the two Gegenbauer families.
use genint::specfun::bessel::bessel_k;
use genint::specfun::gamma::{eval_gamma_family, GammaKind};
use genint::specfun::gegenbauer::{gegenbauer_s, gegenbauer_z, gegenbauer_z_whipple, GegenbauerConfig};
use num_complex::Complex64;

fn main() -> genint::error::Result<()> {
    let z = Complex64::new(0.5, 2.0);
    println!("Gamma({z}) = {}", eval_gamma_family(GammaKind::Gamma, z)?);
    println!("psi({z}) = {}", eval_gamma_family(GammaKind::Digamma, z)?);
    println!("(z)_4 = {}", eval_gamma_family(GammaKind::Pochhammer(4), z)?);

    for x in [0.1, 1.0, 10.0] {
        println!("K_0.3({x}) = {:.16e}", bessel_k(0.3, x)?);
    }

    // S at w = 1 is 1/Γ(α+1); Z is reached by two independent routes
    println!("S_(0.3, 0.7i)(1) = {:.16e}", gegenbauer_s(0.3, Complex64::new(0.0, 0.7), 1.0)?);
    let (alpha, lambda, w) = (0.3, 1.4, 1.8);
    let direct = gegenbauer_z(alpha, lambda, w)?;
    let whipple = gegenbauer_z_whipple(alpha, lambda, w, 0.0, &GegenbauerConfig::default())?;
    println!("Z_({alpha},{lambda})({w}): direct {direct:.16e}, via Whipple {whipple:.16e}");
    Ok(())
}
