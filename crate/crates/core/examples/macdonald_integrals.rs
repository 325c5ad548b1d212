//! Bilinear Macdonald integrals: closed forms against the finite-part engine.
use genint::closedforms::{mac_bilinear_closed, mac_square_closed};
use genint::genquad::gen_bilinear_macdonald;

fn main() -> genint::error::Result<()> {
    for alpha in [0.3, 1.3, 2.7, -1.5] {
        let (a, b) = (1.0, 2.0);
        let closed = mac_bilinear_closed(alpha, a, b)?;
        let numeric = gen_bilinear_macdonald(alpha, a, b)?;
        println!("alpha={alpha:5}: closed {closed:.16e} numeric {:.16e}", numeric.value);
    }
    for alpha in [0.3, 1.5, 1.0, 2.0] {
        println!("square alpha={alpha}: {:.16e}", mac_square_closed(alpha, 1.0)?);
    }
    Ok(())
}
