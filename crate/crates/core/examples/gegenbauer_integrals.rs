//! Bilinear integrals of the interior (S) and exterior (Z) Gegenbauer families.
use genint::closedforms::{geg_s_bilinear_closed, geg_z_bilinear_closed};
use genint::genquad::{gen_bilinear_gegenbauer, GegenbauerKind};
use num_complex::Complex64;

fn main() -> genint::error::Result<()> {
    let i = |b: f64| Complex64::new(0.0, b);
    let re = |l: f64| Complex64::new(l, 0.0);
    for alpha in [0.3, -0.3, 1.3] {
        let closed = geg_s_bilinear_closed(alpha, 0.5, 1.0)?;
        let numeric = gen_bilinear_gegenbauer(GegenbauerKind::S, alpha, i(0.5), i(1.0))?.value;
        println!("S alpha={alpha:4}: closed {closed:.16e} numeric {numeric:.16e}");
    }
    for alpha in [0.5, 0.3, 1.3] {
        let closed = geg_z_bilinear_closed(alpha, 1.2, 0.7)?;
        let numeric = gen_bilinear_gegenbauer(GegenbauerKind::Z, alpha, re(1.2), re(0.7))?.value;
        println!("Z alpha={alpha:4}: closed {closed:.16e} numeric {numeric:.16e}");
    }
    Ok(())
}
