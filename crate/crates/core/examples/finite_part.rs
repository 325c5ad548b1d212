//! Generalized integrals of integrands that are not integrable at 0.
use genint::genquad::{gen_integrate, scaling_check, split_shift, GenIntegrand, SingularExpansion, SingularTerm, Tail};

fn main() -> genint::error::Result<()> {
    // e^{-r}/r: the anomaly makes the result depend on the split point
    let f = GenIntegrand::new(
        |r: f64| (-r).exp() / r,
        SingularExpansion::new(vec![SingularTerm::new(-1.0, 1.0)], f64::INFINITY)?,
        f64::INFINITY,
        Tail::Exponential { rate: 1.0 },
    );
    let r = gen_integrate(&f, 1.0)?;
    println!("gen int e^-r/r = {:.16e} (anomaly {})", r.value, r.anomaly);
    println!("shift when the split moves to 0.5: {:.16e}", split_shift(&f, 0.5)?);
    let (lhs, rhs) = scaling_check(&f, 3.0)?;
    println!("scaling by 3: {lhs:.16e} vs {rhs:.16e}");

    // r^{-3/2} e^{-r} continues Γ(−1/2)
    let g = GenIntegrand::new(
        |r: f64| r.powf(-1.5) * (-r).exp(),
        SingularExpansion::new(vec![SingularTerm::new(-1.5, 1.0)], 1.0)?,
        f64::INFINITY,
        Tail::Exponential { rate: 1.0 },
    );
    println!("gen int r^-3/2 e^-r = {:.16e}", gen_integrate(&g, 1.0)?.value);
    Ok(())
}
