//! Gegenbauer functions and integrals approaching their Macdonald limits.
use genint::limits::{function_rate, integral_rate, LimitKind, LADDER, THETA};

fn main() -> genint::error::Result<()> {
    for kind in [LimitKind::S, LimitKind::Z] {
        let f = function_rate(kind, 0.3, THETA, &LADDER)?;
        let i = integral_rate(kind, 0.3, &LADDER)?;
        println!("{kind:?} pointwise ratios {:?}", f.ratios);
        println!("  slope {:.3} +/- {:.3}", f.slope, f.slope_half_width);
        println!("{kind:?} integral ratios {:?}", i.ratios);
        println!("  slope {:.3} +/- {:.3}", i.slope, i.slope_half_width);
    }
    Ok(())
}
