//! Special functions: gamma family, Macdonald functions, Gauss
//! hypergeometric series with connection formulas, Gegenbauer functions.

pub mod bessel;
pub mod gamma;
pub mod gegenbauer;
pub mod hyp2f1;

pub use bessel::{bessel_k, bessel_k_with_derivative};
pub use gamma::{digamma, eval_gamma_family, gamma, ln_gamma_complex, pochhammer, rgamma, GammaKind, EULER_GAMMA};
pub use gegenbauer::{
    gegenbauer_s, gegenbauer_s_derivative, gegenbauer_s_scaled, gegenbauer_z, gegenbauer_z_derivative,
    gegenbauer_z_route, gegenbauer_z_scaled, GegenbauerConfig, ZRoute,
};
