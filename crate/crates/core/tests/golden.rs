//! Values frozen from an independent 40-digit evaluation (hypergeometric
//! series and adaptive quadrature in arbitrary precision).

use genint::closedforms::{geg_s_bilinear_closed, geg_z_bilinear_closed, mac_bilinear_closed, mac_square_closed};
use genint::genquad::{gen_bilinear_gegenbauer, gen_bilinear_macdonald, GegenbauerKind};
use genint::specfun::bessel::bessel_k;
use genint::specfun::gamma::{eval_gamma_family, GammaKind};
use genint::specfun::gegenbauer::{gegenbauer_s, gegenbauer_z};
use num_complex::Complex64;

fn close(got: f64, want: f64, tol: f64) {
    let gap = (got - want).abs() / want.abs();
    assert!(gap < tol, "got {got:e}, want {want:e}, gap {gap:e}");
}

#[test]
fn macdonald_function() {
    close(bessel_k(0.3, 1.0).unwrap(), 0.435_076_024_208_802_02, 1e-14);
    close(bessel_k(1.7, 0.5).unwrap(), 4.444_156_320_186_134, 1e-14);
    close(bessel_k(0.0, 20.0).unwrap(), 5.741_237_815_336_524_3e-10, 1e-13);
}

#[test]
fn gamma_family() {
    let z = Complex64::new(0.5, 2.0);
    let g = eval_gamma_family(GammaKind::Gamma, z).unwrap();
    close(g.re, 0.089_855_176_706_431_636, 1e-13);
    close(g.im, -0.060_493_760_292_887_568, 1e-13);
    let p = eval_gamma_family(GammaKind::Digamma, z).unwrap();
    close(p.re, 0.682_186_699_349_424_27, 1e-14);
    close(p.im, 1.570_785_371_023_976_3, 1e-14);
    assert_eq!(eval_gamma_family(GammaKind::Pochhammer(4), z).unwrap(), Complex64::new(-63.4375, -20.0));
}

#[test]
fn gegenbauer_functions() {
    let l = Complex64::new(0.0, 0.7);
    close(gegenbauer_s(0.3, l, 0.4).unwrap(), 1.499_672_785_455_775_9, 1e-13);
    close(gegenbauer_s(0.3, l, -0.8).unwrap(), 5.394_996_922_188_910_5, 1e-12);
    close(gegenbauer_z(0.3, 1.4, 1.8).unwrap(), 0.287_742_789_643_116_11, 1e-13);
    close(gegenbauer_z(-0.6, 0.5, 1.1).unwrap(), 1.231_395_490_561_833_1, 1e-12);
}

#[test]
fn bilinear_integrals() {
    let mac = 0.542_216_909_479_465_50;
    close(mac_bilinear_closed(0.3, 1.0, 2.0).unwrap(), mac, 1e-13);
    close(gen_bilinear_macdonald(0.3, 1.0, 2.0).unwrap().value, mac, 1e-10);
    let sq = 1.164_966_623_235_279_9;
    close(mac_square_closed(0.3, 1.0).unwrap(), sq, 1e-13);
    close(gen_bilinear_macdonald(0.3, 1.0, 1.0).unwrap().value, sq, 1e-10);

    // the oracle integrates in w; the measure here is d(2w)
    let s = 2.0 * 24.141_760_613_188_289;
    close(geg_s_bilinear_closed(0.3, 0.5, 1.0).unwrap(), s, 1e-12);
    let i = |b: f64| Complex64::new(0.0, b);
    close(gen_bilinear_gegenbauer(GegenbauerKind::S, 0.3, i(0.5), i(1.0)).unwrap().value, s, 1e-10);
    let z = 2.0 * 1.631_473_202_673_931_8;
    close(geg_z_bilinear_closed(0.3, 1.2, 0.7).unwrap(), z, 1e-12);
    let r = |l: f64| Complex64::new(l, 0.0);
    close(gen_bilinear_gegenbauer(GegenbauerKind::Z, 0.3, r(1.2), r(0.7)).unwrap().value, z, 1e-10);
}
