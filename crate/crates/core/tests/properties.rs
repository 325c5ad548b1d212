use genint::cli::fmt_num;
use genint::closedforms::{geg_s_bilinear_closed, geg_z_bilinear_closed, mac_bilinear_closed, mac_square_closed};
use genint::genquad::{gen_integrate, GenIntegrand, SingularExpansion, SingularTerm, Tail};
use genint::pointgreen::{green_free, krein_green, Geometry, KreinKernelSpec, SpacePoint};
use genint::specfun::gegenbauer::{gegenbauer_s, gegenbauer_z, gegenbauer_z_route, GegenbauerConfig, ZRoute};
use genint::sturm::{wronskian, Eigenpair, SturmLiouvilleSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn point(g: Geometry, c: &[f64]) -> SpacePoint {
    SpacePoint::new(g, c.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn s_is_even_in_the_degree(alpha in -0.9f64..2.0, b in 0.0f64..3.0, imaginary: bool, w in -0.9f64..2.9) {
        let l = if imaginary { Complex64::new(0.0, b) } else { Complex64::new(b, 0.0) };
        let (p, m) = (gegenbauer_s(alpha, l, w).unwrap(), gegenbauer_s(alpha, -l, w).unwrap());
        prop_assert!((p - m).abs() <= 1e-9 * p.abs().max(1e-3), "{p} {m}");
    }

    #[test]
    fn z_order_reflection(alpha in -0.9f64..0.9, lambda in 0.2f64..3.0, w in 1.05f64..6.0) {
        let lhs = gegenbauer_z(alpha, lambda, w).unwrap();
        let rhs = gegenbauer_z(-alpha, lambda, w).unwrap() / ((w - 1.0) * (w + 1.0)).powf(alpha);
        prop_assert!(rel(lhs, rhs) < 1e-9);
    }

    #[test]
    fn z_routes_agree(alpha in -0.9f64..0.9, lambda in 0.2f64..3.0, w in 1.2f64..4.0) {
        let cfg = GegenbauerConfig::default();
        let a = gegenbauer_z_route(alpha, lambda, w, 0.0, ZRoute::Whipple, &cfg).unwrap();
        let b = gegenbauer_z_route(alpha, lambda, w, 0.0, ZRoute::Direct, &cfg).unwrap();
        prop_assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn wronskian_is_antisymmetric(alpha in -0.9f64..0.9, b1 in 0.3f64..3.0, b2 in 0.3f64..3.0, r in 0.2f64..3.0) {
        let spec = SturmLiouvilleSpec::bessel(alpha);
        let (f1, f2) = (Eigenpair::macdonald(alpha, b1), Eigenpair::macdonald(alpha, b2));
        let w12 = wronskian(&spec, &f1, &f2, r).unwrap();
        let w21 = wronskian(&spec, &f2, &f1, r).unwrap();
        prop_assert!((w12 + w21).abs() <= 1e-12 * w12.abs().max(1.0));
    }

    #[test]
    fn closed_forms_are_symmetric(alpha in -0.95f64..2.7, p in 0.3f64..3.0, q in 0.3f64..3.0) {
        prop_assume!((p - q).abs() > 1e-3 && (alpha.abs() - alpha.abs().round()).abs() > 1e-3);
        let m = (mac_bilinear_closed(alpha, p, q).unwrap(), mac_bilinear_closed(alpha, q, p).unwrap());
        prop_assert!(rel(m.0, m.1) < 1e-12);
        let s = (geg_s_bilinear_closed(alpha, p, q).unwrap(), geg_s_bilinear_closed(alpha, q, p).unwrap());
        prop_assert!(rel(s.0, s.1) < 1e-12);
        let z = (geg_z_bilinear_closed(alpha, p, q).unwrap(), geg_z_bilinear_closed(alpha, q, p).unwrap());
        prop_assert!(rel(z.0, z.1) < 1e-12);
    }

    #[test]
    fn square_integral_is_positive_below_one(alpha in -0.99f64..0.99, b in 0.1f64..5.0) {
        prop_assert!(mac_square_closed(alpha, b).unwrap() > 0.0);
    }

    #[test]
    fn kernel_is_symmetric(d in 1usize..4, beta in 0.3f64..2.5, gamma in -1.0f64..1.0,
                           x in prop::array::uniform3(-2.0f64..2.0), y in prop::array::uniform3(-2.0f64..2.0)) {
        let g = Geometry::euclidean(d);
        let spec = KreinKernelSpec::new(g, beta, gamma).unwrap();
        prop_assume!((gamma + spec.sigma).abs() > 1e-3);
        let (x, y) = (point(g, &x[..d]), point(g, &y[..d]));
        match (krein_green(&spec, &x, &y), krein_green(&spec, &y, &x)) {
            (Ok(a), Ok(b)) => prop_assert!(rel(a, b) < 1e-14),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn infinite_coupling_is_free(d in 1usize..4, beta in 0.3f64..2.5,
                                 x in prop::array::uniform3(-2.0f64..2.0), y in prop::array::uniform3(-2.0f64..2.0)) {
        let g = Geometry::euclidean(d);
        let (x, y) = (point(g, &x[..d]), point(g, &y[..d]));
        prop_assume!(genint::pointgreen::distance(&x, &y).unwrap() > 1e-3);
        let spec = KreinKernelSpec::new(g, beta, f64::INFINITY).unwrap();
        prop_assert_eq!(krein_green(&spec, &x, &y).unwrap(), green_free(g, beta, &x, &y).unwrap());
    }

    #[test]
    fn split_point_is_irrelevant_without_anomaly(c in 0.2f64..4.0) {
        let f = GenIntegrand::new(
            |r: f64| r.powf(-1.5) * (-r).exp(),
            SingularExpansion::new(vec![SingularTerm::new(-1.5, 1.0)], 1.0).unwrap(),
            f64::INFINITY,
            Tail::Exponential { rate: 1.0 },
        );
        let v = gen_integrate(&f, c).unwrap().value;
        prop_assert!(rel(v, -2.0 * std::f64::consts::PI.sqrt()) < 1e-10);
    }

    #[test]
    fn printed_numbers_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
    }
}
