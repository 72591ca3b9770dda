use std::f64::consts::PI;

use casimir_gratings::engine::CasimirEngine;
use casimir_gratings::lifshitz::{fresnel, slab_reflection};
use casimir_gratings::materials::MaterialModel;
use casimir_gratings::scene::{GratingSpec, NumericsSpec, SceneSpec};
use proptest::prelude::*;

const NM: f64 = 1e-9;

fn engine(fill: f64, depth_nm: f64, shift: f64) -> CasimirEngine {
    let d = 150.0 * NM;
    let lo = GratingSpec::homogeneous(d, (1.0 - fill) * d, depth_nm * NM, MaterialModel::silicon());
    let up = GratingSpec::lamellar(d, 0.5 * d, 40.0 * NM, MaterialModel::gold(), MaterialModel::silicon())
        .with_shift(shift * d);
    let scene = SceneSpec::new(lo, up, (depth_nm + 140.0) * NM);
    CasimirEngine::new(&scene, &NumericsSpec::default().with_truncation(2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integrand_is_nonpositive_and_kz_even(
        fill in 0.05f64..0.95,
        depth in 10.0f64..120.0,
        shift in 0.0f64..0.99,
        log_xi in 5.0f64..8.0,
        kx_frac in -0.5f64..0.5,
        kz in 0.0f64..4e7,
    ) {
        let e = engine(fill, depth, shift);
        let xi = 10f64.powf(log_xi);
        let kx = kx_frac * 2.0 * PI / e.period();
        let v = e.integrand(xi, kx, kz).unwrap().value;
        prop_assert!(v <= 0.0);
        let w = e.integrand(xi, kx, -kz).unwrap().value;
        prop_assert!((v - w).abs() <= 1e-10 * v.abs() + 1e-15);
    }

    #[test]
    fn reflection_coefficients_are_bounded(
        log_xi in 4.0f64..9.0,
        k in 0.0f64..1e8,
        eps in 1.0f64..1e4,
        t in 0.0f64..1e-6,
    ) {
        let xi = 10f64.powf(log_xi);
        let r = fresnel(xi, k, eps).unwrap();
        prop_assert!((0.0..1.0).contains(&r.r_te.abs()) || eps == 1.0);
        prop_assert!(r.r_tm.abs() < 1.0);
        let s = slab_reflection(xi, k, eps, t, 1.5 * eps).unwrap();
        prop_assert!(s.r_te.abs() <= 1.0 && s.r_tm.abs() <= 1.0);
    }

    #[test]
    fn permittivities_decrease_along_the_imaginary_axis(a in 1e12f64..1e17, b in 1e12f64..1e17) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for m in [MaterialModel::silicon(), MaterialModel::gold()] {
            let (e1, e2) = (m.permittivity(lo).unwrap(), m.permittivity(hi).unwrap());
            prop_assert!(e1 >= e2 && e2 >= 1.0);
        }
    }
}
