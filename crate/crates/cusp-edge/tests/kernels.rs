use std::f64::consts::PI;

use cusp_edge::kernels::{
    bessel_i, bessel_i_scaled, circle_dirac_heat_trace, euclid_heat, nu_from_ab, nu_squared, BesselOrder,
    KernelConvention,
};
use proptest::prelude::*;

#[test]
fn half_order_closed_form() {
    // I_{1/2}(x) = √(2/(πx)) sinh x
    for x in [0.01, 0.5, 2.0, 10.0, 40.0] {
        let want = (2.0 / (PI * x)).sqrt() * f64::sinh(x);
        assert!((bessel_i(0.5, x).unwrap() - want).abs() <= 1e-12 * want, "x = {x}");
    }
}

#[test]
fn scaled_is_consistent() {
    for (nu, x) in [(0.0, 3.0), (1.5, 0.2), (2.5, 25.0)] {
        let a = bessel_i_scaled(nu, x).unwrap() * f64::exp(x);
        let b = bessel_i(nu, x).unwrap();
        assert!((a - b).abs() <= 1e-12 * b);
    }
}

#[test]
fn circle_trace_poisson_dual() {
    // Σ e^{−t(n+a)²} = √(π/t) Σ_m e^{−π²m²/t} cos(2πma)
    for (t, a) in [(0.05, 0.25), (0.7, 0.1), (3.0, 0.5)] {
        let dual: f64 = (PI / t).sqrt()
            * (-40i32..=40).map(|m| (-PI * PI * (m * m) as f64 / t).exp() * (2.0 * PI * m as f64 * a).cos()).sum::<f64>();
        let direct = circle_dirac_heat_trace(t, a).unwrap();
        assert!((direct - dual).abs() <= 1e-12 * dual, "t = {t}, a = {a}");
    }
}

#[test]
fn euclid_kernel_has_unit_mass() {
    let (h, n) = (1e-3, 20000);
    let mass: f64 = (-n..=n).map(|i| euclid_heat(0.3, 0.0, i as f64 * h).unwrap()).sum::<f64>() * h;
    assert!((mass - 1.0).abs() < 1e-10);
}

#[test]
fn order_from_coefficients() {
    assert_eq!(nu_squared(-3.0, 0.0), 1.0);
    let p = nu_from_ab(-4.0, 4.0, KernelConvention::Consistent).unwrap();
    assert!(matches!(p.nu, BesselOrder::Imaginary(v) if (v - 1.75f64.sqrt()).abs() < 1e-15));
    assert!(!p.is_certified());
}

proptest! {
    #[test]
    fn bessel_positive_and_increasing(nu in 0.0f64..6.0, x in 1e-3f64..50.0, dx in 1e-3f64..5.0) {
        let a = bessel_i(nu, x).unwrap();
        let b = bessel_i(nu, x + dx).unwrap();
        prop_assert!(a > 0.0 && b > a, "I_{nu}({x}) = {a}, I_{nu}({}) = {b}", x + dx);
    }

    #[test]
    fn bessel_recurrence(nu in 1.0f64..5.0, x in 0.1f64..30.0) {
        // I_{ν−1} − I_{ν+1} = (2ν/x) I_ν
        let lhs = bessel_i(nu - 1.0, x).unwrap() - bessel_i(nu + 1.0, x).unwrap();
        let rhs = 2.0 * nu / x * bessel_i(nu, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs());
    }

    #[test]
    fn euclid_symmetric(t in 0.01f64..5.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        prop_assert_eq!(euclid_heat(t, x, y).unwrap(), euclid_heat(t, y, x).unwrap());
    }
}
