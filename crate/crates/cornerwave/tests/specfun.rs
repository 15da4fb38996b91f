mod common;

use common::{bessel_j, bessel_y, hankel01_dd, integrate};
use cornerwave::specfun::{bessel_j_half, bessel_jn_seq, bessel_yn_seq, erf, erfc, gaussian_tail, hankel01, hankel1, log_gamma};
use cornerwave::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// Reference values from a 40-digit evaluation, frozen.
const HANKEL_TABLE: [([f64; 2], [f64; 2], [f64; 2]); 11] = [
    ([20.0, 5.0], [1.1491882609597793e-3, 2.7726830203516828e-4], [3.0583801921210669e-4, -1.1497519508627023e-3]),
    ([50.0, 0.5], [3.3552446728387188e-2, -5.9644930197659521e-2], [-5.9318447877977894e-2, -3.4153747279718495e-2]),
    ([200.0, 1e-05], [-1.5437286913077581e-2, -5.4265232207153192e-2], [-5.4303994762253437e-2, 1.5301672921969077e-2]),
    ([17.0, 0.0], [-1.6985425215118355e-1, -9.2637198442323693e-2], [-9.766849275778065e-2, 1.6720503607723369e-1]),
    ([30.0, 20.0], [-2.1869374430968353e-10, -1.6399468182109617e-10], [-1.6776593577129711e-10, 2.1850575031847066e-10]),
    ([1000.0, 2.0], [3.3551455484238897e-3, 6.3487447687424669e-4], [6.3655275507095305e-4, -3.3548318873691045e-3]),
    ([16.5, 0.3], [-1.4544327705651942e-1, 1.454779276131671e-3], [-2.9432815630916009e-3, 1.4563351143387501e-1]),
    ([5.0, 3.0], [-1.1491471543250507e-2, -1.150470257779589e-2], [-1.2835219682808293e-2, 1.1202202136515391e-2]),
    ([8.0, 12.0], [1.1621445227895861e-6, 5.406968170645364e-7], [5.7791419935903763e-7, -1.1852745333445893e-6]),
    ([3.0, 0.6], [-1.2038972796434115e-1, 2.1590684152919708e-1], [2.064206441655362e-1, 1.5843522416484112e-1]),
    ([12.0, 0.2], [3.7500875366279711e-2, -1.8468253155410475e-1], [-1.8341022016086425e-1, -4.5233650853215894e-2]),
];

#[test]
fn hankel_matches_frozen_high_precision_values() {
    for (z, h0, h1) in HANKEL_TABLE {
        let (a, b) = hankel01(c(z[0], z[1]));
        assert!(rel(a, c(h0[0], h0[1])) < 1e-13, "H0({z:?}) = {a}");
        assert!(rel(b, c(h1[0], h1[1])) < 1e-13, "H1({z:?}) = {b}");
    }
}

#[test]
fn hankel_matches_double_double_series_up_to_radius_16() {
    let mut worst: f64 = 0.0;
    for &r in &[0.01, 0.1, 0.5, 1.0, 2.0, 3.9, 4.1, 6.0, 8.0, 10.0, 12.0, 14.0, 15.9] {
        for &arg in &[0.0, 0.05, 0.2, 0.5, 0.9, 1.3, 1.5] {
            let z = Complex64::from_polar(r, arg);
            let ((h0r, h0i), (h1r, h1i)) = hankel01_dd(z.re, z.im);
            let (h0, h1) = hankel01(z);
            let e0 = rel(h0, c(h0r, h0i));
            let e1 = rel(h1, c(h1r, h1i));
            assert!(e0 < 1e-12 && e1 < 1e-12, "z = {z}: errors {e0:e} {e1:e}");
            worst = worst.max(e0).max(e1);
        }
    }
    assert!(worst < 1e-12);
}

#[test]
fn hankel_on_real_axis_matches_integral_representations() {
    for &x in &[0.5, 3.0, 7.0, 15.0, 16.5, 25.0, 80.0, 300.0] {
        let (h0, h1) = hankel01(c(x, 0.0));
        let e0 = rel(h0, c(bessel_j(0, x), bessel_y(0, x)));
        let e1 = rel(h1, c(bessel_j(1, x), bessel_y(1, x)));
        assert!(e0 < 1e-12 && e1 < 1e-12, "x = {x}: {e0:e} {e1:e}");
    }
}

#[test]
fn wronskian_on_real_axis() {
    for &x in &[0.5, 5.0, 50.0] {
        let (h0, h1) = hankel01(c(x, 0.0));
        let w = h0.re * h1.im - h1.re * h0.im;
        let exact = -2.0 / (PI * x);
        assert!((w - exact).abs() < 1e-12 * exact.abs(), "x = {x}: {w} vs {exact}");
    }
}

#[test]
fn derivative_of_h0_is_minus_h1() {
    let step = 1e-5;
    for z in [c(0.7, 0.0), c(3.0, 0.4), c(9.0, 1e-5), c(14.0, 3.0), c(40.0, 0.1)] {
        let d = (hankel01(z + step).0 - hankel01(z - step).0) / (2.0 * step);
        let h1 = hankel01(z).1;
        assert!(rel(d, -h1) < 1e-8, "z = {z}: {d} vs {}", -h1);
    }
}

#[test]
fn hankel_is_continuous_across_method_boundaries() {
    for (r, arg) in [(4.0, 0.1), (16.0, 0.01), (16.0, 0.6), (2.0, 0.3)] {
        let z = Complex64::from_polar(r, arg);
        let lo = hankel01(z * (1.0 - 1e-15));
        let hi = hankel01(z * (1.0 + 1e-15));
        assert!(rel(lo.0, hi.0) < 1e-13 && rel(lo.1, hi.1) < 1e-13, "discontinuity at {z}");
    }
    // Crossing Im z = 0.5 at |z| > 2.
    let below = hankel01(c(6.0, 0.5 - 1e-15));
    let above = hankel01(c(6.0, 0.5 + 1e-15));
    assert!(rel(below.0, above.0) < 1e-13 && rel(below.1, above.1) < 1e-13);
}

#[test]
fn hankel1_examples_and_errors() {
    let h = hankel1(0, c(1.0, 0.0)).unwrap();
    assert!((h.re - 0.7651976865579666).abs() < 1e-15);
    assert!((h.im - 0.08825696421567696).abs() < 1e-15);
    assert!(matches!(hankel1(0, c(0.0, 0.0)), Err(Error::Singularity(_))));
    assert!(matches!(hankel1(2, c(1.0, 0.0)), Err(Error::InvalidArgument(_))));
    assert!(hankel1(1, c(f64::NAN, 0.0)).is_err());
}

#[test]
fn integer_order_sequences_match_integral_representations() {
    for &x in &[0.3, 2.0, 10.0, 35.0] {
        let js = bessel_jn_seq(40, x).unwrap();
        let ys = bessel_yn_seq(12, x).unwrap();
        for (n, j) in js.iter().enumerate() {
            let exact = bessel_j(n as i32, x);
            assert!((j - exact).abs() < 1e-14 + 1e-12 * exact.abs(), "J_{n}({x}) = {j} vs {exact}");
        }
        for (n, y) in ys.iter().enumerate() {
            let exact = bessel_y(n as i32, x);
            assert!((y - exact).abs() < 1e-12 * exact.abs().max(1e-2), "Y_{n}({x}) = {y} vs {exact}");
        }
    }
    assert!(bessel_jn_seq(3, 0.0).is_err());
    assert!(bessel_yn_seq(3, -1.0).is_err());
}

#[test]
fn half_integer_order_closed_forms() {
    for &x in &[0.2, 1.0, 2.5, 7.0, 31.0] {
        let s = (2.0 / (PI * x)).sqrt();
        let (sn, cs) = x.sin_cos();
        let j0 = bessel_j_half(0, x).unwrap();
        let j1 = bessel_j_half(1, x).unwrap();
        let j2 = bessel_j_half(2, x).unwrap();
        assert!((j0 - s * sn).abs() < 1e-15);
        assert!((j1 - s * (sn / x - cs)).abs() < 1e-14);
        let e2 = s * ((3.0 / (x * x) - 1.0) * sn - 3.0 * cs / x);
        assert!((j2 - e2).abs() < 1e-13 * (1.0 + e2.abs()), "x = {x}: {j2} vs {e2}");
    }
    assert!(bessel_j_half(1, 0.0).is_err());
}

// J_nu(x) = (1/pi) int_0^pi cos(nu t - x sin t) dt - (sin nu pi / pi) int_0^inf e^{-x sinh t - nu t} dt.
fn j_real_order(nu: f64, x: f64) -> f64 {
    let a = integrate(|t| (nu * t - x * t.sin()).cos(), 0.0, PI, 64, 24) / PI;
    let b = integrate(|t| (-x * t.sinh() - nu * t).exp(), 0.0, 40.0, 800, 24);
    a - (nu * PI).sin() / PI * b
}

#[test]
fn half_integer_order_matches_integral_representation() {
    for &x in &[0.5, 1.5, 3.0, 10.0, 40.0] {
        for n in 0..=20usize {
            let j = bessel_j_half(n, x).unwrap();
            let exact = j_real_order(n as f64 + 0.5, x);
            assert!((j - exact).abs() < 1e-14 + 1e-11 * exact.abs(), "J_{n}+1/2({x}) = {j} vs {exact}");
        }
    }
}

#[test]
fn error_function_values() {
    let table = [
        (0.1, 1.124629160182849e-1, 8.875370839817151e-1),
        (0.5, 5.2049987781304654e-1, 4.7950012218695346e-1),
        (1.0, 8.4270079294971487e-1, 1.5729920705028513e-1),
        (2.0, 9.9532226501895273e-1, 4.6777349810472658e-3),
        (3.0, 9.9997790950300141e-1, 2.2090496998585441e-5),
        (6.0, 1.0, 2.1519736712498913e-17),
    ];
    for (x, e, ec) in table {
        assert!((erf(x) - e).abs() < 1e-15, "erf({x})");
        assert!((erfc(x) - ec).abs() < 1e-14 * ec, "erfc({x})");
        assert!((erf(-x) + e).abs() < 1e-15);
    }
    assert_eq!(erf(0.0), 0.0);
}

#[test]
fn gaussian_tail_values() {
    let table = [
        (0.0, 7.9788456080286536e-1),
        (0.5, 3.9559311480261206e-1),
        (1.0, 1.666309411753726e-1),
        (2.5, 4.0082743582563989e-3),
        (3.0, 7.6430863409544719e-4),
        (4.0, 1.4290516864811334e-5),
        (6.0, 3.1271395919419329e-10),
        (10.0, 1.4949120509178656e-24),
        (30.0, 3.2639134681828024e-199),
    ];
    for (y, t) in table {
        assert!((gaussian_tail(y) - t).abs() < 1e-13 * t, "tail({y}) = {} vs {t}", gaussian_tail(y));
    }
}

#[test]
fn log_gamma_values() {
    assert!((log_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
    assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
    let mut fact: f64 = 1.0;
    for n in 1..30 {
        assert!((log_gamma(n as f64 + 1.0).unwrap() - fact.ln()).abs() < 1e-13 * fact.ln().max(1.0));
        fact *= (n + 1) as f64;
    }
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
}

proptest! {
    #[test]
    fn wronskian_holds_for_any_positive_x(x in 0.01f64..500.0) {
        let (h0, h1) = hankel01(c(x, 0.0));
        let w = h0.re * h1.im - h1.re * h0.im;
        let exact = -2.0 / (PI * x);
        prop_assert!((w - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn log_gamma_recurrence(x in 0.05f64..200.0) {
        let d = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
        prop_assert!((d - x.ln()).abs() < 1e-13 * (1.0 + log_gamma(x + 1.0).unwrap().abs()));
    }

    #[test]
    fn erf_and_erfc_are_complementary(x in -6.0f64..6.0) {
        prop_assert!((erf(x) + erfc(x) - 1.0).abs() < 2e-15);
    }

    #[test]
    fn real_part_matches_miller_recurrence(x in 0.05f64..200.0) {
        let (h0, h1) = hankel01(c(x, 0.0));
        let js = bessel_jn_seq(1, x).unwrap();
        prop_assert!((h0.re - js[0]).abs() < 1e-13);
        prop_assert!((h1.re - js[1]).abs() < 1e-13);
    }
}
