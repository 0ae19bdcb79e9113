use core::f64::consts::{PI, TAU};

use mrc_core::point::{direction_from_angles, Point};
use mrc_core::quadrature::SphereQuadrature;
use mrc_core::specfun::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn series_j(l: u32, x: f64) -> f64 {
    // Σ (-1)^m (x/2)^{2m+l} / (m! (m+l)!)
    let mut term = libm::pow(x / 2.0, l as f64);
    for i in 1..=l {
        term /= i as f64;
    }
    let mut sum = term;
    for m in 1..40 {
        term *= -(x * x / 4.0) / (m as f64 * (m + l) as f64);
        sum += term;
    }
    sum
}

#[test]
fn bessel_j_matches_power_series() {
    for &x in &[0.5, 1.0, 2.0, 5.0] {
        for l in 0..=10 {
            let got = cyl_bessel_j(l, x).unwrap();
            let want = series_j(l as u32, x);
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-3), "J_{l}({x}) = {got} vs {want}");
        }
    }
    assert!((cyl_bessel_j(0, 1e-8).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn wronskian() {
    for &x in &[0.5, 1.0, 5.0, 20.0] {
        for l in 0..=10 {
            let a = cyl_hankel1(l, x).unwrap();
            let b = cyl_hankel1(l + 1, x).unwrap();
            let w = b.re * a.im - a.re * b.im;
            let want = 2.0 / (PI * x);
            assert!(((w - want) / want).abs() < 1e-10, "l = {l}, x = {x}: {w} vs {want}");
        }
    }
}

#[test]
fn hankel_parity_and_amplitude() {
    let h3 = cyl_hankel1(3, 2.5).unwrap();
    assert!((cyl_hankel1(-3, 2.5).unwrap() + h3).norm() < 1e-15 * h3.norm());
    let h = cyl_hankel1(1, 50.0).unwrap();
    let amp = libm::sqrt(2.0 / (PI * 50.0));
    assert!((h.norm() - amp).abs() < 0.01 * amp);
    assert!(cyl_hankel1(0, 0.0).is_err());
    assert!(cyl_bessel_j(2, -1.0).is_err());
}

#[test]
fn outgoing_monopole_is_exact() {
    for &k in &[0.5, 1.0, 5.0] {
        for &r in &[0.1, 1.0, 10.0] {
            let h = sph_hankel1_out(0, k, r).unwrap();
            let v = h * r * Complex64::new(0.0, -k * r).exp();
            assert!((v - 1.0).norm() < 1e-13);
        }
    }
    let h = sph_hankel1_out(1, 1.0, 100.0).unwrap();
    let far = Complex64::new(0.0, 100.0).exp() / 100.0;
    assert!((h - far).norm() < 0.02 * far.norm());
    assert!(sph_hankel1_out(0, 1.0, 0.0).is_err());
}

#[test]
fn spherical_closed_forms() {
    let x: f64 = 0.5;
    let (s, c) = (x.sin(), x.cos());
    // h_2 = j_2 + i y_2
    let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
    let y2 = -(3.0 / (x * x) - 1.0) * c / x - 3.0 * s / (x * x);
    let want = Complex64::new(0.0, -1.0) * Complex64::new(j2, y2);
    assert!((sph_hankel1_out(2, 1.0, x).unwrap() - want).norm() < 1e-12 * want.norm());

    let x: f64 = 2.0;
    let (s, c) = (x.sin(), x.cos());
    let j3 = (15.0 / x.powi(3) - 6.0 / x) * s / x - (15.0 / (x * x) - 1.0) * c / x;
    assert!((sph_bessel_j(3, x) - j3).abs() < 1e-13);
    assert_eq!(sph_bessel_j(0, 0.0), 1.0);
    assert_eq!(sph_bessel_j(4, 0.0), 0.0);
    assert!(sph_bessel_j(0, PI).abs() < 1e-12);
}

#[test]
fn harmonic_special_values() {
    let any = direction_from_angles(0.3, 1.1);
    assert!((sph_harmonic(0, 0, &any).unwrap() - 1.0 / libm::sqrt(4.0 * PI)).norm() < 1e-15);
    let north = Point::xyz(0.0, 0.0, 1.0);
    assert!((sph_harmonic(1, 0, &north).unwrap() - libm::sqrt(3.0 / (4.0 * PI))).norm() < 1e-15);
    assert!(sph_harmonic(2, 3, &north).is_err());
    assert!(sph_harmonic(1, 0, &Point::xyz(0.0, 0.0, 2.0)).is_err());
}

#[test]
fn orthonormality_under_product_quadrature() {
    let q = SphereQuadrature::product(32, 64).unwrap();
    let lmax = 6;
    let n = (lmax + 1) * (lmax + 1);
    let tables: Vec<Vec<Complex64>> = q.directions.iter().map(|d| sph_harmonics_table(lmax, d)).collect();
    for a in 0..n {
        for b in 0..n {
            let g: Complex64 = tables.iter().zip(&q.weights).map(|(y, w)| y[a] * y[b].conj() * *w).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((g - want).norm() < 1e-10, "slots {a}, {b}: {g}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn addition_theorem(t1 in 0.0..TAU, p1 in 0.0..PI, t2 in 0.0..TAU, p2 in 0.0..PI) {
        let a = direction_from_angles(t1, p1);
        let b = direction_from_angles(t2, p2);
        let ya = sph_harmonics_table(6, &a);
        let yb = sph_harmonics_table(6, &b);
        for l in 0..=6usize {
            let s: Complex64 = (-(l as i32)..=l as i32)
                .map(|m| ya[harmonic_slot(l, m)] * yb[harmonic_slot(l, m)].conj())
                .sum();
            let want = (2 * l + 1) as f64 / (4.0 * PI) * legendre_p(l, a.dot(&b));
            prop_assert!((s - want).norm() < 1e-10);
        }
    }

    #[test]
    fn hankel_table_matches_single_evaluations(x in 0.05..45.0f64) {
        let t = cyl_hankel1_table(12, x).unwrap();
        for (l, h) in t.iter().enumerate() {
            let single = cyl_hankel1(l as i32, x).unwrap();
            prop_assert!((h - single).norm() <= 1e-14 * single.norm());
        }
    }
}
