mod common;

use common::*;
use germ_forge::classify::{a_invariant, iterative_log, model_flow};
use germ_forge::germ::conjugate;
use germ_forge::reversal::{example_family, FamilyKind};
use germ_forge::sample;
use germ_forge::scalar::{CycloScalar, Rational};
use germ_forge::series::TruncatedSeries;
use num_traits::Zero;

#[test]
fn inverse_of_z_plus_z2_is_signed_catalan() {
    let f = germ("z+z^2", 20);
    let inv = to_poly(&f.inverse());
    for k in 1..=20 {
        assert_eq!(inv[k], signed_catalan(k), "degree {k}");
    }
    assert_eq!(inv[5], q(14, 1));
}

#[test]
fn inverses_match_lagrange_inversion() {
    let mut rng = sample::rng(11);
    for _ in 0..20 {
        let f = sample::random_conjugator(&mut rng, 14);
        let engine = to_poly(&f.inverse());
        assert_eq!(engine, lagrange_inverse(&to_poly(&f), 14), "f = {}", f.series());
    }
}

#[test]
fn composition_matches_power_sums() {
    let mut rng = sample::rng(12);
    for _ in 0..20 {
        let f = sample::random_conjugator(&mut rng, 12);
        let g = sample::random_conjugator(&mut rng, 12);
        assert_eq!(to_poly(&f.compose(&g)), compose(&to_poly(&f), &to_poly(&g), 12));
    }
}

#[test]
fn a_invariant_matches_laurent_residue() {
    let mut rng = sample::rng(13);
    for _ in 0..40 {
        let f = sample::random_tangent_germ(&mut rng, 16, 4);
        let engine = a_invariant(&f).unwrap();
        assert_eq!(engine.as_rational().unwrap(), &residue_a(&to_poly(&f)), "f = {}", f.series());
    }
    for (text, a) in [("z+z^2", 0), ("z+z^3", 0), ("z+z^2+z^3", 1), ("z/(1+z)", 1)] {
        assert_eq!(residue_a(&to_poly(&germ(text, 12))), q(a, 1), "{text}");
    }
}

/// Germs already in the form `z + z^{p+1} + a z^{2p+1}` read off `a` directly;
/// conjugating them must not change what the engine reports.
#[test]
fn a_invariant_matches_normal_form() {
    let mut rng = sample::rng(14);
    for p in 1..=4usize {
        for a in [q(0, 1), q(1, 2), q(-3, 4), q(5, 1), q((p as i64) + 1, 2)] {
            let n = 4 * p + 3;
            let normal = TruncatedSeries::new(
                [(1, CycloScalar::one()), (p + 1, CycloScalar::one()), (2 * p + 1, CycloScalar::from(a.clone()))],
                n,
            );
            let normal = germ_forge::germ::Germ::new(normal).unwrap();
            let h = sample::random_tangent_conjugator(&mut rng, n);
            let f = conjugate(&h, &normal);
            assert_eq!(a_invariant(&f).unwrap(), CycloScalar::from(a.clone()), "p = {p}");
        }
    }
}

#[test]
fn model_flow_matches_binomial_series() {
    for p in 1..=5usize {
        let n = 4 * p + 3;
        let f = to_poly(&model_flow(p, &CycloScalar::one(), n).unwrap());
        let alpha = q(-1, p as i64);
        for d in 0..=n {
            let expected = if d >= 1 && (d - 1) % p == 0 { binom(&alpha, (d - 1) / p) } else { Rational::zero() };
            assert_eq!(f[d], expected, "p = {p}, degree {d}");
        }
    }
}

#[test]
fn iterative_logs_satisfy_the_julia_equation() {
    let n = 10;
    let v = iterative_log(&germ("z+z^2", n)).unwrap();
    let expected = julia_log(&poly(&[(1, 1), (2, 1)], 2 * n), n);
    let coeffs: Vec<Rational> = (0..=n).map(|k| v.coeff(k).as_rational().unwrap().clone()).collect();
    assert_eq!(coeffs, expected);
    assert_eq!(&coeffs[2..5], &[q(1, 1), q(-1, 1), q(3, 2)]);

    let mut rng = sample::rng(15);
    for _ in 0..10 {
        let f = sample::random_tangent_germ(&mut rng, 24, 3);
        let v = iterative_log(&f.truncate(12)).unwrap();
        let coeffs: Vec<Rational> = (0..=12).map(|k| v.coeff(k).as_rational().unwrap().clone()).collect();
        assert_eq!(coeffs, julia_log(&to_poly(&f), 12), "f = {}", f.series());
    }
}

/// With `mu = i z` and `phi = z + z^3`, `f = mu^-1 phi^-1 mu phi` is the
/// inverse of `z - z^3` composed with `z + z^3`, which has rational coefficients.
#[test]
fn twisted_family_matches_rational_expansion() {
    let n = 15;
    let (f, _) = example_family(&FamilyKind::Twisted { s: 2, trunc: n }).unwrap();
    let outer = lagrange_inverse(&poly(&[(1, 1), (3, -1)], n), n);
    let expected = compose(&outer, &poly(&[(1, 1), (3, 1)], n), n);
    assert_eq!(to_poly(&f), expected);
    assert_eq!(expected[3], q(2, 1));
}

#[test]
fn cyclotomic_products_match_complex_arithmetic() {
    let samples = [(8u32, 1i64), (8, 3), (12, 5), (5, 2), (7, 3), (9, 4)];
    for &(n1, k1) in &samples {
        for &(n2, k2) in &samples {
            let a = &CycloScalar::primitive_root(n1, k1).unwrap() + &CycloScalar::ratio(1, 3);
            let b = &CycloScalar::primitive_root(n2, k2).unwrap() - &CycloScalar::from_integer(2);
            let (ar, ai) = a.to_complex();
            let (br, bi) = b.to_complex();
            let (pr, pi) = (&a * &b).to_complex();
            assert!((pr - (ar * br - ai * bi)).abs() < 1e-12 && (pi - (ar * bi + ai * br)).abs() < 1e-12);
            let (qr, qi) = (&a / &b).to_complex();
            let d = br * br + bi * bi;
            assert!((qr - (ar * br + ai * bi) / d).abs() < 1e-12 && (qi - (ai * br - ar * bi) / d).abs() < 1e-12);
        }
    }
}
