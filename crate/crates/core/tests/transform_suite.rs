//! The change of variables y = ∫₀ˣ a^{−1/(p−1)} must preserve the spectrum:
//! eigenvalues of (a, ρ) and of the normalized problem (1, Q) coincide.

mod common;

use common::{positive_coefficient, rng, sign_changing_weight};
use plyap::{
    build_transform, eigenvalue_with, transformed_weight, Coefficient, PiecewiseWeight, Sign,
    SolveOptions,
};

#[test]
fn spectrum_is_invariant_under_normalization() {
    let mut r = rng(51);
    let opts = SolveOptions::default();
    for trial in 0..3 {
        let a = positive_coefficient(&mut r, 1.0);
        let rho = sign_changing_weight(&mut r, 1.0);
        let p = if trial % 2 == 0 { 2.0 } else { 3.0 };
        let cov = build_transform(&a, p, 800).unwrap();
        let q = transformed_weight(&cov, &a, &rho, p, 4000).unwrap();
        let one = PiecewiseWeight::constant(1.0, cov.ell()).unwrap();
        for k in 1..=2 {
            let direct = eigenvalue_with(&a, &rho, p, k, Sign::Plus, &opts).unwrap();
            let normalized = eigenvalue_with(&one, &q, p, k, Sign::Plus, &opts).unwrap();
            assert!(
                (direct.lambda - normalized.lambda).abs() <= 1e-5 * direct.lambda.abs(),
                "trial {trial}, p = {p}, k = {k}: {} vs {}",
                direct.lambda,
                normalized.lambda
            );
        }
    }
}

#[test]
fn transformed_weight_preserves_total_mass() {
    // ∫₀^ℓ Q dy = ∫₀^L ρ dx because Q dy = a^{1/(p−1)} ρ · a^{−1/(p−1)} dx.
    let mut r = rng(52);
    for _ in 0..5 {
        let a = positive_coefficient(&mut r, 1.0);
        let rho = sign_changing_weight(&mut r, 1.0);
        let p = 2.5;
        let cov = build_transform(&a, p, 600).unwrap();
        let q = transformed_weight(&cov, &a, &rho, p, 3000).unwrap();
        let (q_pos, q_neg) = q.split_integrals();
        let parts = rho.split_parts();
        let net_rho = parts.positive - parts.negative;
        assert!(
            ((q_pos - q_neg) - net_rho).abs() <= 2e-4 * parts.l1.max(1.0),
            "∫Q = {} vs ∫ρ = {net_rho}",
            q_pos - q_neg
        );
    }
}

#[test]
fn transform_grid_is_strictly_monotone_and_invertible() {
    let mut r = rng(53);
    let a = positive_coefficient(&mut r, 1.0);
    let cov = build_transform(&a, 3.0, 500).unwrap();
    assert!(cov.ell() > 0.0);
    let mut prev = -1.0;
    for i in 0..=300 {
        let x = i as f64 / 300.0;
        let y = cov.to_y(x);
        assert!(y > prev, "transform not strictly increasing at x = {x}");
        let back = cov.to_x(y);
        assert!((back - x).abs() <= 1e-8, "roundtrip x = {x} -> {back}");
        prev = y;
    }
    assert!((cov.to_y(0.0)).abs() <= 1e-15);
    assert!((cov.to_y(1.0) - cov.ell()).abs() <= 1e-12 * cov.ell());
}

#[test]
fn constant_coefficient_transform_is_linear() {
    // a ≡ c: y = c^{−1/(p−1)} x exactly, and Q = c^{1/(p−1)} ρ.
    let a = PiecewiseWeight::constant(8.0, 2.0).unwrap();
    let rho = PiecewiseWeight::sinusoid(1.0, 3.0, 0.4, 0.2, 2.0).unwrap();
    let p = 4.0;
    let scale = 8.0f64.powf(-1.0 / 3.0);
    let cov = build_transform(&a, p, 64).unwrap();
    assert!((cov.ell() - 2.0 * scale).abs() < 1e-12);
    for i in 0..=50 {
        let x = 2.0 * i as f64 / 50.0;
        assert!((cov.to_y(x) - scale * x).abs() < 1e-11);
    }
    let q = transformed_weight(&cov, &a, &rho, p, 2000).unwrap();
    for i in 1..50 {
        let y = cov.ell() * i as f64 / 50.0;
        let expect = 8.0f64.powf(1.0 / 3.0) * rho.value_clamped(y / scale);
        assert!((q.value(y) - expect).abs() < 1e-4, "at y = {y}");
    }
}
