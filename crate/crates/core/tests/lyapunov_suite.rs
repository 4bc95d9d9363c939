//! Inequality-layer tests: the nodal-domain proof structure tied to actual
//! solver output, the averaging step as a standalone property, and report
//! serialization.

mod common;

use common::{rng, sign_changing_weight};
use plyap::{
    bound_classical, bound_lyapi, bound_lyapu, bounds_harris_kong, eigenvalue_with,
    integrate_ivp_with, PiecewiseWeight, Sign, SolveOptions,
};
use proptest::prelude::*;

/// Interval ends of the nodal domains of the k-th eigenfunction: 0, the k−1
/// interior zeros, and L.
fn nodal_domains(
    a: &PiecewiseWeight,
    rho: &PiecewiseWeight,
    p: f64,
    lambda: f64,
    k: usize,
) -> Vec<(f64, f64)> {
    let t = integrate_ivp_with(a, rho, p, lambda, &SolveOptions::default()).unwrap();
    assert_eq!(t.zero_count(), k - 1, "eigenfunction must have k−1 interior zeros");
    let mut ends = vec![0.0];
    ends.extend_from_slice(&t.zeros);
    ends.push(rho.length());
    ends.windows(2).map(|w| (w[0], w[1])).collect()
}

#[test]
fn nodal_domain_decomposition_reproduces_averaged_bound() {
    // Proof structure of the averaged inequality: on each nodal domain the
    // prefix inequality a*_dom/p ≤ sup |∫ λρ| holds, and the mean of the
    // per-domain left sides dominates the averaged left side k^{p−1}a*/p.
    let mut r = rng(61);
    let c = 1.3;
    let a = PiecewiseWeight::constant(c, 1.0).unwrap();
    let opts = SolveOptions::default();
    for trial in 0..3 {
        let rho = sign_changing_weight(&mut r, 1.0);
        let p = if trial % 2 == 0 { 2.0 } else { 3.0 };
        let k = 1 + trial % 3;
        let pair = eigenvalue_with(&a, &rho, p, k, Sign::Plus, &opts).unwrap();
        let domains = nodal_domains(&a, &rho, p, pair.lambda, k);
        assert_eq!(domains.len(), k);

        let q = rho.primitive();
        let mut lhs_sum = 0.0;
        for &(lo, hi) in &domains {
            let len = hi - lo;
            let lhs_dom = c * len.powf(1.0 - p) / p;
            // sup over the domain of |λ ∫_lo^x ρ|, sampled densely.
            let q_lo = q.eval(lo).unwrap();
            let sup = (0..=4000)
                .map(|i| {
                    let x = lo + len * i as f64 / 4000.0;
                    (pair.lambda * (q.eval(x).unwrap() - q_lo)).abs()
                })
                .fold(0.0, f64::max);
            assert!(
                lhs_dom <= sup * (1.0 + 1e-6),
                "trial {trial}: domain [{lo}, {hi}] violates the prefix inequality: \
                 {lhs_dom} > {sup}"
            );
            lhs_sum += lhs_dom;
        }

        let report = bound_lyapu(&a, &rho, p, k, pair.lambda).unwrap();
        let averaged_lhs = (k as f64).powf(p - 1.0) / p * (c * 1.0f64.powf(1.0 - p));
        assert!((report.lhs - averaged_lhs).abs() <= 1e-12 * averaged_lhs);
        assert!(
            lhs_sum / k as f64 >= report.lhs * (1.0 - 1e-12),
            "averaging step failed: mean {} < {}",
            lhs_sum / k as f64,
            report.lhs
        );
        assert!(report.satisfied, "computed eigenvalue must satisfy the bound");
    }
}

#[test]
fn equal_domains_make_the_averaging_sharp() {
    // ρ ≡ 1 on [0, π], k = 3: zeros every π/3, so the per-domain mean equals
    // the averaged left side exactly.
    let a = PiecewiseWeight::constant(1.0, std::f64::consts::PI).unwrap();
    let rho = a.clone();
    let p = 2.0;
    let k = 3;
    let pair = eigenvalue_with(&a, &rho, p, k, Sign::Plus, &SolveOptions::default()).unwrap();
    let domains = nodal_domains(&a, &rho, p, pair.lambda, k);
    let mean: f64 = domains
        .iter()
        .map(|&(lo, hi)| (hi - lo).powf(1.0 - p) / p)
        .sum::<f64>()
        / k as f64;
    let report = bound_lyapu(&a, &rho, p, k, pair.lambda).unwrap();
    assert!(
        (mean - report.lhs).abs() <= 1e-6 * report.lhs,
        "mean {mean} vs averaged lhs {}",
        report.lhs
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn averaging_inequality_holds_for_any_partition(
        p in 1.1f64..6.0,
        raw in proptest::collection::vec(0.05f64..1.0, 1..8)
    ) {
        // Σ ℓ_i^{1−p} ≥ k^p L^{1−p} for any positive lengths — the Jensen step
        // that turns per-domain bounds into the averaged bound.
        let total: f64 = raw.iter().sum();
        let k = raw.len() as f64;
        let sum: f64 = raw.iter().map(|l| l.powf(1.0 - p)).sum();
        prop_assert!(sum >= k.powf(p) * total.powf(1.0 - p) * (1.0 - 1e-11));
    }
}

#[test]
fn reports_serialize_with_inputs_and_wire_names() {
    let a = PiecewiseWeight::constant(1.0, 1.0).unwrap();
    let rho = PiecewiseWeight::from_steps(&[(0.5, 1.0), (1.0, -1.0)]).unwrap();
    let report = bound_lyapu(&a, &rho, 2.0, 2, 120.9).unwrap();
    let json: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert_eq!(json["name"], "thm_lyapu");
    assert_eq!(json["inputs"]["p"], 2.0);
    assert_eq!(json["inputs"]["k"], 2);
    assert_eq!(json["inputs"]["lambda"], 120.9);
    assert!(json["lhs"].is_f64() && json["rhs"].is_f64());
    assert!(json["satisfied"].is_boolean());

    let classical = bound_classical(&rho, 2.0, 1, 22.37).unwrap();
    assert_eq!(serde_json::to_value(&classical).unwrap()["name"], "classical");

    let (left, right) = bounds_harris_kong(&rho.scale(40.0), 2.0).unwrap();
    assert_eq!(serde_json::to_value(&left).unwrap()["name"], "harris_kong_left");
    assert_eq!(serde_json::to_value(&right).unwrap()["name"], "harris_kong_right");
}

#[test]
fn tiny_weight_certifies_nonexistence() {
    // With w far too small, the necessary condition fails and the report says
    // a nontrivial solution cannot exist.
    let a = PiecewiseWeight::constant(1.0, 1.0).unwrap();
    let w = PiecewiseWeight::constant(1e-6, 1.0).unwrap();
    let report = bound_lyapi(&a, &w, 2.0).unwrap();
    assert!(!report.satisfied);
    assert!(report.certifies_nonexistence);

    let big = PiecewiseWeight::constant(100.0, 1.0).unwrap();
    let report = bound_lyapi(&a, &big, 2.0).unwrap();
    assert!(report.satisfied);
    assert!(!report.certifies_nonexistence);
}

#[test]
fn relative_slack_orders_looser_bounds_higher() {
    let a = PiecewiseWeight::constant(1.0, 1.0).unwrap();
    let rho = PiecewiseWeight::constant(1.0, 1.0).unwrap();
    let lam = 200.0;
    let tight = bound_lyapu(&a, &rho, 2.0, 1, lam).unwrap();
    let loose = bound_lyapu(&a, &rho, 2.0, 1, 10.0 * lam).unwrap();
    assert!(tight.relative_slack() < loose.relative_slack());
}
