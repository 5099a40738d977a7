//! Random-map model checked against independent computations.

use std::f64::consts::PI;

use arithdyn::ffield::{first_primes, primes_below};
use arithdyn::randmodel::{
    cycle_pmf_asymptotic, d2_constant, d2_constant_closed_form, empty_intersection_prob, erfc, euler_product,
    normalized_cdf, survival_alpha, tau_tail_bound, IntersectionMode, ModelDistribution,
};

/// Composite Simpson rule.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn erfc_against_simpson() {
    for x in [0.0, 0.3, 1.0, 1.7, 2.5, 3.2, 4.5] {
        let tail = 2.0 / PI.sqrt() * simpson(|t| (-t * t).exp(), x, x + 12.0, 20_000);
        assert!((erfc(x) - tail).abs() < 1e-13, "x = {x}: {} vs {tail}", erfc(x));
        assert!((erfc(-x) - (2.0 - tail)).abs() < 1e-13);
    }
}

#[test]
fn prime_counts_against_trial_division() {
    let trial = |n: u64| (2..n).filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)).count();
    for (bound, count) in [(1000u64, 168usize), (10_000, 1229), (100_000, 9592)] {
        assert_eq!(primes_below(bound).len(), count);
        if bound <= 10_000 {
            assert_eq!(trial(bound), count);
        }
    }
    assert_eq!(first_primes(100).last().unwrap().get(), 541);
    assert_eq!(first_primes(500).last().unwrap().get(), 3571);
}

#[test]
fn tail_bound_dominates_survival() {
    for n in [10u64, 100, 1000] {
        for k in 0..=n {
            assert!(tau_tail_bound(k, n) >= survival_alpha(k + 1, n) - 1e-15, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn alpha_matches_direct_product() {
    for n in [7u64, 50, 400] {
        let mut prod = 1.0f64;
        for k in 1..=n + 1 {
            assert!((survival_alpha(k, n) - prod).abs() < 1e-12 * prod.max(1e-300) + 1e-300);
            prod *= 1.0 - k as f64 / n as f64;
        }
    }
}

#[test]
fn normalized_cdf_against_exact_law() {
    let n = 1_000_000u64;
    let d = ModelDistribution::new(n).unwrap();
    let scale = (2.0 * n as f64).sqrt();
    for t in [0.1, 0.25, 0.5, 1.0, 1.5, 2.5] {
        let exact = d.cycle_cdf((t * scale).floor() as u64);
        let g = normalized_cdf(t).unwrap();
        assert!((exact - g).abs() < 2e-3, "t = {t}: {exact} vs {g}");
    }
}

#[test]
fn asymptotic_pmf_relative_error() {
    let n = 1_000_000u64;
    let d = ModelDistribution::new(n).unwrap();
    for l in 1..=1000u64 {
        let exact = d.cycle_pmf(l);
        let asym = cycle_pmf_asymptotic(l as f64, n as f64);
        assert!((asym / exact - 1.0).abs() < 0.02, "l = {l}");
    }
}

#[test]
fn intersection_modes_in_dimension_three() {
    for p in [101u64, 1009] {
        let exact = empty_intersection_prob(p, 3, IntersectionMode::ExactHybrid).unwrap();
        let asym = empty_intersection_prob(p, 3, IntersectionMode::Asymptotic).unwrap();
        assert!(exact.tail_bound < 1e-8);
        // E[(1 - 1/p)^lambda] under the erfc law is
        // sqrt(pi)/a (1 - e^{a^2/4} erfc(a/2)) with a = sqrt(2p)
        let a = (2.0 * p as f64).sqrt();
        let refined = PI.sqrt() / a * (1.0 - (a * a / 4.0).exp() * erfc(a / 2.0));
        assert!((exact.probability / refined - 1.0).abs() < 0.01, "p = {p}");
        let rel = (exact.probability / asym.probability - 1.0).abs();
        if p == 1009 {
            assert!(rel < 0.05, "p = {p}: {rel}");
        }
    }
}

#[test]
fn dimension_two_constant() {
    assert!((d2_constant() - d2_constant_closed_form()).abs() < 1e-9);
    assert!((d2_constant() - 0.598).abs() < 1e-3);
    // limit of the exact miss probability as p grows
    let e = empty_intersection_prob(2003, 2, IntersectionMode::ExactHybrid).unwrap();
    assert!((e.probability - d2_constant()).abs() < 0.01, "{}", e.probability);
}

#[test]
fn euler_products() {
    let e = euler_product(3, 10_000).unwrap();
    assert!(e.skipped.is_empty());
    assert!(e.product < 1e-6);
    let log_direct: f64 =
        primes_below(10_001).iter().map(|p| (1.0 - (PI / 2.0).sqrt() / (p.get() as f64).sqrt()).ln()).sum();
    assert!((e.log_product - log_direct).abs() < 1e-9 * log_direct.abs());
    let a = euler_product(5, 100_000).unwrap().product;
    let b = euler_product(5, 1_000_000).unwrap().product;
    assert!((a - b).abs() < 0.01);
}
