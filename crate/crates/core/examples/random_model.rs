//! Queries against the cycle-length law of a uniformly random map.

use arithdyn::randmodel::{
    cycle_pmf_asymptotic, cycle_pmf_exact, d2_constant, d2_constant_closed_form, empty_intersection_prob,
    normalized_cdf, normalized_density, survival_alpha, IntersectionMode, ModelDistribution,
};

fn main() {
    let n = 1000;
    let dist = ModelDistribution::new(n).unwrap();
    println!("n = {n}: E[tau] = {:.3}  E[lambda] = {:.3}", dist.mean_tau(), dist.mean_cycle_len());
    println!("alpha(30) = {:.6}", survival_alpha(30, n));
    for l in [1, 10, 30, 100] {
        println!(
            "Prob(lambda = {l:3}) = {:.6}  (erfc form {:.6})",
            cycle_pmf_exact(l, n).unwrap(),
            cycle_pmf_asymptotic(l as f64, n as f64)
        );
    }
    println!("g(0) = {:.6}  G(1) = {:.6}", normalized_density(0.0).unwrap(), normalized_cdf(1.0).unwrap());
    for p in [101, 1009] {
        let exact = empty_intersection_prob(p, 3, IntersectionMode::ExactHybrid).unwrap();
        let asym = empty_intersection_prob(p, 3, IntersectionMode::Asymptotic).unwrap();
        println!(
            "d = 3, p = {p}: miss probability {:.5} (tail bound {:.1e}), leading term {:.5}",
            exact.probability, exact.tail_bound, asym.probability
        );
    }
    println!("d = 2 limit: {:.6} (closed form {:.6})", d2_constant(), d2_constant_closed_form());
}
