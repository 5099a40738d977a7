//! Simulate random maps on n points and compare with the exact law.
//!
//! `cargo run --release --example monte_carlo -- 1000 100000`

use arithdyn::randmodel::{simulate_random_map, ModelDistribution};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().unwrap());
    let n = args.next().unwrap_or(1000);
    let trials = args.next().unwrap_or(100_000);
    let stats = simulate_random_map(n, trials, 1);
    let dist = ModelDistribution::new(n).unwrap();
    println!("mean tau {:.3} (model {:.3})", stats.mean_tau(), dist.mean_tau());
    for l in [1, 5, 10, 30, 60] {
        let q = dist.cycle_pmf(l);
        let z = (stats.pmf_lambda(l) - q) / stats.standard_error(q);
        println!("lambda = {l:3}: empirical {:.5}  model {q:.5}  z = {z:+.2}", stats.pmf_lambda(l));
    }
}
