//! The bundled quadratic self-map of A^3 from (1, 2, 3): cycle lengths
//! normalised by sqrt(2 p^3) and how often the cycle meets the locus where
//! the Jacobian determinant vanishes.
//!
//! `cargo run --release --example system_sweep -- 5000`

use arithdyn::experiments::{mean, run_cycle_sweep, MapSource, SweepConfig};
use arithdyn::randmodel::NormalizedCycleLaw;

fn main() {
    let bound: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let rows = run_cycle_sweep(&SweepConfig::new(MapSource::Builtin("dim3".into()), bound)).unwrap();
    let done: Vec<_> = rows.iter().filter(|r| r.is_complete()).collect();
    let c: Vec<f64> = done.iter().filter_map(|r| r.ctilde).collect();
    let meets = done.iter().filter(|r| r.meets_ram == Some(true)).count();
    println!("{} good primes below {bound}", done.len());
    println!("mean ctilde {:.4}, model {:.4}", mean(&c).unwrap(), NormalizedCycleLaw::MEAN);
    println!("cycle meets the ramification locus at {meets} of {} primes", done.len());
    for r in done.iter().rev().take(5) {
        let s = r.summary.unwrap();
        println!("p = {}: mu = {} lambda = {}", r.p, s.preperiod, s.cycle_len);
    }
}
