//! Fraction of random quadratic maps of A^d whose cycle through the orbit
//! of the origin contains a point where the Jacobian determinant vanishes,
//! for d = 1, 2, 3.
//!
//! `cargo run --release --example ramification_meet -- 200 60`

use arithdyn::experiments::{ram_meet_probability, RamMeetConfig};
use arithdyn::ffield::first_primes;
use arithdyn::randmodel::d2_constant;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().unwrap());
    let maps = args.next().unwrap_or(200) as u64;
    let primes = args.next().unwrap_or(60);
    for d in 1..=3 {
        let rows = ram_meet_probability(&RamMeetConfig::new(d, first_primes(primes), maps)).unwrap();
        let tail: Vec<f64> = rows.iter().rev().take(10).filter_map(|r| r.fraction()).collect();
        let avg = tail.iter().sum::<f64>() / tail.len() as f64;
        println!("d = {d}: mean meet fraction over the last 10 primes {avg:.3}");
    }
    println!("model for d = 2: {:.3}", 1.0 - d2_constant());
}
