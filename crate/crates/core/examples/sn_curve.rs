//! S(N): cumulative fraction of random quadratic maps of A^3 whose cycle
//! avoids the ramification locus, against sum sqrt(pi / (2p)).
//!
//! `cargo run --release --example sn_curve -- 50 500`

use arithdyn::experiments::{sn_curve, RamMeetConfig};
use arithdyn::ffield::first_primes;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().unwrap());
    let maps = args.next().unwrap_or(20) as u64;
    let primes = args.next().unwrap_or(150);
    let rows = sn_curve(&RamMeetConfig::new(3, first_primes(primes), maps)).unwrap();
    let step = (rows.len() / 10).max(1);
    for r in rows.iter().step_by(step).chain(rows.last()) {
        println!("N = {:6}  S(N) = {:7.3}  model = {:7.3}", r.n, r.s_n, r.model);
    }
}
