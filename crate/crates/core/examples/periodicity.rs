//! How often is 0 periodic under x^2 + 1 modulo p?

use arithdyn::dynmap::{IntegerUniMap, RationalPoint};
use arithdyn::experiments::periodicity_scan;

fn main() {
    let f = IntegerUniMap::polynomial(&[1, 0, 1]).unwrap();
    let r = periodicity_scan(&f, RationalPoint::integer(0), 10_000, 0).unwrap();
    println!(
        "{} good primes: {} periodic, {} not (periodic fraction {:.4})",
        r.rows.len(),
        r.periodic_count(),
        r.non_periodic_count(),
        r.periodic_fraction().unwrap()
    );
}
