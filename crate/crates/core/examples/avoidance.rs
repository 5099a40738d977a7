//! Is 0 in the orbit of 1 under x^3 + 1 modulo p? Always when p = 2 mod 3,
//! only sometimes when p = 1 mod 3.

use arithdyn::dynmap::builtin::x3plus1_map;
use arithdyn::dynmap::RationalPoint;
use arithdyn::experiments::avoidance_scan;

fn main() {
    let r = avoidance_scan(&x3plus1_map(), RationalPoint::integer(0), RationalPoint::integer(1), 5000, 3, 0).unwrap();
    println!("good primes {}, hit density {:.4}", r.rows.len(), r.density().unwrap());
    for c in &r.classes {
        if let Some(f) = c.fraction() {
            println!("p = {} mod 3: {} of {} primes ({f:.4})", c.residue, c.hits, c.primes);
        }
    }
}
