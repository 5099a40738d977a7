//! Newton map of x^2 - 2: the square roots of 2 modulo p are fixed points.

use arithdyn::dynmap::{format_uni_map, ProjPoint};
use arithdyn::experiments::newton_map;
use arithdyn::ffield::{primes_below, FpElement};

fn main() {
    let n = newton_map(&[-2, 0, 1]).unwrap();
    print!("{}", format_uni_map(&n, None, "Newton map of x^2 - 2"));
    for p in primes_below(60) {
        let Ok(m) = n.reduce(p) else { continue };
        let roots: Vec<u32> = (0..p.get()).filter(|r| (*r as u64 * *r as u64) % p.as_u64() == 2).collect();
        for r in &roots {
            let z = ProjPoint::Affine(FpElement::from_i64(*r as i64, p));
            assert_eq!(m.eval(z), z);
        }
        if !roots.is_empty() {
            println!("p = {:2}: fixed square roots {:?}", p.get(), roots);
        }
    }
}
