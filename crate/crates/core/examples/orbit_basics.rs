//! Reduce x^2 + x + 2 modulo a few primes, find the tail and cycle of the
//! orbit of 1, and inspect critical points and the cycle multiplier.

use arithdyn::dynmap::{IntegerUniMap, ProjPoint};
use arithdyn::ffield::Prime;
use arithdyn::orbit::{cycle_multiplier, detect_cycle, DEFAULT_BUDGET};

fn main() {
    let f = IntegerUniMap::polynomial(&[2, 1, 1]).expect("valid map");
    println!("resultant: {}", f.resultant());
    for p in [5u64, 7, 101, 1009] {
        let p = Prime::new(p).unwrap();
        let m = f.reduce(p).expect("good reduction");
        let x0 = ProjPoint::affine(1, p);
        let s = detect_cycle(|x| m.step(x), x0.to_state(p), DEFAULT_BUDGET).unwrap();
        let crit: Vec<String> = m
            .critical_points()
            .iter()
            .map(|c| match c {
                ProjPoint::Affine(v) => v.residue().to_string(),
                ProjPoint::Infinity => "inf".into(),
            })
            .collect();
        let mult = cycle_multiplier(&m, x0, &s).unwrap();
        println!(
            "p = {:4}: mu = {:3}  lambda = {:3}  critical points {{{}}}  multiplier {}",
            p.get(),
            s.preperiod,
            s.cycle_len,
            crit.join(", "),
            mult.residue()
        );
    }
}
