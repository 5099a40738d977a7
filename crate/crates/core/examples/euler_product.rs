//! Partial products of (1 - sqrt(pi/2) p^(1 - d/2)) for d = 3..6.

use arithdyn::randmodel::euler_product;

fn main() {
    for d in 3..=6 {
        for p_max in [1_000, 100_000] {
            let e = euler_product(d, p_max).unwrap();
            println!("d = {d}, p <= {p_max:7}: product {:.3e}  ({:?})", e.product, e.verdict);
        }
    }
}
