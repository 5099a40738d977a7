//! Normalised cycle lengths of x^2 + x + 2 from x0 = 1 over all primes below
//! a bound, compared with the random-map law. Writes a sweep CSV and its
//! histogram into the system temp directory.
//!
//! `cargo run --release --example cycle_sweep -- 100000`

use arithdyn::experiments::{histogram, ks_statistic, mean, output, run_cycle_sweep, MapSource, SweepConfig};
use arithdyn::randmodel::{normalized_cdf, NormalizedCycleLaw};

fn main() {
    let bound: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);
    let rows = run_cycle_sweep(&SweepConfig::new(MapSource::Builtin("dim1".into()), bound)).unwrap();
    let c: Vec<f64> = rows.iter().filter(|r| r.is_complete()).filter_map(|r| r.ctilde).collect();
    println!("{} primes, {} good", rows.len(), c.len());
    println!("mean ctilde {:.4}, model {:.4}", mean(&c).unwrap(), NormalizedCycleLaw::MEAN);
    let ks = ks_statistic(&c, |t| normalized_cdf(t).unwrap()).unwrap();
    println!("KS distance to the model cdf: {ks:.4}");

    let dir = std::env::temp_dir();
    let csv = dir.join("dim1_sweep.csv");
    output::write_sweep_csv(&csv, &rows).unwrap();
    let bins = histogram(&c, 0.1, &NormalizedCycleLaw).unwrap();
    output::write_hist_csv(&dir.join("dim1_hist.csv"), &bins).unwrap();
    for b in bins.iter().take(8) {
        println!("{:5.2}  {:6.3}  {:6.3}", b.center, b.empirical, b.model);
    }
    println!("wrote {}", csv.display());
}
