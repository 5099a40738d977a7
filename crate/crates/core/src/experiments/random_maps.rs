use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sweep::system_meets_ram;
use super::{with_workers, ExperimentError};
use crate::dynmap::poly::{total_degree, Exponents, MAX_VARS};
use crate::dynmap::{IntPoly, IntegerPolySystem, MapError, SysState};
use crate::ffield::Prime;
use crate::orbit::DEFAULT_BUDGET;

/// Attempts before [`gen_random_quadratic`] gives up.
pub const MAX_RESAMPLES: u32 = 100;

/// Random quadratic self-maps of A^d with coefficients uniform on `[-B, B]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomMapSpec {
    pub dimension: usize,
    pub coeff_bound: u64,
    pub seed: u64,
}

impl RandomMapSpec {
    pub const DEGREE: u32 = 2;
}

/// Exponent vectors of total degree at most 2 in `dim` variables.
fn quadratic_monomials(dim: usize) -> Vec<Exponents> {
    let mut out = vec![[0u8; MAX_VARS]];
    for i in 0..dim {
        let mut e = [0u8; MAX_VARS];
        e[i] = 1;
        out.push(e);
    }
    for i in 0..dim {
        for j in i..dim {
            let mut e = [0u8; MAX_VARS];
            e[i] += 1;
            e[j] += 1;
            out.push(e);
        }
    }
    debug_assert!(out.iter().all(|e| total_degree(e) <= 2));
    out
}

/// The `index`-th map of the family: ChaCha8 stream `index` of `seed`,
/// redrawn while the Jacobian determinant is constant.
pub fn gen_random_quadratic(spec: RandomMapSpec, index: u64) -> Result<IntegerPolySystem, ExperimentError> {
    let d = spec.dimension;
    if d == 0 || d > MAX_VARS {
        return Err(MapError::Dimension(d).into());
    }
    let b = spec.coeff_bound as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index);
    let monomials = quadratic_monomials(d);
    for _ in 0..MAX_RESAMPLES {
        let comps: Vec<IntPoly> = (0..d)
            .map(|_| {
                let mut f = IntPoly::zero(d);
                for e in &monomials {
                    f.add_term(*e, BigInt::from(rng.gen_range(-b..=b)));
                }
                f
            })
            .collect();
        match IntegerPolySystem::new(comps) {
            Ok(sys) => return Ok(sys),
            Err(MapError::ConstantJacobian) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(ExperimentError::Degenerate { index, attempts: MAX_RESAMPLES })
}

#[derive(Debug, Clone)]
pub struct RamMeetConfig {
    pub dimension: usize,
    pub primes: Vec<Prime>,
    pub map_count: u64,
    pub coeff_bound: u64,
    pub seed: u64,
    /// Defaults to the origin.
    pub start: Option<Vec<i64>>,
    pub workers: usize,
    pub budget: u64,
}

impl RamMeetConfig {
    pub fn new(dimension: usize, primes: Vec<Prime>, map_count: u64) -> Self {
        RamMeetConfig {
            dimension,
            primes,
            map_count,
            coeff_bound: 100,
            seed: 0,
            start: None,
            workers: 0,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn spec(&self) -> RandomMapSpec {
        RandomMapSpec { dimension: self.dimension, coeff_bound: self.coeff_bound, seed: self.seed }
    }
}

/// Per-prime tally over the map family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamRow {
    pub p: u32,
    /// Maps with good reduction and a completed orbit.
    pub good_maps: u64,
    /// Among those, maps whose cycle meets the ramification locus.
    pub meets: u64,
    pub censored: u64,
}

impl RamRow {
    pub fn fraction(&self) -> Option<f64> {
        (self.good_maps > 0).then(|| self.meets as f64 / self.good_maps as f64)
    }
}

/// For each prime, the fraction of generated maps whose periodic cycle
/// through the orbit of the start point contains a ramified point.
/// Maps with bad reduction at a prime are left out of that prime's tally.
pub fn ram_meet_probability(config: &RamMeetConfig) -> Result<Vec<RamRow>, ExperimentError> {
    if config.map_count == 0 {
        return Err(ExperimentError::Config("map count must be positive".into()));
    }
    let d = config.dimension;
    let maps: Vec<IntegerPolySystem> =
        (0..config.map_count).map(|i| gen_random_quadratic(config.spec(), i)).collect::<Result<_, _>>()?;
    let start = config.start.clone().unwrap_or_else(|| vec![0; d]);
    if start.len() != d {
        return Err(MapError::Dimension(start.len()).into());
    }
    let nm = maps.len();
    let outcomes: Vec<Result<Option<bool>, ()>> = with_workers(config.workers, || {
        (0..config.primes.len() * nm)
            .into_par_iter()
            .with_max_len(1)
            .map(|item| {
                let p = config.primes[item / nm];
                let mut x0: SysState = [0; MAX_VARS];
                for (slot, &v) in x0.iter_mut().zip(&start) {
                    *slot = p.modulus().from_i64(v) as u32;
                }
                system_meets_ram(&maps[item % nm], x0, p, config.budget).map_err(|_| ())
            })
            .collect()
    });
    Ok(config
        .primes
        .iter()
        .zip(outcomes.chunks(nm))
        .map(|(p, chunk)| {
            let mut row = RamRow { p: p.get(), good_maps: 0, meets: 0, censored: 0 };
            for o in chunk {
                match o {
                    Ok(Some(m)) => {
                        row.good_maps += 1;
                        row.meets += *m as u64;
                    }
                    Ok(None) => {}
                    Err(()) => row.censored += 1,
                }
            }
            row
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnRow {
    /// `S(N)` sums over primes `p < N`; `N = p + 1`.
    pub n: u64,
    pub p: u32,
    /// Fraction of good maps at `p` whose cycle avoids the ramification locus.
    pub empty_fraction: f64,
    pub s_n: f64,
    pub model: f64,
}

/// `sum sqrt(pi / (2p))` over the given primes.
pub fn sn_model(primes: &[u64]) -> f64 {
    primes.iter().map(|&p| (std::f64::consts::PI / (2.0 * p as f64)).sqrt()).sum()
}

/// Cumulative empty-intersection proportions for random maps of A^3.
/// Primes where no map has good reduction (always `p = 2`) are dropped from
/// both the estimate and the model sum.
pub fn sn_curve(config: &RamMeetConfig) -> Result<Vec<SnRow>, ExperimentError> {
    if config.dimension != 3 {
        return Err(ExperimentError::Config("S(N) is defined for dimension 3".into()));
    }
    let rows = ram_meet_probability(config)?;
    let mut s = 0.0;
    let mut model = 0.0;
    Ok(rows
        .iter()
        .filter_map(|r| {
            let f = r.fraction()?;
            s += 1.0 - f;
            model += sn_model(&[r.p as u64]);
            Some(SnRow { n: r.p as u64 + 1, p: r.p, empty_fraction: 1.0 - f, s_n: s, model })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::first_primes;

    #[test]
    fn generation_is_deterministic() {
        let spec = RandomMapSpec { dimension: 3, coeff_bound: 100, seed: 7 };
        let a = gen_random_quadratic(spec, 4).unwrap();
        let b = gen_random_quadratic(spec, 4).unwrap();
        assert_eq!(a.components(), b.components());
        let c = gen_random_quadratic(spec, 5).unwrap();
        assert_ne!(a.components(), c.components());
    }

    #[test]
    fn dimension_one_has_quadratic_term() {
        let spec = RandomMapSpec { dimension: 1, coeff_bound: 10, seed: 1 };
        for i in 0..200 {
            let m = gen_random_quadratic(spec, i).unwrap();
            let f = &m.components()[0];
            assert!(f.coeff(&[2, 0, 0, 0]) != BigInt::from(0));
            assert!(f.terms().all(|(_, c)| c.magnitude() <= &10u32.into()));
        }
    }

    #[test]
    fn bound_zero_is_degenerate() {
        let spec = RandomMapSpec { dimension: 2, coeff_bound: 0, seed: 1 };
        assert!(matches!(gen_random_quadratic(spec, 0), Err(ExperimentError::Degenerate { .. })));
    }

    #[test]
    fn ram_rows_skip_bad_reduction() {
        let c = RamMeetConfig::new(2, first_primes(8), 20);
        let rows = ram_meet_probability(&c).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].good_maps, 0);
        assert!(rows[0].fraction().is_none());
        assert!(rows[3..].iter().all(|r| r.good_maps > 15 && r.meets <= r.good_maps));
        let mut c1 = c.clone();
        c1.workers = 1;
        assert_eq!(rows, ram_meet_probability(&c1).unwrap());
    }

    #[test]
    fn sn_model_three_primes() {
        let v = sn_model(&[2, 3, 5]);
        let want = (std::f64::consts::PI / 2.0).sqrt() * (0.5f64.sqrt() + (1.0f64 / 3.0).sqrt() + 0.2f64.sqrt());
        assert!((v - want).abs() < 1e-14);
        assert!((v - 2.1703).abs() < 1e-4);
    }

    #[test]
    fn sn_curve_monotone() {
        let rows = sn_curve(&RamMeetConfig::new(3, first_primes(12), 6)).unwrap();
        assert_eq!(rows[0].p, 3);
        assert!(rows.windows(2).all(|w| w[1].s_n >= w[0].s_n && w[1].model > w[0].model));
    }
}
