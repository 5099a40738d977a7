use rayon::prelude::*;

use super::{with_workers, ExperimentError};
use crate::dynmap::{IntegerUniMap, RationalPoint};
use crate::ffield::{primes_below, Prime};
use crate::orbit::{detect_cycle, orbit_index, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AvoidRow {
    pub p: u32,
    /// Least `m` with `phi^m(beta) = alpha` mod p.
    pub hit: Option<u64>,
    pub censored: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassStat {
    pub residue: u64,
    pub primes: u64,
    pub hits: u64,
}

impl ClassStat {
    pub fn fraction(&self) -> Option<f64> {
        (self.primes > 0).then(|| self.hits as f64 / self.primes as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvoidanceReport {
    /// Good primes in ascending order.
    pub rows: Vec<AvoidRow>,
    /// Primes skipped for bad reduction of the map or of `alpha`, `beta`.
    pub skipped: Vec<u32>,
    pub class_mod: u64,
    pub classes: Vec<ClassStat>,
}

impl AvoidanceReport {
    pub fn censored(&self) -> usize {
        self.rows.iter().filter(|r| r.censored).count()
    }

    pub fn hits(&self) -> usize {
        self.rows.iter().filter(|r| r.hit.is_some()).count()
    }

    /// Hit fraction over uncensored good primes.
    pub fn density(&self) -> Option<f64> {
        let n = self.rows.len() - self.censored();
        (n > 0).then(|| self.hits() as f64 / n as f64)
    }

    pub fn class(&self, residue: u64) -> Option<&ClassStat> {
        self.classes.iter().find(|c| c.residue == residue)
    }
}

fn finite_at(x: &RationalPoint, p: Prime) -> bool {
    match *x {
        RationalPoint::Infinity => true,
        RationalPoint::Finite { den, .. } => den.rem_euclid(p.get() as i64) != 0,
    }
}

/// For every good prime `p < prime_bound`, whether `alpha` lies in the
/// forward orbit of `beta` modulo p. With `class_mod > 0` the hits are also
/// tallied by `p mod class_mod`.
pub fn avoidance_scan(
    map: &IntegerUniMap,
    alpha: RationalPoint,
    beta: RationalPoint,
    prime_bound: u64,
    class_mod: u64,
    workers: usize,
) -> Result<AvoidanceReport, ExperimentError> {
    let primes = primes_below(prime_bound);
    let results: Vec<Result<AvoidRow, u32>> = with_workers(workers, || {
        primes
            .par_iter()
            .with_max_len(1)
            .map(|&p| {
                let m = match map.reduce(p) {
                    Ok(m) if finite_at(&alpha, p) && finite_at(&beta, p) => m,
                    _ => return Err(p.get()),
                };
                let a = alpha.reduce(p).to_state(p);
                let b = beta.reduce(p).to_state(p);
                let step = |s: u32| m.step(s);
                Ok(match detect_cycle(step, b, DEFAULT_BUDGET) {
                    Ok(summary) => AvoidRow { p: p.get(), hit: orbit_index(step, b, a, &summary), censored: false },
                    Err(_) => AvoidRow { p: p.get(), hit: None, censored: true },
                })
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(p) => skipped.push(p),
        }
    }
    let mut classes: Vec<ClassStat> = (0..class_mod).map(|residue| ClassStat { residue, primes: 0, hits: 0 }).collect();
    if class_mod > 0 {
        for r in rows.iter().filter(|r| !r.censored) {
            let c = &mut classes[(r.p as u64 % class_mod) as usize];
            c.primes += 1;
            c.hits += r.hit.is_some() as u64;
        }
    }
    Ok(AvoidanceReport { rows, skipped, class_mod, classes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityReport {
    /// `(p, periodic)` for each good uncensored prime.
    pub rows: Vec<(u32, bool)>,
    pub skipped: Vec<u32>,
    pub censored: Vec<u32>,
}

impl PeriodicityReport {
    pub fn periodic_count(&self) -> usize {
        self.rows.iter().filter(|r| r.1).count()
    }

    pub fn non_periodic_count(&self) -> usize {
        self.rows.len() - self.periodic_count()
    }

    pub fn periodic_fraction(&self) -> Option<f64> {
        (!self.rows.is_empty()).then(|| self.periodic_count() as f64 / self.rows.len() as f64)
    }
}

/// Whether the reduction of `alpha` is periodic (`mu = 0`) at each good
/// prime `p < prime_bound`.
pub fn periodicity_scan(
    map: &IntegerUniMap,
    alpha: RationalPoint,
    prime_bound: u64,
    workers: usize,
) -> Result<PeriodicityReport, ExperimentError> {
    let primes = primes_below(prime_bound);
    let results: Vec<(u32, Option<Option<bool>>)> = with_workers(workers, || {
        primes
            .par_iter()
            .with_max_len(1)
            .map(|&p| {
                let m = match map.reduce(p) {
                    Ok(m) if finite_at(&alpha, p) => m,
                    _ => return (p.get(), None),
                };
                let a = alpha.reduce(p).to_state(p);
                (p.get(), Some(detect_cycle(|s| m.step(s), a, DEFAULT_BUDGET).ok().map(|s| s.is_periodic())))
            })
            .collect()
    });
    let mut report = PeriodicityReport { rows: Vec::new(), skipped: Vec::new(), censored: Vec::new() };
    for (p, r) in results {
        match r {
            None => report.skipped.push(p),
            Some(None) => report.censored.push(p),
            Some(Some(periodic)) => report.rows.push((p, periodic)),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynmap::builtin::x3plus1_map;

    #[test]
    fn x3_plus_1_class_two_always_hits() {
        let r =
            avoidance_scan(&x3plus1_map(), RationalPoint::integer(0), RationalPoint::integer(1), 2000, 3, 0).unwrap();
        assert_eq!(r.skipped, vec![2, 3]);
        let c2 = r.class(2).unwrap();
        assert!(c2.primes > 100);
        assert_eq!(c2.fraction(), Some(1.0));
        let c1 = r.class(1).unwrap().fraction().unwrap();
        assert!(c1 > 0.0 && c1 < 1.0, "{c1}");
    }

    #[test]
    fn alpha_equal_beta_hits_at_zero() {
        let r = avoidance_scan(&x3plus1_map(), RationalPoint::new(2, 7), RationalPoint::new(2, 7), 300, 0, 0).unwrap();
        assert!(r.rows.iter().all(|x| x.hit == Some(0)));
        assert_eq!(r.density(), Some(1.0));
        assert!(r.skipped.contains(&7));
    }

    #[test]
    fn fixed_point_is_periodic() {
        // x^2 - 2 fixes 2
        let m = IntegerUniMap::polynomial(&[-2, 0, 1]).unwrap();
        let r = periodicity_scan(&m, RationalPoint::integer(2), 1000, 0).unwrap();
        assert_eq!(r.periodic_fraction(), Some(1.0));
    }

    #[test]
    fn x_squared_at_two_brute_force() {
        let m = IntegerUniMap::polynomial(&[0, 0, 1]).unwrap();
        let r = periodicity_scan(&m, RationalPoint::integer(2), 1000, 0).unwrap();
        for &(p, periodic) in &r.rows {
            // 2 is periodic under squaring iff 2 = 2^(2^k) for some k >= 1
            let mut seen = std::collections::HashSet::new();
            let mut x = 2u64 % p as u64;
            let mut hit = false;
            while seen.insert(x) {
                x = x * x % p as u64;
                if x == 2 % p as u64 {
                    hit = true;
                    break;
                }
            }
            assert_eq!(periodic, hit, "p = {p}");
        }
        assert!(r.non_periodic_count() > 0 && r.periodic_count() > 0);
    }
}
