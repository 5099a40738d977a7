use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::orbit::OrbitSummary;

/// Empirical orbit statistics of genuinely random maps.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMapStats {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    /// `lambda_counts[l]` = trials with cycle length `l` (index 0 unused).
    pub lambda_counts: Vec<u64>,
    pub tau_counts: Vec<u64>,
    pub mu_counts: Vec<u64>,
}

impl RandomMapStats {
    fn empty(n: u64, trials: u64, seed: u64) -> Self {
        RandomMapStats { n, trials, seed, lambda_counts: Vec::new(), tau_counts: Vec::new(), mu_counts: Vec::new() }
    }

    fn record(&mut self, s: &OrbitSummary) {
        bump(&mut self.lambda_counts, s.cycle_len);
        bump(&mut self.tau_counts, s.collision_time);
        bump(&mut self.mu_counts, s.preperiod);
    }

    fn merge(mut self, other: RandomMapStats) -> Self {
        for (dst, src) in [
            (&mut self.lambda_counts, &other.lambda_counts),
            (&mut self.tau_counts, &other.tau_counts),
            (&mut self.mu_counts, &other.mu_counts),
        ] {
            if dst.len() < src.len() {
                dst.resize(src.len(), 0);
            }
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
        self
    }

    fn frac(counts: &[u64], i: u64, trials: u64) -> f64 {
        counts.get(i as usize).copied().unwrap_or(0) as f64 / trials as f64
    }

    /// Empirical `Prob(lambda = l)`.
    pub fn pmf_lambda(&self, l: u64) -> f64 {
        Self::frac(&self.lambda_counts, l, self.trials)
    }

    pub fn pmf_tau(&self, k: u64) -> f64 {
        Self::frac(&self.tau_counts, k, self.trials)
    }

    /// Binomial standard error of [`Self::pmf_lambda`] under the model value `q`.
    pub fn standard_error(&self, q: f64) -> f64 {
        (q * (1.0 - q) / self.trials as f64).sqrt()
    }

    /// Empirical `alpha(k) = Prob(tau > k - 1)`.
    pub fn alpha(&self, k: u64) -> f64 {
        let below: u64 = self.tau_counts.iter().take(k as usize).sum();
        (self.trials - below) as f64 / self.trials as f64
    }

    fn mean(counts: &[u64], trials: u64) -> f64 {
        counts.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum::<f64>() / trials as f64
    }

    pub fn mean_lambda(&self) -> f64 {
        Self::mean(&self.lambda_counts, self.trials)
    }

    pub fn mean_tau(&self) -> f64 {
        Self::mean(&self.tau_counts, self.trials)
    }

    pub fn mean_mu(&self) -> f64 {
        Self::mean(&self.mu_counts, self.trials)
    }

    pub fn max_tau(&self) -> u64 {
        self.tau_counts.len().saturating_sub(1) as u64
    }
}

fn bump(v: &mut Vec<u64>, i: u64) {
    let i = i as usize;
    if v.len() <= i {
        v.resize(i + 1, 0);
    }
    v[i] += 1;
}

/// Visit bookkeeping reused across trials; a stamp marks entries that belong
/// to the current trial so nothing is cleared between walks.
enum Visits {
    Dense { stamp: Vec<u64>, index: Vec<u64> },
    Sparse(HashMap<u64, u64>),
}

const DENSE_LIMIT: u64 = 1 << 24;

impl Visits {
    fn new(n: u64) -> Self {
        if n <= DENSE_LIMIT {
            Visits::Dense { stamp: vec![u64::MAX; n as usize], index: vec![0; n as usize] }
        } else {
            Visits::Sparse(HashMap::new())
        }
    }

    fn reset(&mut self) {
        if let Visits::Sparse(m) = self {
            m.clear();
        }
    }

    /// Returns the earlier index if `x` was seen in this trial, else records it.
    #[inline]
    fn visit(&mut self, trial: u64, x: u64, i: u64) -> Option<u64> {
        match self {
            Visits::Dense { stamp, index } => {
                let x = x as usize;
                if stamp[x] == trial {
                    Some(index[x])
                } else {
                    stamp[x] = trial;
                    index[x] = i;
                    None
                }
            }
            Visits::Sparse(m) => match m.get(&x) {
                Some(&j) => Some(j),
                None => {
                    m.insert(x, i);
                    None
                }
            },
        }
    }
}

/// One trial: draw `f(x)` uniformly the first time the walk leaves `x`.
/// The walk stops at the first repeat, so no image is ever requested twice
/// and lazy sampling is equivalent to drawing the whole map up front.
fn one_trial(n: u64, seed: u64, trial: u64, visits: &mut Visits) -> OrbitSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    visits.reset();
    let mut x = 0u64;
    let mut i = 0u64;
    loop {
        if let Some(j) = visits.visit(trial, x, i) {
            return OrbitSummary::new(j, i - j);
        }
        x = rng.gen_range(0..n);
        i += 1;
    }
}

/// Simulates `trials` independent uniformly random maps on `n` points,
/// walking each from `x0 = 0`. Trial `t` uses the ChaCha stream `t` of
/// `seed`, so results do not depend on the thread count.
pub fn simulate_random_map(n: u64, trials: u64, seed: u64) -> RandomMapStats {
    assert!(n >= 1);
    const CHUNK: u64 = 4096;
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stats = RandomMapStats::empty(n, trials, seed);
            let mut visits = Visits::new(n);
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                stats.record(&one_trial(n, seed, t, &mut visits));
            }
            stats
        })
        .reduce(|| RandomMapStats::empty(n, trials, seed), RandomMapStats::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_consistent() {
        let a = simulate_random_map(50, 2000, 9);
        let b = simulate_random_map(50, 2000, 9);
        assert_eq!(a, b);
        assert_eq!(a.lambda_counts.iter().sum::<u64>(), 2000);
        assert!((a.mean_tau() - a.mean_mu() - a.mean_lambda()).abs() < 1e-9);
        assert!(a.max_tau() <= 50);
        assert_eq!(a.alpha(1), 1.0);
    }

    #[test]
    fn one_point_set() {
        let s = simulate_random_map(1, 10, 0);
        assert_eq!(s.pmf_lambda(1), 1.0);
        assert_eq!(s.mean_mu(), 0.0);
    }

    #[test]
    fn sparse_path_agrees_in_law() {
        let mut v = Visits::Sparse(HashMap::new());
        let mut d = Visits::new(100);
        for t in 0..200 {
            assert_eq!(one_trial(100, 5, t, &mut v), one_trial(100, 5, t, &mut d));
        }
    }
}
