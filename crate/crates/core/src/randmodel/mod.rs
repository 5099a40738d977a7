//! Cycle statistics of a uniformly random self-map of an `n`-element set.
//!
//! Starting from a fixed point `x0`, the collision time `tau` satisfies
//! `Prob(tau > k) = prod_{j=1..k} (1 - j/n)`. Writing
//! `alpha(k) = Prob(tau > k - 1)`, the cycle length has the exact law
//! `Prob(lambda = l) = (1/n) sum_{k >= l} alpha(k)`, which for large `n`
//! approaches `sqrt(pi / 2n) * erfc(l / sqrt(2n))`. The normalised cycle
//! length `lambda / sqrt(2n)` therefore has density `sqrt(pi) * erfc(s)`.
//!
//! On top of that sit the probabilities that the cycle of a map on
//! `A^d(F_p)` misses its ramification locus, and the Euler product
//! across primes.

use std::f64::consts::PI;

use thiserror::Error;

use crate::ffield::primes_below;

mod montecarlo;
mod special;

pub use montecarlo::{simulate_random_map, RandomMapStats};
pub use special::{erf, erfc, integrate};

/// Largest set size for which the exact cycle law is tabulated.
pub const EXACT_CAP: u64 = 10_000_000;

/// `ln(alpha)` below this is treated as zero (exp underflows).
const LOG_UNDERFLOW: f64 = -745.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("set size {0} exceeds the exact-sum cap; use the asymptotic law")]
    ExactCap(u64),
    #[error("argument out of range: {0}")]
    Domain(&'static str),
    #[error("asymptotic intersection law needs d >= 3, got {0}")]
    DimensionTooSmall(u32),
}

/// `alpha(k) = Prob(tau > k - 1)` for a random map on `n` points.
///
/// Computed as a log-sum; `0` once `k - 1 >= n`.
pub fn survival_alpha(k: u64, n: u64) -> f64 {
    assert!(k >= 1 && n >= 1);
    if k > n {
        return 0.0;
    }
    let nf = n as f64;
    let mut log = 0.0;
    for j in 1..k {
        log += (-(j as f64) / nf).ln_1p();
        if log < LOG_UNDERFLOW {
            return 0.0;
        }
    }
    log.exp()
}

/// Upper bound `exp(-k(k+1) / 2n)` on `Prob(tau > k)`.
pub fn tau_tail_bound(k: u64, n: u64) -> f64 {
    let k = k as f64;
    (-k * (k + 1.0) / (2.0 * n as f64)).exp()
}

/// Tabulated random-map law for one set size.
#[derive(Debug, Clone)]
pub struct ModelDistribution {
    n: u64,
    /// `alpha[k - 1] = alpha(k)`, truncated where it underflows.
    alpha: Vec<f64>,
    /// `suffix[l - 1] = sum_{k >= l} alpha(k)`.
    suffix: Vec<f64>,
}

impl ModelDistribution {
    pub fn new(n: u64) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::Domain("set size must be positive"));
        }
        if n > EXACT_CAP {
            return Err(ModelError::ExactCap(n));
        }
        let nf = n as f64;
        let mut alpha = Vec::with_capacity(((40.0 * nf.sqrt()) as usize).min(n as usize) + 1);
        let mut log = 0.0f64;
        alpha.push(1.0);
        for k in 2..=n {
            log += (-((k - 1) as f64) / nf).ln_1p();
            if log < LOG_UNDERFLOW {
                break;
            }
            alpha.push(log.exp());
        }
        let mut suffix = vec![0.0; alpha.len()];
        let mut acc = 0.0;
        for i in (0..alpha.len()).rev() {
            acc += alpha[i];
            suffix[i] = acc;
        }
        Ok(ModelDistribution { n, alpha, suffix })
    }

    pub fn set_size(&self) -> u64 {
        self.n
    }

    /// Length of the stored tables; `alpha(k) = 0` beyond it.
    pub fn support(&self) -> u64 {
        self.alpha.len() as u64
    }

    pub fn alpha(&self, k: u64) -> f64 {
        assert!(k >= 1);
        self.alpha.get(k as usize - 1).copied().unwrap_or(0.0)
    }

    /// `Prob(tau = k) = (k / n) alpha(k)`.
    pub fn tau_pmf(&self, k: u64) -> f64 {
        k as f64 / self.n as f64 * self.alpha(k)
    }

    /// `Prob(lambda = l) = (1/n) sum_{k >= l} alpha(k)`.
    pub fn cycle_pmf(&self, l: u64) -> f64 {
        assert!(l >= 1);
        self.suffix.get(l as usize - 1).copied().unwrap_or(0.0) / self.n as f64
    }

    pub fn mean_tau(&self) -> f64 {
        (1..=self.support()).map(|k| k as f64 * self.tau_pmf(k)).sum()
    }

    pub fn mean_cycle_len(&self) -> f64 {
        (1..=self.support()).map(|l| l as f64 * self.cycle_pmf(l)).sum()
    }

    /// `sum_{l <= max_len} Prob(lambda = l)`.
    pub fn cycle_cdf(&self, max_len: u64) -> f64 {
        (1..=max_len.min(self.support())).map(|l| self.cycle_pmf(l)).sum()
    }
}

/// Exact `Prob(lambda = l)` on `n` points (`n <= EXACT_CAP`).
pub fn cycle_pmf_exact(l: u64, n: u64) -> Result<f64, ModelError> {
    if l == 0 || l > n {
        return Err(ModelError::Domain("cycle length must lie in 1..=n"));
    }
    Ok(ModelDistribution::new(n)?.cycle_pmf(l))
}

/// `sqrt(pi / 2n) * erfc(l / sqrt(2n))`.
pub fn cycle_pmf_asymptotic(l: f64, n: f64) -> f64 {
    let s = (2.0 * n).sqrt();
    (PI / (2.0 * n)).sqrt() * erfc(l / s)
}

/// Limit law of `lambda / sqrt(2n)`: density `sqrt(pi) * erfc(s)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NormalizedCycleLaw;

impl NormalizedCycleLaw {
    pub const MEAN: f64 = 0.443_113_462_726_379_2; // sqrt(pi) / 4

    pub fn density(&self, s: f64) -> Result<f64, ModelError> {
        normalized_density(s)
    }

    pub fn cdf(&self, t: f64) -> Result<f64, ModelError> {
        normalized_cdf(t)
    }
}

pub fn normalized_density(s: f64) -> Result<f64, ModelError> {
    if s.is_nan() || s < 0.0 {
        return Err(ModelError::Domain("density argument must be >= 0"));
    }
    Ok(PI.sqrt() * erfc(s))
}

/// `int_0^t sqrt(pi) erfc(s) ds` by adaptive quadrature (abs. error <= 1e-9).
pub fn normalized_cdf(t: f64) -> Result<f64, ModelError> {
    if t.is_nan() || t < 0.0 {
        return Err(ModelError::Domain("cdf argument must be >= 0"));
    }
    // the density is below 1e-300 past s = 27
    let upper = t.min(27.0);
    let v = integrate(|s| PI.sqrt() * erfc(s), 0.0, upper, 1e-12);
    Ok(v.min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMode {
    /// Sum over cycle lengths with a certified truncation bound.
    ExactHybrid,
    /// Leading term `sqrt(pi/2) * p^(1 - d/2)`, valid for `d >= 3`.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionEstimate {
    pub probability: f64,
    /// Upper bound on the mass omitted by truncating the cycle-length sum.
    pub tail_bound: f64,
    /// Whether the exact law (rather than the erfc approximation) was summed.
    pub exact_pmf: bool,
}

/// `Prob(cycle misses the ramification locus)` for a random map on
/// `A^d(F_p)` whose locus holds a `1/p` fraction of the points.
pub fn empty_intersection_prob(p: u64, d: u32, mode: IntersectionMode) -> Result<IntersectionEstimate, ModelError> {
    if p < 2 || d == 0 {
        return Err(ModelError::Domain("need p >= 2 and d >= 1"));
    }
    let pf = p as f64;
    match mode {
        IntersectionMode::Asymptotic => {
            if d < 3 {
                return Err(ModelError::DimensionTooSmall(d));
            }
            Ok(IntersectionEstimate {
                probability: (PI / 2.0).sqrt() * pf.powf(1.0 - d as f64 / 2.0),
                tail_bound: 0.0,
                exact_pmf: false,
            })
        }
        IntersectionMode::ExactHybrid => {
            let n = pf.powi(d as i32);
            let l_max = (20.0 * pf * pf.ln()).ceil() as u64;
            let keep = 1.0 - 1.0 / pf;
            let exact = n <= EXACT_CAP as f64;
            let upper = if exact { l_max.min(n as u64) } else { l_max };
            let mut sum = 0.0;
            let mut weight = 1.0;
            if exact {
                let dist = ModelDistribution::new(n as u64)?;
                for l in 1..=upper.min(dist.support()) {
                    weight *= keep;
                    sum += weight * dist.cycle_pmf(l);
                }
            } else {
                for l in 1..=upper {
                    weight *= keep;
                    sum += weight * cycle_pmf_asymptotic(l as f64, n);
                }
            }
            // (1 - 1/p)^l is decreasing and the pmf has total mass 1
            let tail_bound = if (upper as f64) >= n { 0.0 } else { keep.powf(upper as f64 + 1.0) };
            Ok(IntersectionEstimate { probability: sum, tail_bound, exact_pmf: exact })
        }
    }
}

/// `sqrt(pi) * int_0^inf exp(-sqrt(2) t) erfc(t) dt`, the limiting
/// empty-intersection probability in dimension 2.
pub fn d2_constant() -> f64 {
    let v = integrate(|t| (-(2.0f64.sqrt()) * t).exp() * erfc(t), 0.0, 40.0, 1e-13);
    PI.sqrt() * v
}

/// Closed form `sqrt(pi/2) (1 - e^{1/2} erfc(1/sqrt(2)))` of [`d2_constant`].
pub fn d2_constant_closed_form() -> f64 {
    (PI / 2.0).sqrt() * (1.0 - 0.5f64.exp() * erfc(std::f64::consts::FRAC_1_SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerVerdict {
    DivergesToZero,
    Converges,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerProduct {
    pub dimension: u32,
    pub p_max: u64,
    pub log_product: f64,
    pub product: f64,
    /// Primes whose factor would be non-positive.
    pub skipped: Vec<u64>,
    pub factors: usize,
    pub verdict: EulerVerdict,
}

/// `prod_{p <= p_max} (1 - sqrt(pi/2) p^(1 - d/2))` over primes with a
/// positive factor. The product tends to zero iff `sum p^(1 - d/2)`
/// diverges, i.e. iff `d <= 4`.
pub fn euler_product(d: u32, p_max: u64) -> Result<EulerProduct, ModelError> {
    if d < 3 {
        return Err(ModelError::DimensionTooSmall(d));
    }
    let c = (PI / 2.0).sqrt();
    let expo = 1.0 - d as f64 / 2.0;
    let mut log = 0.0;
    let mut skipped = Vec::new();
    let mut factors = 0;
    for p in primes_below(p_max + 1) {
        let t = c * (p.as_u64() as f64).powf(expo);
        if t >= 1.0 {
            skipped.push(p.as_u64());
            continue;
        }
        log += (-t).ln_1p();
        factors += 1;
    }
    Ok(EulerProduct {
        dimension: d,
        p_max,
        log_product: log,
        product: log.exp(),
        skipped,
        factors,
        verdict: if d <= 4 { EulerVerdict::DivergesToZero } else { EulerVerdict::Converges },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_examples() {
        assert_eq!(survival_alpha(1, 17), 1.0);
        assert!((survival_alpha(3, 4) - 3.0 / 8.0).abs() < 1e-15);
        assert_eq!(survival_alpha(5, 4), 0.0);
        assert_eq!(survival_alpha(101, 100), 0.0);
        let dist = ModelDistribution::new(4).unwrap();
        assert!((dist.alpha(3) - 3.0 / 8.0).abs() < 1e-15);
        assert_eq!(dist.alpha(5), 0.0);
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(tau_tail_bound(0, 10), 1.0);
        let n = 100;
        assert!(tau_tail_bound(n, n) <= (-(n as f64) / 2.0 - 0.5).exp() * (1.0 + 1e-12));
    }

    #[test]
    fn two_point_set() {
        assert!((cycle_pmf_exact(1, 2).unwrap() - 0.75).abs() < 1e-15);
        assert!((cycle_pmf_exact(2, 2).unwrap() - 0.25).abs() < 1e-15);
        assert!(cycle_pmf_exact(3, 2).is_err());
        assert_eq!(cycle_pmf_exact(1, EXACT_CAP + 1), Err(ModelError::ExactCap(EXACT_CAP + 1)));
    }

    #[test]
    fn asymptotic_pmf_shape() {
        let n = 1e6;
        assert!((cycle_pmf_asymptotic(0.0, n) - (PI / (2.0 * n)).sqrt()).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for l in 1..2000 {
            let v = cycle_pmf_asymptotic(l as f64, n);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn density_domain() {
        assert!((normalized_density(0.0).unwrap() - 1.772_453_850_905_516).abs() < 1e-15);
        assert!(normalized_density(-0.1).is_err());
        assert!(normalized_cdf(-1.0).is_err());
        assert_eq!(normalized_cdf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn intersection_modes() {
        let a = empty_intersection_prob(10007, 3, IntersectionMode::Asymptotic).unwrap();
        assert!((a.probability - 0.012_529).abs() < 5e-7);
        assert!(empty_intersection_prob(101, 2, IntersectionMode::Asymptotic).is_err());
        let d1 = empty_intersection_prob(10007, 1, IntersectionMode::ExactHybrid).unwrap();
        assert!(d1.exact_pmf);
        assert!(d1.probability >= 0.9, "{d1:?}");
    }

    #[test]
    fn euler_rejects_low_dimension() {
        assert!(euler_product(2, 100).is_err());
        let e = euler_product(3, 100).unwrap();
        assert!(e.skipped.is_empty());
        assert_eq!(e.factors, 25);
        let e = euler_product(4, 100).unwrap();
        // sqrt(pi/2)/2 < 1, so p = 2 stays; nothing reaches 1 for d >= 3
        assert_eq!(e.verdict, EulerVerdict::DivergesToZero);
        assert_eq!(euler_product(5, 100).unwrap().verdict, EulerVerdict::Converges);
    }
}
