//! Tail, cycle and collision time of forward orbits under a deterministic
//! step function on a finite state space.
//!
//! [`detect_cycle`] uses Brent's power-of-two search and keeps O(1) states.
//! [`detect_cycle_oracle`] stores every visited state and exists to check it.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::dynmap::{MapError, ProjPoint, ReducedUniMap};
use crate::ffield::FpElement;

/// Default cap on step evaluations per orbit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("orbit needs more than {0} step evaluations")]
    BudgetExceeded(u64),
    #[error("orbit visits more than {0} states")]
    MemoryExceeded(usize),
}

/// `x_mu` is the first periodic point; `x_tau = x_mu` with `tau = mu + lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitSummary {
    pub preperiod: u64,
    pub cycle_len: u64,
    pub collision_time: u64,
}

impl OrbitSummary {
    pub fn new(preperiod: u64, cycle_len: u64) -> Self {
        assert!(cycle_len >= 1);
        OrbitSummary { preperiod, cycle_len, collision_time: preperiod + cycle_len }
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

struct Counter<F> {
    step: F,
    used: u64,
    budget: u64,
}

impl<F> Counter<F> {
    #[inline(always)]
    fn call<S>(&mut self, x: S) -> Result<S, OrbitError>
    where
        F: FnMut(S) -> S,
    {
        if self.used >= self.budget {
            return Err(OrbitError::BudgetExceeded(self.budget));
        }
        self.used += 1;
        Ok((self.step)(x))
    }
}

/// Brent's search. Returns a point on the cycle, the cycle length and the
/// number of evaluations spent.
pub fn locate_cycle<S, F>(step: F, x0: S, budget: u64) -> Result<(S, u64, u64), OrbitError>
where
    S: Copy + Eq,
    F: FnMut(S) -> S,
{
    let mut c = Counter { step, used: 0, budget };
    let (hare, lam) = brent(&mut c, x0)?;
    Ok((hare, lam, c.used))
}

fn brent<S, F>(c: &mut Counter<F>, x0: S) -> Result<(S, u64), OrbitError>
where
    S: Copy + Eq,
    F: FnMut(S) -> S,
{
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0;
    let mut hare = c.call(x0)?;
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = c.call(hare)?;
        lam += 1;
    }
    Ok((hare, lam))
}

/// Exact `(mu, lambda, tau)` with O(1) memory.
///
/// At most `2 max(mu, lambda) + 2 lambda + 2 mu` evaluations are made; if
/// that would exceed `budget`, the search stops with
/// [`OrbitError::BudgetExceeded`].
pub fn detect_cycle<S, F>(step: F, x0: S, budget: u64) -> Result<OrbitSummary, OrbitError>
where
    S: Copy + Eq,
    F: FnMut(S) -> S,
{
    detect_cycle_counted(step, x0, budget).map(|(s, _)| s)
}

/// [`detect_cycle`] plus the number of step evaluations it used.
pub fn detect_cycle_counted<S, F>(step: F, x0: S, budget: u64) -> Result<(OrbitSummary, u64), OrbitError>
where
    S: Copy + Eq,
    F: FnMut(S) -> S,
{
    let mut c = Counter { step, used: 0, budget };
    let (_, lam) = brent(&mut c, x0)?;
    // two walkers lam apart meet first at x_mu
    let mut lead = x0;
    for _ in 0..lam {
        lead = c.call(lead)?;
    }
    let mut trail = x0;
    let mut mu = 0u64;
    while trail != lead {
        trail = c.call(trail)?;
        lead = c.call(lead)?;
        mu += 1;
    }
    Ok((OrbitSummary::new(mu, lam), c.used))
}

/// Reference detector: records the index of every visited state.
pub fn detect_cycle_oracle<S, F>(mut step: F, x0: S, max_states: usize) -> Result<OrbitSummary, OrbitError>
where
    S: Copy + Eq + Hash,
    F: FnMut(S) -> S,
{
    let mut seen: HashMap<S, u64> = HashMap::new();
    let mut x = x0;
    let mut i = 0u64;
    loop {
        if let Some(&j) = seen.get(&x) {
            return Ok(OrbitSummary::new(j, i - j));
        }
        if seen.len() >= max_states {
            return Err(OrbitError::MemoryExceeded(max_states));
        }
        seen.insert(x, i);
        x = step(x);
        i += 1;
    }
}

/// `step^n(x)`.
pub fn advance<S, F>(step: &mut F, mut x: S, n: u64) -> S
where
    F: FnMut(S) -> S,
{
    for _ in 0..n {
        x = step(x);
    }
    x
}

/// Moves to `x_mu` and counts how many of the `lambda` cycle states satisfy
/// `visitor`.
pub fn cycle_walk<S, F, V>(mut step: F, x0: S, summary: &OrbitSummary, mut visitor: V) -> u64
where
    S: Copy,
    F: FnMut(S) -> S,
    V: FnMut(S) -> bool,
{
    let mut x = advance(&mut step, x0, summary.preperiod);
    let mut hits = 0;
    for _ in 0..summary.cycle_len {
        if visitor(x) {
            hits += 1;
        }
        x = step(x);
    }
    hits
}

/// Whether any of the `cycle_len` states starting at `on_cycle` satisfies
/// `pred`. Stops at the first hit.
pub fn cycle_any<S, F, V>(mut step: F, on_cycle: S, cycle_len: u64, mut pred: V) -> bool
where
    S: Copy,
    F: FnMut(S) -> S,
    V: FnMut(S) -> bool,
{
    let mut x = on_cycle;
    for _ in 0..cycle_len {
        if pred(x) {
            return true;
        }
        x = step(x);
    }
    false
}

/// Product of `phi'` over the cycle reached from `x0`: the multiplier of
/// that cycle.
pub fn cycle_multiplier(m: &ReducedUniMap, x0: ProjPoint, summary: &OrbitSummary) -> Result<FpElement, MapError> {
    let p = m.prime();
    let md = m.modulus();
    let mut state = advance(&mut |s| m.step(s), x0.to_state(p), summary.preperiod);
    let mut acc = 1u64;
    for _ in 0..summary.cycle_len {
        let d = m.derivative_eval(ProjPoint::from_state(state, p))?;
        acc = md.mul(acc, d.residue() as u64);
        state = m.step(state);
    }
    Ok(md.element(acc))
}

/// Least `m >= 0` with `step^m(x0) == target`. The search covers the whole
/// eventually periodic orbit, so `None` means the target is never reached.
pub fn orbit_contains<S, F>(mut step: F, x0: S, target: S, budget: u64) -> Result<Option<u64>, OrbitError>
where
    S: Copy + Eq,
    F: FnMut(S) -> S,
{
    let summary = detect_cycle(&mut step, x0, budget)?;
    Ok(orbit_index(step, x0, target, &summary))
}

/// Like [`orbit_contains`] but reuses a summary computed earlier.
pub fn orbit_index<S, F>(mut step: F, x0: S, target: S, summary: &OrbitSummary) -> Option<u64>
where
    S: Copy + Eq,
    F: FnMut(S) -> S,
{
    let mut x = x0;
    for m in 0..summary.collision_time {
        if x == target {
            return Some(m);
        }
        x = step(x);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynmap::IntegerUniMap;
    use crate::ffield::Prime;

    fn poly_step(coeffs: &'static [u64], p: u64) -> impl FnMut(u64) -> u64 {
        move |x| coeffs.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
    }

    #[test]
    fn detection_examples() {
        let s = detect_cycle(poly_step(&[2, 1, 1], 5), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s, OrbitSummary::new(1, 3));
        assert_eq!(s.collision_time, 4);
        let s = detect_cycle(poly_step(&[0, 0, 1], 7), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s, OrbitSummary::new(0, 1));
        let s = detect_cycle(poly_step(&[0, 0, 1], 7), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(s, OrbitSummary::new(1, 2));
        assert_eq!(s.collision_time, 3);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(detect_cycle_oracle(|x: u8| x, 0, 10).unwrap(), OrbitSummary::new(0, 1));
        // a permutation has no tail
        for x0 in 0..11u64 {
            let s = detect_cycle_oracle(|x| (3 * x + 4) % 11, x0, 100).unwrap();
            assert_eq!(s.preperiod, 0);
        }
        assert_eq!(detect_cycle_oracle(|x: u64| x + 1, 0, 50), Err(OrbitError::MemoryExceeded(50)));
    }

    #[test]
    fn budget_is_enforced() {
        let r = detect_cycle(|x: u64| (x + 1) % 1000, 0, 500);
        assert_eq!(r, Err(OrbitError::BudgetExceeded(500)));
        let (s, used) = detect_cycle_counted(|x: u64| (x + 1) % 1000, 0, 10_000).unwrap();
        assert_eq!(s, OrbitSummary::new(0, 1000));
        assert!(used <= 4 * s.collision_time);
    }

    #[test]
    fn walking_the_cycle() {
        let s = OrbitSummary::new(1, 3);
        assert_eq!(cycle_walk(poly_step(&[2, 1, 1], 5), 1, &s, |_| true), 3);
        assert_eq!(cycle_walk(poly_step(&[2, 1, 1], 5), 1, &s, |_| false), 0);
        let p = Prime::new(5).unwrap();
        let m = IntegerUniMap::polynomial(&[2, 1, 1]).unwrap().reduce(p).unwrap();
        let hits = cycle_walk(|x| m.step(x), 1, &s, |x| m.is_critical(ProjPoint::from_state(x, p)));
        assert_eq!(hits, 1);
        assert!(cycle_any(|x| m.step(x), 4, 3, |x| x == 2));
        assert!(!cycle_any(|x| m.step(x), 4, 3, |x| x == 1));
    }

    #[test]
    fn multipliers() {
        let p = Prime::new(7).unwrap();
        let sq = IntegerUniMap::polynomial(&[0, 0, 1]).unwrap().reduce(p).unwrap();
        let x0 = ProjPoint::affine(2, p);
        let s = detect_cycle(|x| sq.step(x), x0.to_state(p), DEFAULT_BUDGET).unwrap();
        assert_eq!(s, OrbitSummary::new(0, 2));
        assert_eq!(cycle_multiplier(&sq, x0, &s).unwrap().residue(), 4);
        let rotated = cycle_multiplier(&sq, ProjPoint::affine(4, p), &s).unwrap();
        assert_eq!(rotated.residue(), 4);
        // 0 is a superattracting fixed point of x^2
        let s0 = OrbitSummary::new(0, 1);
        assert_eq!(cycle_multiplier(&sq, ProjPoint::affine(0, p), &s0).unwrap().residue(), 0);
        // infinity is fixed; its multiplier needs a chart change
        assert_eq!(cycle_multiplier(&sq, ProjPoint::Infinity, &s0), Err(MapError::Chart));
    }

    #[test]
    fn orbit_membership() {
        let hit = orbit_contains(poly_step(&[1, 0, 0, 1], 5), 1, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(hit, Some(3));
        let same = orbit_contains(poly_step(&[1, 0, 0, 1], 5), 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(same, Some(0));
        let miss = orbit_contains(poly_step(&[0, 0, 1], 7), 2, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(miss, None);
    }
}
