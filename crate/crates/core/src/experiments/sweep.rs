use std::path::PathBuf;

use rayon::prelude::*;

use super::{io_err, mix64, with_workers, ExperimentError, VERIFY_FRACTION};
use crate::dynmap::{
    builtin, parse_map, IntegerPolySystem, IntegerUniMap, MapDescription, MapError, MapKind, ProjPoint, RationalPoint,
    SysState,
};
use crate::ffield::{primes_below, Prime};
use crate::orbit::{advance, cycle_any, detect_cycle, locate_cycle, OrbitError, OrbitSummary, DEFAULT_BUDGET};

#[derive(Debug, Clone)]
pub enum MapSource {
    Builtin(String),
    File(PathBuf),
    Inline(MapDescription),
}

impl MapSource {
    pub fn load(&self) -> Result<MapDescription, ExperimentError> {
        match self {
            MapSource::Builtin(name) => Ok(builtin::load(name)?),
            MapSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(io_err(path))?;
                parse_map(&text).map_err(|e| ExperimentError::Format { path: path.clone(), msg: e.to_string() })
            }
            MapSource::Inline(d) => Ok(d.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub map: MapSource,
    /// Overrides the start point declared in the map file.
    pub start: Option<Vec<RationalPoint>>,
    /// Primes `p < prime_bound` are swept.
    pub prime_bound: u64,
    /// Chooses which rows are re-verified.
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Rayon threads; 0 uses every core.
    pub workers: usize,
    /// Step evaluations allowed per prime before a row is censored.
    pub budget: u64,
}

impl SweepConfig {
    pub fn new(map: MapSource, prime_bound: u64) -> Self {
        SweepConfig { map, start: None, prime_bound, seed: 0, output: None, workers: 0, budget: DEFAULT_BUDGET }
    }
}

/// One prime of a sweep. Bad primes have `good == false` and no data;
/// censored rows have no summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub p: u32,
    pub good: bool,
    pub summary: Option<OrbitSummary>,
    /// `lambda / sqrt(2 p^d)`.
    pub ctilde: Option<f64>,
    pub meets_ram: Option<bool>,
    pub censored: bool,
}

impl ResultRow {
    pub fn bad(p: u32) -> Self {
        ResultRow { p, good: false, summary: None, ctilde: None, meets_ram: None, censored: false }
    }

    fn censored(p: u32) -> Self {
        ResultRow { censored: true, good: true, ..ResultRow::bad(p) }
    }

    fn done(p: u32, dim: usize, summary: OrbitSummary, meets_ram: bool) -> Self {
        let scale = (2.0 * (p as f64).powi(dim as i32)).sqrt();
        ResultRow {
            p,
            good: true,
            summary: Some(summary),
            ctilde: Some(summary.cycle_len as f64 / scale),
            meets_ram: Some(meets_ram),
            censored: false,
        }
    }

    /// Good and uncensored.
    pub fn is_complete(&self) -> bool {
        self.good && !self.censored
    }
}

pub(crate) enum Prepared {
    Uni(IntegerUniMap, RationalPoint),
    System(IntegerPolySystem, Vec<RationalPoint>),
}

pub(crate) fn prepare(desc: &MapDescription, start: Option<&[RationalPoint]>) -> Result<Prepared, ExperimentError> {
    let start = match start.or(desc.start.as_deref()) {
        Some(s) => s.to_vec(),
        None => return Err(ExperimentError::Config("no start point given".into())),
    };
    let dim = desc.map.dimension();
    if start.len() != dim {
        return Err(MapError::Dimension(start.len()).into());
    }
    Ok(match &desc.map {
        MapKind::Uni(m) => Prepared::Uni(m.clone(), start[0]),
        MapKind::System(s) => {
            if start.contains(&RationalPoint::Infinity) {
                return Err(ExperimentError::Config("affine start point needed".into()));
            }
            Prepared::System(s.clone(), start)
        }
    })
}

fn sweep_uni(map: &IntegerUniMap, x0: RationalPoint, p: Prime, budget: u64) -> ResultRow {
    let Ok(m) = map.reduce(p) else {
        return ResultRow::bad(p.get());
    };
    let s0 = x0.reduce(p).to_state(p);
    let step = |s: u32| m.step(s);
    match detect_cycle(step, s0, budget) {
        Err(OrbitError::BudgetExceeded(_) | OrbitError::MemoryExceeded(_)) => ResultRow::censored(p.get()),
        Ok(summary) => {
            let on_cycle = advance(&mut { step }, s0, summary.preperiod);
            let meets = cycle_any(step, on_cycle, summary.cycle_len, |s| m.is_critical(ProjPoint::from_state(s, p)));
            ResultRow::done(p.get(), 1, summary, meets)
        }
    }
}

/// Reduces an affine rational point; `None` when a denominator vanishes mod p.
fn reduce_affine(x: &[RationalPoint], p: Prime) -> Option<SysState> {
    let mut s = [0u32; 4];
    for (slot, c) in s.iter_mut().zip(x) {
        match c.reduce(p) {
            ProjPoint::Affine(v) => *slot = v.residue(),
            ProjPoint::Infinity => return None,
        }
    }
    Some(s)
}

fn sweep_system(sys: &IntegerPolySystem, x0: &[RationalPoint], p: Prime, budget: u64) -> ResultRow {
    let (Ok(r), Some(s0)) = (sys.reduce(p), reduce_affine(x0, p)) else {
        return ResultRow::bad(p.get());
    };
    let mut scratch = r.scratch();
    let result = detect_cycle(|s| r.step(s, &mut scratch), s0, budget);
    match result {
        Err(_) => ResultRow::censored(p.get()),
        Ok(summary) => {
            let on_cycle = advance(&mut |s| r.step(s, &mut scratch), s0, summary.preperiod);
            let mut jscratch = r.scratch();
            let meets = cycle_any(
                |s| r.step(s, &mut scratch),
                on_cycle,
                summary.cycle_len,
                |s| r.jacobian_det_state(s, &mut jscratch) == 0,
            );
            ResultRow::done(p.get(), sys.dimension(), summary, meets)
        }
    }
}

/// Ramification test only: Brent's search finds a cycle point and its
/// length, which is all that is needed.
pub(crate) fn system_meets_ram(
    sys: &IntegerPolySystem,
    x0: SysState,
    p: Prime,
    budget: u64,
) -> Result<Option<bool>, OrbitError> {
    let Ok(r) = sys.reduce(p) else {
        return Ok(None);
    };
    let mut scratch = r.scratch();
    let (on_cycle, lam, _) = locate_cycle(|s| r.step(s, &mut scratch), x0, budget)?;
    let mut jscratch = r.scratch();
    Ok(Some(cycle_any(|s| r.step(s, &mut scratch), on_cycle, lam, |s| r.jacobian_det_state(s, &mut jscratch) == 0)))
}

fn run_prepared(prep: &Prepared, primes: &[Prime], workers: usize, budget: u64) -> Vec<ResultRow> {
    with_workers(workers, || {
        primes
            .par_iter()
            .with_max_len(1)
            .map(|&p| match prep {
                Prepared::Uni(m, x0) => sweep_uni(m, *x0, p, budget),
                Prepared::System(s, x0) => sweep_system(s, x0, p, budget),
            })
            .collect()
    })
}

/// One row per prime `p < prime_bound`, ascending, followed by a
/// re-verification pass over a seeded sample of the rows.
pub fn run_cycle_sweep(config: &SweepConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    if config.prime_bound < 3 {
        return Err(ExperimentError::Config(format!("prime bound {} is below 3", config.prime_bound)));
    }
    let desc = config.map.load()?;
    let prep = prepare(&desc, config.start.as_deref())?;
    let primes = primes_below(config.prime_bound);
    let rows = run_prepared(&prep, &primes, config.workers, config.budget);
    verify_rows(&desc, config.start.as_deref(), &rows, config.seed, VERIFY_FRACTION)?;
    Ok(rows)
}

/// Recomputes `x_tau == x_mu` directly for a sample of complete rows.
/// A row is sampled when a hash of `(seed, p)` falls below `fraction`.
pub fn verify_rows(
    desc: &MapDescription,
    start: Option<&[RationalPoint]>,
    rows: &[ResultRow],
    seed: u64,
    fraction: f64,
) -> Result<usize, ExperimentError> {
    let prep = prepare(desc, start)?;
    let cut = (fraction.clamp(0.0, 1.0) * u64::MAX as f64) as u64;
    let mut checked = 0;
    for row in rows.iter().filter(|r| r.is_complete()) {
        if mix64(seed ^ mix64(row.p as u64)) > cut {
            continue;
        }
        let s = row.summary.expect("complete row");
        let p = Prime::new(row.p as u64).map_err(|_| ExperimentError::Verification(row.p))?;
        let ok = match &prep {
            Prepared::Uni(m, x0) => {
                let m = m.reduce(p)?;
                let s0 = x0.reduce(p).to_state(p);
                let mut f = |x: u32| m.step(x);
                let a = advance(&mut f, s0, s.preperiod);
                advance(&mut f, a, s.cycle_len) == a
            }
            Prepared::System(sys, x0) => {
                let r = sys.reduce(p)?;
                let s0 = reduce_affine(x0, p).ok_or(ExperimentError::Verification(row.p))?;
                let mut scratch = r.scratch();
                let mut f = |x| r.step(x, &mut scratch);
                let a = advance(&mut f, s0, s.preperiod);
                advance(&mut f, a, s.cycle_len) == a
            }
        };
        if !ok {
            return Err(ExperimentError::Verification(row.p));
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim1(bound: u64) -> SweepConfig {
        SweepConfig::new(MapSource::Builtin("dim1".into()), bound)
    }

    #[test]
    fn dim1_small_primes() {
        let rows = run_cycle_sweep(&dim1(100)).unwrap();
        assert_eq!(rows.len(), 25);
        assert!(!rows[0].good && rows[0].p == 2);
        let r5 = rows.iter().find(|r| r.p == 5).unwrap();
        let s = r5.summary.unwrap();
        assert_eq!((s.preperiod, s.cycle_len), (1, 3));
        // orbit 1 -> 4 -> 2 -> 3 -> 4; critical points of x^2+x+2 mod 5 are {2, inf}
        assert_eq!(r5.meets_ram, Some(true));
        assert!((r5.ctilde.unwrap() - 3.0 / 10f64.sqrt()).abs() < 1e-15);
        assert!(rows.windows(2).all(|w| w[0].p < w[1].p));
    }

    #[test]
    fn deterministic_across_workers() {
        let mut c = dim1(3000);
        c.workers = 1;
        let a = run_cycle_sweep(&c).unwrap();
        c.workers = 3;
        assert_eq!(a, run_cycle_sweep(&c).unwrap());
    }

    #[test]
    fn tiny_budget_censors() {
        let mut c = dim1(200);
        c.budget = 4;
        let rows = run_cycle_sweep(&c).unwrap();
        assert!(rows.iter().any(|r| r.censored));
        assert!(rows.iter().filter(|r| r.censored).all(|r| r.summary.is_none() && r.good));
    }

    #[test]
    fn system_sweep_and_verification() {
        let c = SweepConfig::new(MapSource::Builtin("dim3".into()), 60);
        let rows = run_cycle_sweep(&c).unwrap();
        let desc = builtin::load("dim3").unwrap();
        let n = verify_rows(&desc, None, &rows, 0, 1.0).unwrap();
        assert_eq!(n, rows.iter().filter(|r| r.is_complete()).count());
        assert!(n > 10);
    }

    #[test]
    fn bound_below_three_rejected() {
        assert!(matches!(run_cycle_sweep(&dim1(2)), Err(ExperimentError::Config(_))));
    }
}
