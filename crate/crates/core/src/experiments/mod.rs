//! Prime sweeps and density scans built on [`crate::orbit`] and
//! [`crate::dynmap`].
//!
//! Every driver is deterministic given its configuration: work items are
//! processed on a rayon pool but results are gathered in prime order, and
//! random maps are a pure function of `(seed, index)`.

use std::path::PathBuf;

use thiserror::Error;

use crate::dynmap::MapError;

mod newton;
pub mod output;
mod random_maps;
mod scans;
mod stats;
mod sweep;

pub use newton::newton_map;
pub use random_maps::{
    gen_random_quadratic, ram_meet_probability, sn_curve, sn_model, RamMeetConfig, RamRow, RandomMapSpec, SnRow,
};
pub use scans::{avoidance_scan, periodicity_scan, AvoidRow, AvoidanceReport, ClassStat, PeriodicityReport};
pub use stats::{histogram, ks_statistic, mean, HistBin};
pub use sweep::{run_cycle_sweep, verify_rows, MapSource, ResultRow, SweepConfig};

/// Fraction of rows re-verified after a sweep.
pub const VERIFY_FRACTION: f64 = 0.01;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("random map {index}: {attempts} consecutive degenerate draws")]
    Degenerate { index: u64, attempts: u32 },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("re-verification of the orbit at p = {0} failed")]
    Verification(u32),
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> ExperimentError {
    let path = path.into();
    move |source| ExperimentError::Io { path, source }
}

/// splitmix64 finaliser; used to derive per-item seeds and sample rows.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f` on a rayon pool with `workers` threads (0 means all cores).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(f)
}
