//! Orbits of polynomial and rational maps modulo primes.
//!
//! * [`ffield`]: prime fields below 2^31 and prime generation.
//! * [`dynmap`]: maps over Z, reduction modulo p, critical points and
//!   Jacobians.
//! * [`orbit`]: tail and cycle detection, cycle walks, multipliers.
//! * [`randmodel`]: cycle-length law of random maps and derived
//!   probabilities.
//! * [`experiments`]: prime sweeps, ramification statistics and density
//!   scans with CSV output.
//! * [`cli`]: the `orbitsim` command line.

pub mod cli;
pub mod dynmap;
pub mod experiments;
pub mod ffield;
pub mod orbit;
pub mod randmodel;
