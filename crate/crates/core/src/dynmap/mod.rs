//! Maps over Z and their reductions modulo primes.
//!
//! [`IntegerUniMap`] is a rational self-map of P^1 given by a homogeneous
//! pair `(F, G)`; [`IntegerPolySystem`] is a polynomial self-map of A^d.
//! Reducing either at a prime yields an immutable evaluator that can be
//! shared between worker threads.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ffield::{FpElement, Prime};

pub mod builtin;
pub mod mapfile;
pub mod poly;
mod system;
mod uni;

pub use mapfile::{format_uni_map, parse_map, MapDescription, MapKind};
pub use poly::IntPoly;
pub use system::{IntegerPolySystem, ReducedSystem, SysScratch, SysState};
pub use uni::{IntegerUniMap, ProjPoint, ReducedUniMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("bad reduction at p = {0}")]
    BadReduction(u32),
    #[error("degree is not below the characteristic at p = {0}")]
    DegreeVsChar(u32),
    #[error("degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("Jacobian determinant is constant modulo p = {0}")]
    DegenerateJacobian(u32),
    #[error("Jacobian determinant is constant")]
    ConstantJacobian,
    #[error("numerator and denominator share a root")]
    NotCoprime,
    #[error("map is constant")]
    ConstantMap,
    #[error("point at infinity needs a coordinate change")]
    Chart,
    #[error("dimension mismatch or unsupported dimension ({0})")]
    Dimension(usize),
    #[error("total degree {0} exceeds the cap")]
    DegreeCap(u32),
    #[error("coordinates reduced modulo a different prime")]
    ModulusMismatch,
    #[error("map file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown builtin map `{0}`")]
    UnknownBuiltin(String),
}

/// A point of P^1(Q): `num/den` in lowest terms with `den > 0`, or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Finite { num: i64, den: i64 },
    Infinity,
}

impl RationalPoint {
    pub fn new(num: i64, den: i64) -> Self {
        if den == 0 {
            return RationalPoint::Infinity;
        }
        let g = num_integer::gcd(num, den);
        let s = if den < 0 { -1 } else { 1 };
        RationalPoint::Finite { num: s * num / g, den: s * den / g }
    }

    pub fn integer(v: i64) -> Self {
        RationalPoint::Finite { num: v, den: 1 }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match *self {
            RationalPoint::Finite { num, den: 1 } => Some(num),
            _ => None,
        }
    }

    /// The reduction map P^1(Q) -> P^1(F_p).
    pub fn reduce(&self, p: Prime) -> ProjPoint {
        match *self {
            RationalPoint::Infinity => ProjPoint::Infinity,
            RationalPoint::Finite { num, den } => {
                let m = p.modulus();
                match m.inv(m.from_i64(den)) {
                    None => ProjPoint::Infinity,
                    Some(inv) => ProjPoint::Affine(FpElement::from_i64(m.mul(m.from_i64(num), inv) as i64, p)),
                }
            }
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RationalPoint::Infinity => write!(f, "inf"),
            RationalPoint::Finite { num, den: 1 } => write!(f, "{num}"),
            RationalPoint::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for RationalPoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(RationalPoint::Infinity);
        }
        let bad = || format!("invalid point `{s}`");
        match s.split_once('/') {
            None => s.parse().map(RationalPoint::integer).map_err(|_| bad()),
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim().parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                Ok(RationalPoint::new(a, b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_point_reduction() {
        let p = Prime::new(7).unwrap();
        assert_eq!(RationalPoint::new(1, 3).reduce(p), ProjPoint::affine(5, p));
        assert_eq!(RationalPoint::new(2, 6).reduce(p), ProjPoint::affine(5, p));
        assert_eq!(RationalPoint::new(1, 7).reduce(p), ProjPoint::Infinity);
        assert_eq!(RationalPoint::integer(-1).reduce(p), ProjPoint::affine(6, p));
        assert_eq!("3/-6".parse::<RationalPoint>().unwrap(), RationalPoint::Finite { num: -1, den: 2 });
        assert_eq!("inf".parse::<RationalPoint>().unwrap(), RationalPoint::Infinity);
        assert!("1/0".parse::<RationalPoint>().is_err());
    }
}
