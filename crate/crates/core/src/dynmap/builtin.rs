//! Maps shipped with the crate.

use super::mapfile::{parse_map, MapDescription, MapKind};
use super::{IntegerPolySystem, IntegerUniMap, MapError};

pub const DIM1: &str = include_str!("../../maps/dim1.map");
pub const DIM3: &str = include_str!("../../maps/dim3.map");
pub const X3PLUS1: &str = include_str!("../../maps/x3plus1.map");
pub const X2PLUS1: &str = include_str!("../../maps/x2plus1.map");

pub const NAMES: [&str; 4] = ["dim1", "dim3", "x3plus1", "x2plus1"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "dim1" => Some(DIM1),
        "dim3" => Some(DIM3),
        "x3plus1" => Some(X3PLUS1),
        "x2plus1" => Some(X2PLUS1),
        _ => None,
    }
}

pub fn load(name: &str) -> Result<MapDescription, MapError> {
    let src = source(name).ok_or_else(|| MapError::UnknownBuiltin(name.to_string()))?;
    parse_map(src)
}

/// `x^2 + x + 2`.
pub fn dim1_map() -> IntegerUniMap {
    match load("dim1").expect("bundled map parses").map {
        MapKind::Uni(m) => m,
        MapKind::System(_) => unreachable!(),
    }
}

/// The bundled quadratic self-map of A^3.
pub fn dim3_system() -> IntegerPolySystem {
    match load("dim3").expect("bundled map parses").map {
        MapKind::System(s) => s,
        MapKind::Uni(_) => unreachable!(),
    }
}

/// `x^3 + 1`.
pub fn x3plus1_map() -> IntegerUniMap {
    IntegerUniMap::polynomial(&[1, 0, 0, 1]).expect("valid map")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_parse() {
        for name in NAMES {
            let d = load(name).unwrap();
            assert!(d.start.is_some(), "{name} has a start point");
        }
        assert!(load("nope").is_err());
        assert_eq!(dim1_map().numerator(), &[2, 1, 1]);
        assert_eq!(dim3_system().dimension(), 3);
        assert_eq!(dim3_system().degree(), 2);
    }
}
