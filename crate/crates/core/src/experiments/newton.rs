use num_integer::Integer;

use super::ExperimentError;
use crate::dynmap::{IntegerUniMap, MapError};

/// The Newton map `x - f/f' = (x f' - f) / f'` of an integer polynomial
/// (coefficients low to high), with the integer content removed.
pub fn newton_map(f: &[i64]) -> Result<IntegerUniMap, ExperimentError> {
    let deg = f.iter().rposition(|&c| c != 0).unwrap_or(0);
    if deg < 2 {
        return Err(ExperimentError::Config(format!("Newton map needs degree >= 2, got {deg}")));
    }
    let f = &f[..=deg];
    let num: Vec<i64> = f.iter().enumerate().map(|(k, &a)| (k as i64 - 1) * a).collect();
    let den: Vec<i64> = f.iter().enumerate().skip(1).map(|(k, &a)| k as i64 * a).collect();
    let content = num.iter().chain(&den).fold(0i64, |g, &c| g.gcd(&c));
    let num: Vec<i64> = num.iter().map(|c| c / content).collect();
    let den: Vec<i64> = den.iter().map(|c| c / content).collect();
    match IntegerUniMap::new(&num, &den) {
        Ok(m) => Ok(m),
        Err(MapError::NotCoprime) => Err(ExperimentError::NotSquarefree),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynmap::ProjPoint;
    use crate::ffield::{primes_below, FpElement};
    use crate::orbit::orbit_contains;

    #[test]
    fn sqrt_two() {
        let n = newton_map(&[-2, 0, 1]).unwrap();
        assert_eq!(n.numerator(), &[2, 0, 1]);
        assert_eq!(n.denominator(), &[0, 2, 0]);
    }

    #[test]
    fn content_is_removed() {
        // f = 2x^2 - 4: x f' - f = 2x^2 + 4, f' = 4x
        let n = newton_map(&[-4, 0, 2]).unwrap();
        assert_eq!(n.numerator(), &[2, 0, 1]);
        assert_eq!(n.denominator(), &[0, 2, 0]);
    }

    #[test]
    fn roots_are_fixed_mod_p() {
        let n = newton_map(&[-2, 0, 1]).unwrap();
        let mut checked = 0;
        for p in primes_below(400) {
            let Ok(m) = n.reduce(p) else { continue };
            for r in 1..p.get() {
                if (r as u64 * r as u64) % p.as_u64() == 2 {
                    let s = ProjPoint::Affine(FpElement::from_i64(r as i64, p)).to_state(p);
                    assert_eq!(orbit_contains(|x| m.step(x), s, s, 1000).unwrap(), Some(0));
                    assert_eq!(m.step(s), s);
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn rejects_repeated_roots_and_low_degree() {
        assert!(matches!(newton_map(&[0, 0, 1]), Err(ExperimentError::NotSquarefree)));
        assert!(matches!(newton_map(&[1, -2, 1]), Err(ExperimentError::NotSquarefree)));
        assert!(matches!(newton_map(&[1, 1]), Err(ExperimentError::Config(_))));
    }
}
