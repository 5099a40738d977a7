//! Prime-field arithmetic for moduli below 2^31.
//!
//! Two layers live here. [`Prime`] and [`FpElement`] are the checked,
//! self-describing values used at API boundaries. [`Modulus`] is the raw
//! `u64` reducer used by the orbit hot loops, where every element is already
//! known to be in `[0, p)`.

use std::fmt;

use thiserror::Error;

/// Largest modulus accepted by [`Prime::new`] (exclusive).
pub const MODULUS_CEILING: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is not below 2^31")]
    TooLarge(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(u32, u32),
    #[error("residue {0} is not reduced modulo {1}")]
    Unreduced(u64, u32),
}

/// A prime below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(value: u64) -> Result<Self, FieldError> {
        if value >= MODULUS_CEILING {
            return Err(FieldError::TooLarge(value));
        }
        if !is_prime(value) {
            return Err(FieldError::NotPrime(value));
        }
        Ok(Prime(value as u32))
    }

    /// Wraps a value already known to be prime (e.g. sieve output).
    pub(crate) fn new_unchecked(value: u32) -> Self {
        debug_assert!(is_prime(value as u64));
        Prime(value)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    pub fn modulus(self) -> Modulus {
        Modulus::new(self)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of F_p carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElement {
    residue: u32,
    modulus: Prime,
}

impl FpElement {
    pub fn new(residue: u64, modulus: Prime) -> Result<Self, FieldError> {
        if residue >= modulus.as_u64() {
            return Err(FieldError::Unreduced(residue, modulus.get()));
        }
        Ok(FpElement { residue: residue as u32, modulus })
    }

    /// Reduces an arbitrary signed integer into F_p.
    pub fn from_i64(value: i64, modulus: Prime) -> Self {
        let r = value.rem_euclid(modulus.get() as i64);
        FpElement { residue: r as u32, modulus }
    }

    pub(crate) fn from_raw(residue: u64, modulus: Prime) -> Self {
        debug_assert!(residue < modulus.as_u64());
        FpElement { residue: residue as u32, modulus }
    }

    pub fn zero(modulus: Prime) -> Self {
        FpElement { residue: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        FpElement { residue: 1 % modulus.get(), modulus }
    }

    #[inline]
    pub fn residue(self) -> u32 {
        self.residue
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    fn check(self, other: FpElement) -> Result<u64, FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        Ok(self.modulus.as_u64())
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

pub fn mod_add(a: FpElement, b: FpElement) -> Result<FpElement, FieldError> {
    let p = a.check(b)?;
    let s = a.residue as u64 + b.residue as u64;
    Ok(FpElement::from_raw(if s >= p { s - p } else { s }, a.modulus))
}

pub fn mod_sub(a: FpElement, b: FpElement) -> Result<FpElement, FieldError> {
    let p = a.check(b)?;
    let s = a.residue as u64 + p - b.residue as u64;
    Ok(FpElement::from_raw(if s >= p { s - p } else { s }, a.modulus))
}

/// Product with a 64-bit intermediate; exact for every modulus below 2^31.
pub fn mod_mul(a: FpElement, b: FpElement) -> Result<FpElement, FieldError> {
    let p = a.check(b)?;
    Ok(FpElement::from_raw(a.residue as u64 * b.residue as u64 % p, a.modulus))
}

pub fn mod_neg(a: FpElement) -> FpElement {
    let p = a.modulus.as_u64();
    let r = a.residue as u64;
    FpElement::from_raw(if r == 0 { 0 } else { p - r }, a.modulus)
}

pub fn mod_pow(a: FpElement, exp: u64) -> FpElement {
    FpElement::from_raw(pow_mod(a.residue as u64, exp, a.modulus.as_u64()), a.modulus)
}

pub fn mod_inv(a: FpElement) -> Result<FpElement, FieldError> {
    match inv_mod(a.residue as u64, a.modulus.as_u64()) {
        Some(r) => Ok(FpElement::from_raw(r, a.modulus)),
        None => Err(FieldError::NotInvertible(a.residue, a.modulus.get())),
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod64(acc, base, m);
        }
        base = mul_mod64(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
fn mul_mod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Extended Euclid; `None` when `gcd(a, m) != 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i64) as u64)
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes strictly below `bound`, ascending (sieve of Eratosthenes).
pub fn primes_below(bound: u64) -> Vec<Prime> {
    assert!(bound <= MODULUS_CEILING, "prime bound must not exceed 2^31");
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(Prime::new_unchecked(i as u32));
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<Prime> {
    if count == 0 {
        return Vec::new();
    }
    // p_n < n (ln n + ln ln n) for n >= 6
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64 + 1;
    let mut ps = primes_below(bound);
    ps.truncate(count);
    ps
}

/// Barrett reducer for a fixed prime modulus, operating on raw residues.
#[derive(Debug, Clone, Copy)]
pub struct Modulus {
    p: u64,
    barrett: u64,
    prime: Prime,
}

impl Modulus {
    pub fn new(prime: Prime) -> Self {
        let p = prime.as_u64();
        Modulus { p, barrett: u64::MAX / p, prime }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// `x mod p` for any `x: u64`.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        // q underestimates floor(x / p) by at most 2
        if r >= self.p {
            r -= self.p;
        }
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        inv_mod(a, self.p)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn element(&self, residue: u64) -> FpElement {
        FpElement::from_raw(residue, self.prime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn el(r: u64, m: u64) -> FpElement {
        FpElement::new(r, p(m)).unwrap()
    }

    #[test]
    fn small_prime_lists() {
        let got: Vec<u32> = primes_below(10).into_iter().map(Prime::get).collect();
        assert_eq!(got, vec![2, 3, 5, 7]);
        assert!(primes_below(2).is_empty());
        assert_eq!(primes_below(3).len(), 1);
    }

    #[test]
    fn first_primes_counts() {
        let ps = first_primes(100);
        assert_eq!(ps.len(), 100);
        assert_eq!(ps[99].get(), 541);
        assert_eq!(first_primes(1)[0].get(), 2);
        assert_eq!(first_primes(5000)[4999].get(), 48611);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mod_mul(el(3, 5), el(4, 5)).unwrap().residue(), 2);
        let q = 2147483629;
        assert_eq!(mod_mul(el(q - 1, q), el(q - 1, q)).unwrap().residue(), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inv(el(2, 5)).unwrap().residue(), 3);
        assert_eq!(mod_inv(el(1, 101)).unwrap().residue(), 1);
        assert_eq!(mod_inv(el(7, 101)).unwrap().residue(), 29);
        assert_eq!(mod_inv(el(0, 101)), Err(FieldError::NotInvertible(0, 101)));
    }

    #[test]
    fn mismatched_moduli_rejected() {
        assert_eq!(mod_mul(el(1, 5), el(1, 7)), Err(FieldError::ModulusMismatch(5, 7)));
        assert!(mod_add(el(1, 5), el(1, 7)).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Prime::new(91), Err(FieldError::NotPrime(91)));
        assert!(matches!(Prime::new(1 << 31), Err(FieldError::TooLarge(_))));
        assert!(FpElement::new(7, p(7)).is_err());
        assert_eq!(FpElement::from_i64(-1, p(7)).residue(), 6);
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime(2147483647));
        assert!(is_prime(2147483629));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
    }

    #[test]
    fn barrett_matches_remainder() {
        for &q in &[2u64, 3, 5, 65521, 2147483629, 2147483647] {
            let m = Modulus::new(p(q));
            for &x in &[0u64, 1, q - 1, q, q + 1, u64::MAX, u64::MAX - 1, (q - 1) * (q - 1), 1 << 63] {
                assert_eq!(m.reduce(x), x % q, "x={x} q={q}");
            }
        }
    }
}
