//! Sparse multivariate integer polynomials with a fixed small variable count.
//!
//! Only the operations the dynamics code needs: ring arithmetic, partial
//! derivatives, and a Laplace-expansion determinant for the symbolic
//! Jacobian.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Maximum number of variables (and therefore map dimension).
pub const MAX_VARS: usize = 4;
/// Maximum total degree accepted for map components.
pub const MAX_DEGREE: u32 = 8;

/// Exponent vector; unused trailing slots are zero.
pub type Exponents = [u8; MAX_VARS];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

pub fn total_degree(e: &Exponents) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&nvars));
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term([0; MAX_VARS], c.into());
        p
    }

    /// The variable `x_{index}` (zero based).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut e = [0; MAX_VARS];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms<I, C>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Univariate polynomial from coefficients, lowest degree first.
    pub fn from_univariate(coeffs: &[i64]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(i, &c)| ([i as u8, 0, 0, 0], c)))
    }

    pub fn add_term(&mut self, e: Exponents, c: BigInt) {
        debug_assert!(e[self.nvars..].iter().all(|&k| k == 0));
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    /// True when every term has total degree zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| total_degree(e) == 0)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = IntPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0u8; MAX_VARS];
                for k in 0..MAX_VARS {
                    e[k] = ea[k].checked_add(eb[k]).expect("exponent overflow");
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(*e, a * c);
        }
        out
    }

    pub fn partial(&self, var: usize) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.add_term(d, c * BigInt::from(e[var]));
        }
        out
    }

    /// Exact evaluation over the integers.
    pub fn eval_int(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, xi) in x.iter().enumerate() {
                for _ in 0..e[k] {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients reduced into `[0, p)`, dropping those that vanish.
    pub fn reduce_mod(&self, p: u64) -> Vec<(Exponents, u64)> {
        let m = BigInt::from(p);
        self.terms
            .iter()
            .filter_map(|(e, c)| {
                let r = ((c % &m) + &m) % &m;
                let r = r.to_u64().expect("residue fits in u64");
                (r != 0).then_some((*e, r))
            })
            .collect()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// the first row. Intended for the small sizes used here (at most 4x4).
pub fn poly_det(m: &[Vec<IntPoly>]) -> IntPoly {
    let n = m.len();
    assert!(n >= 1 && m.iter().all(|r| r.len() == n));
    let nvars = m[0][0].nvars();
    let cols: Vec<usize> = (0..n).collect();
    det_minor(m, 0, &cols, nvars)
}

fn det_minor(m: &[Vec<IntPoly>], row: usize, cols: &[usize], nvars: usize) -> IntPoly {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = IntPoly::zero(nvars);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.mul(&det_minor(m, row + 1, &rest, nvars));
        acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| total_degree(b.0).cmp(&total_degree(a.0)).then(b.0.cmp(a.0)));
        for (e, c) in terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            for (k, &pow) in e.iter().enumerate().take(self.nvars) {
                if pow == 0 {
                    continue;
                }
                let name = if self.nvars == 1 { "x".to_string() } else { format!("x{}", k + 1) };
                factors.push(if pow == 1 { name } else { format!("{name}^{pow}") });
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partials_and_products() {
        let x = IntPoly::var(2, 0);
        let y = IntPoly::var(2, 1);
        let f = x.mul(&x).add(&x.mul(&y).scale(&BigInt::from(3)));
        assert_eq!(f.partial(0), x.scale(&BigInt::from(2)).add(&y.scale(&BigInt::from(3))));
        assert_eq!(f.partial(1), x.scale(&BigInt::from(3)));
        assert_eq!(f.degree(), Some(2));
        assert!(IntPoly::constant(2, 5).is_constant());
        assert_eq!(IntPoly::zero(2).degree(), None);
    }

    #[test]
    fn determinant_of_constant_matrix() {
        let c = |v: i64| IntPoly::constant(3, v);
        let m = vec![vec![c(7), c(8), c(9)], vec![c(1), c(8), c(3)], vec![c(2), c(8), c(5)]];
        assert_eq!(poly_det(&m), c(48));
    }

    #[test]
    fn display_is_readable() {
        let p = IntPoly::from_univariate(&[2, 1, 1]);
        assert_eq!(p.to_string(), "x^2 + x + 2");
        let q = IntPoly::from_terms(3, [([1u8, 1, 0, 0], -3i64), ([0, 0, 0, 0], 11)]);
        assert_eq!(q.to_string(), "-3*x1*x2 + 11");
    }

    #[test]
    fn reduction_is_nonnegative() {
        let p = IntPoly::from_univariate(&[-1, 7, 3]);
        let r = p.reduce_mod(7);
        assert_eq!(r, vec![([0, 0, 0, 0], 6), ([2, 0, 0, 0], 3)]);
    }
}
