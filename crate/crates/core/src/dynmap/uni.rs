use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::IntPoly;
use super::MapError;
use crate::ffield::{FpElement, Modulus, Prime};

/// A rational map of P^1 over Q, `[X:Y] -> [F(X,Y) : G(X,Y)]`.
///
/// Coefficient vectors are stored lowest degree first and padded to the
/// common degree `d`, so `num[i]` is the coefficient of `X^i Y^(d-i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerUniMap {
    num: Vec<i64>,
    den: Vec<i64>,
    degree: usize,
    resultant: BigInt,
}

fn trimmed_degree(c: &[i64]) -> Option<usize> {
    c.iter().rposition(|&v| v != 0)
}

impl IntegerUniMap {
    /// `F/G` from affine coefficient lists (lowest degree first).
    pub fn new(num: &[i64], den: &[i64]) -> Result<Self, MapError> {
        let dn = trimmed_degree(num);
        let dd = trimmed_degree(den);
        let degree = match (dn, dd) {
            (None, _) | (_, None) => return Err(MapError::NotCoprime),
            (Some(a), Some(b)) => a.max(b),
        };
        if degree == 0 {
            return Err(MapError::ConstantMap);
        }
        let pad = |c: &[i64]| {
            let mut v = c[..c.len().min(degree + 1)].to_vec();
            v.resize(degree + 1, 0);
            v
        };
        let num = pad(num);
        let den = pad(den);
        let resultant = homogeneous_resultant(&num, &den);
        if resultant.is_zero() {
            return Err(MapError::NotCoprime);
        }
        Ok(IntegerUniMap { num, den, degree, resultant })
    }

    pub fn polynomial(coeffs: &[i64]) -> Result<Self, MapError> {
        Self::new(coeffs, &[1])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator(&self) -> &[i64] {
        &self.num
    }

    pub fn denominator(&self) -> &[i64] {
        &self.den
    }

    /// Resultant of the homogeneous pair `(F, G)` over Z.
    pub fn resultant(&self) -> &BigInt {
        &self.resultant
    }

    /// True when the denominator is a nonzero constant.
    pub fn is_polynomial(&self) -> bool {
        self.den[1..].iter().all(|&c| c == 0)
    }

    pub fn numerator_poly(&self) -> IntPoly {
        IntPoly::from_univariate(&self.num)
    }

    pub fn denominator_poly(&self) -> IntPoly {
        IntPoly::from_univariate(&self.den)
    }

    /// Reduction modulo `p`. Succeeds exactly when `2 <= d < p` and the
    /// resultant is a p-adic unit (which also forces the content of `(F, G)`
    /// to be a unit).
    pub fn reduce(&self, p: Prime) -> Result<ReducedUniMap, MapError> {
        if self.degree < 2 {
            return Err(MapError::DegreeTooSmall(self.degree));
        }
        if self.degree as u64 >= p.as_u64() {
            return Err(MapError::DegreeVsChar(p.get()));
        }
        let pm = BigInt::from(p.get());
        if (&self.resultant % &pm).is_zero() {
            return Err(MapError::BadReduction(p.get()));
        }
        let m = p.modulus();
        let red = |c: &[i64]| c.iter().map(|&v| m.from_i64(v)).collect::<Vec<u64>>();
        Ok(ReducedUniMap::from_parts(m, red(&self.num), red(&self.den)))
    }
}

/// Sylvester resultant of two binary forms of the same formal degree.
pub(crate) fn homogeneous_resultant(f: &[i64], g: &[i64]) -> BigInt {
    let d = f.len() - 1;
    debug_assert_eq!(g.len(), d + 1);
    let n = 2 * d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..d {
        for k in 0..=d {
            m[row][row + k] = BigInt::from(f[d - k]);
            m[d + row][row + k] = BigInt::from(g[d - k]);
        }
    }
    bareiss_det(m)
}

/// Fraction-free Gaussian elimination.
pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// A point of P^1(F_p) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Affine(FpElement),
    Infinity,
}

impl ProjPoint {
    pub fn affine(x: i64, p: Prime) -> Self {
        ProjPoint::Affine(FpElement::from_i64(x, p))
    }

    /// Packed orbit state: the residue, or `p` for the point at infinity.
    pub fn to_state(self, p: Prime) -> u32 {
        match self {
            ProjPoint::Affine(x) => x.residue(),
            ProjPoint::Infinity => p.get(),
        }
    }

    pub fn from_state(state: u32, p: Prime) -> Self {
        if state == p.get() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Affine(FpElement::from_i64(state as i64, p))
        }
    }
}

/// The reduction of an [`IntegerUniMap`] at a prime of good reduction.
#[derive(Debug, Clone)]
pub struct ReducedUniMap {
    m: Modulus,
    f: Vec<u64>,
    g: Vec<u64>,
    /// `F / g0` when `G = g0` is constant; lets polynomial maps skip inversion.
    monic_fast: Option<Vec<u64>>,
}

#[inline]
fn horner(m: &Modulus, c: &[u64], x: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| m.add(m.mul(acc, x), a))
}

/// Coefficients of the formal derivative.
fn derivative(m: &Modulus, c: &[u64]) -> Vec<u64> {
    c.iter().enumerate().skip(1).map(|(i, &a)| m.mul(m.reduce(i as u64), a)).collect()
}

impl ReducedUniMap {
    fn from_parts(m: Modulus, f: Vec<u64>, g: Vec<u64>) -> Self {
        let monic_fast = if g[1..].iter().all(|&c| c == 0) {
            let inv = m.inv(g[0]).expect("constant denominator is a unit under good reduction");
            Some(f.iter().map(|&a| m.mul(a, inv)).collect())
        } else {
            None
        };
        ReducedUniMap { m, f, g, monic_fast }
    }

    pub fn prime(&self) -> Prime {
        self.m.prime()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.m
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.monic_fast.is_some()
    }

    /// One step on the packed state (`p` encodes infinity).
    #[inline]
    pub fn step(&self, state: u32) -> u32 {
        let p = self.m.value();
        let x = state as u64;
        if x == p {
            let d = self.degree();
            return match (self.f[d], self.g[d]) {
                (_, 0) => p as u32,
                (a, b) => self.m.mul(a, self.m.inv(b).unwrap()) as u32,
            };
        }
        if let Some(fast) = &self.monic_fast {
            return horner(&self.m, fast, x) as u32;
        }
        let gx = horner(&self.m, &self.g, x);
        if gx == 0 {
            return p as u32;
        }
        let fx = horner(&self.m, &self.f, x);
        self.m.mul(fx, self.m.inv(gx).unwrap()) as u32
    }

    /// Projective evaluation `[F(z) : G(z)]`.
    pub fn eval(&self, z: ProjPoint) -> ProjPoint {
        let p = self.prime();
        ProjPoint::from_state(self.step(z.to_state(p)), p)
    }

    /// Wronskian `F'G - FG'` at an affine coordinate.
    fn wronskian_affine(&self, x: u64) -> u64 {
        let m = &self.m;
        let df = derivative(m, &self.f);
        let dg = derivative(m, &self.g);
        let lhs = m.mul(horner(m, &df, x), horner(m, &self.g, x));
        let rhs = m.mul(horner(m, &self.f, x), horner(m, &dg, x));
        m.sub(lhs, rhs)
    }

    /// Whether the Wronskian vanishes at `z` (chart swapped at infinity).
    pub fn is_critical(&self, z: ProjPoint) -> bool {
        match z {
            ProjPoint::Affine(x) => self.wronskian_affine(x.residue() as u64) == 0,
            ProjPoint::Infinity => {
                // in w = 1/x the map reads F(1,w)/G(1,w); its Wronskian at w = 0
                let d = self.degree();
                let m = &self.m;
                m.sub(m.mul(self.f[d - 1], self.g[d]), m.mul(self.f[d], self.g[d - 1])) == 0
            }
        }
    }

    /// Exhaustive scan of the `p + 1` points of P^1(F_p).
    pub fn critical_points(&self) -> Vec<ProjPoint> {
        let p = self.prime();
        (0..=p.get()).map(|s| ProjPoint::from_state(s, p)).filter(|&z| self.is_critical(z)).collect()
    }

    /// Affine derivative `W(z) / G(z)^2`. Both `z` and its image must be affine.
    pub fn derivative_eval(&self, z: ProjPoint) -> Result<FpElement, MapError> {
        let x = match z {
            ProjPoint::Affine(x) => x.residue() as u64,
            ProjPoint::Infinity => return Err(MapError::Chart),
        };
        let m = &self.m;
        let gx = horner(m, &self.g, x);
        let inv = m.inv(gx).ok_or(MapError::Chart)?;
        let w = self.wronskian_affine(x);
        Ok(m.element(m.mul(w, m.mul(inv, inv))))
    }

    /// Reduced numerator coefficients (lowest degree first).
    pub fn numerator(&self) -> &[u64] {
        &self.f
    }

    pub fn denominator(&self) -> &[u64] {
        &self.g
    }
}
