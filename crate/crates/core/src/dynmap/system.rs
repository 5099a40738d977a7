use super::poly::{poly_det, total_degree, Exponents, IntPoly, MAX_DEGREE, MAX_VARS};
use super::MapError;
use crate::ffield::{FpElement, Modulus, Prime};

/// Orbit state for A^d(F_p): coordinates in `[0, p)`, unused slots zero.
pub type SysState = [u32; MAX_VARS];

/// A polynomial self-map of A^d over Z with non-constant Jacobian determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPolySystem {
    components: Vec<IntPoly>,
    jacobian_det: IntPoly,
    degree: u32,
}

impl IntegerPolySystem {
    pub fn new(components: Vec<IntPoly>) -> Result<Self, MapError> {
        let dim = components.len();
        if dim == 0 || dim > MAX_VARS {
            return Err(MapError::Dimension(dim));
        }
        if components.iter().any(|c| c.nvars() != dim) {
            return Err(MapError::Dimension(dim));
        }
        let degree = components.iter().filter_map(IntPoly::degree).max().unwrap_or(0);
        if degree > MAX_DEGREE {
            return Err(MapError::DegreeCap(degree));
        }
        let jac: Vec<Vec<IntPoly>> = components.iter().map(|f| (0..dim).map(|j| f.partial(j)).collect()).collect();
        let jacobian_det = poly_det(&jac);
        if jacobian_det.is_constant() {
            return Err(MapError::ConstantJacobian);
        }
        Ok(IntegerPolySystem { components, jacobian_det, degree })
    }

    /// Components given as `(exponents, coefficient)` term lists.
    pub fn from_terms(dim: usize, comps: &[Vec<(Exponents, i64)>]) -> Result<Self, MapError> {
        Self::new(comps.iter().map(|t| IntPoly::from_terms(dim, t.iter().copied())).collect())
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[IntPoly] {
        &self.components
    }

    /// `det(d f_i / d x_j)` as a polynomial over Z.
    pub fn jacobian_det_poly(&self) -> &IntPoly {
        &self.jacobian_det
    }

    /// Reduction modulo `p`; requires `p > degree` and a Jacobian
    /// determinant that stays non-constant modulo `p`.
    pub fn reduce(&self, p: Prime) -> Result<ReducedSystem, MapError> {
        if p.as_u64() <= self.degree as u64 {
            return Err(MapError::DegreeVsChar(p.get()));
        }
        let det_mod = self.jacobian_det.reduce_mod(p.as_u64());
        if det_mod.iter().all(|(e, _)| total_degree(e) == 0) {
            return Err(MapError::DegenerateJacobian(p.get()));
        }
        let dim = self.dimension();
        let comps: Vec<_> = self.components.iter().map(|c| c.reduce_mod(p.as_u64())).collect();
        let partials: Vec<_> =
            self.components.iter().flat_map(|c| (0..dim).map(move |j| c.partial(j).reduce_mod(p.as_u64()))).collect();
        Ok(ReducedSystem {
            dim,
            m: p.modulus(),
            map: EvalPlan::new(dim, &comps, p.modulus()),
            jacobian: EvalPlan::new(dim, &partials, p.modulus()),
        })
    }
}

/// Straight-line evaluation of a list of polynomials sharing one monomial
/// table. Monomials are sorted by degree; each one is its parent times a
/// single variable, so the table costs one multiplication per entry.
#[derive(Debug, Clone)]
struct EvalPlan {
    /// `(parent, variable, reduce)` for every monomial after the constant
    /// one. Entries with `reduce == false` are left below 2^32 unreduced.
    monomials: Vec<(usize, usize, bool)>,
    /// Per output: `(monomial index, coefficient)`.
    outputs: Vec<Vec<(usize, u64)>>,
    /// Largest multiple of `p` not exceeding 2^63.
    fold: u64,
    small: Option<SmallQuadratic>,
}

/// Dense form of a degree <= 2 plan in `D` variables with `M` monomials
/// `[1, x_1 .. x_D, x_i x_j (i <= j)]`, used for `p < 2^16`: monomials stay
/// below 2^32 unreduced and a full row of products sums below 2^52, so each
/// output needs a single reduction.
#[derive(Debug, Clone)]
struct Dense<const D: usize, const M: usize> {
    rows: Vec<[u64; M]>,
}

impl<const D: usize, const M: usize> Dense<D, M> {
    fn new(polys: &[Vec<(Exponents, u64)>]) -> Self {
        let slot = |e: &Exponents| -> usize {
            let vars: Vec<usize> = (0..D).flat_map(|v| std::iter::repeat_n(v, e[v] as usize)).collect();
            match vars[..] {
                [] => 0,
                [v] => 1 + v,
                // pairs (i, j), i <= j, in lexicographic order
                [i, j] => 1 + D + i * D - i * (i + 1) / 2 + j,
                _ => unreachable!(),
            }
        };
        let rows = polys
            .iter()
            .map(|terms| {
                let mut row = [0u64; M];
                for (e, c) in terms {
                    row[slot(e)] = *c;
                }
                row
            })
            .collect();
        Dense { rows }
    }

    #[inline(always)]
    fn eval(&self, m: &Modulus, x: &[u64], out: &mut [u64]) {
        let mut mono = [0u64; M];
        mono[0] = 1;
        mono[1..=D].copy_from_slice(&x[..D]);
        let mut k = 1 + D;
        for i in 0..D {
            for j in i..D {
                mono[k] = x[i] * x[j];
                k += 1;
            }
        }
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = m.reduce(row.iter().zip(&mono).map(|(c, v)| c * v).sum());
        }
    }
}

#[derive(Debug, Clone)]
enum SmallQuadratic {
    D1(Dense<1, 3>),
    D2(Dense<2, 6>),
    D3(Dense<3, 10>),
    D4(Dense<4, 15>),
}

impl SmallQuadratic {
    fn new(dim: usize, polys: &[Vec<(Exponents, u64)>], p: u64) -> Option<Self> {
        if p >= 1 << 16 || polys.iter().flatten().any(|(e, _)| total_degree(e) > 2) {
            return None;
        }
        Some(match dim {
            1 => SmallQuadratic::D1(Dense::new(polys)),
            2 => SmallQuadratic::D2(Dense::new(polys)),
            3 => SmallQuadratic::D3(Dense::new(polys)),
            _ => SmallQuadratic::D4(Dense::new(polys)),
        })
    }

    #[inline(always)]
    fn eval(&self, m: &Modulus, x: &[u64], out: &mut [u64]) {
        match self {
            SmallQuadratic::D1(q) => q.eval(m, x, out),
            SmallQuadratic::D2(q) => q.eval(m, x, out),
            SmallQuadratic::D3(q) => q.eval(m, x, out),
            SmallQuadratic::D4(q) => q.eval(m, x, out),
        }
    }
}

impl EvalPlan {
    fn new(dim: usize, polys: &[Vec<(Exponents, u64)>], m: Modulus) -> Self {
        let mut exps: Vec<Exponents> = polys.iter().flatten().map(|(e, _)| *e).collect();
        exps.push([0; MAX_VARS]);
        exps.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then(a.cmp(b)));
        exps.dedup();
        // closing the table under "drop one variable" guarantees every parent exists
        let mut i = 0;
        while i < exps.len() {
            let e = exps[i];
            if let Some(v) = (0..dim).find(|&v| e[v] > 0) {
                let mut parent = e;
                parent[v] -= 1;
                if !exps.contains(&parent) {
                    exps.push(parent);
                    exps.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then(a.cmp(b)));
                    i = 0;
                    continue;
                }
            }
            i += 1;
        }
        let index = |e: &Exponents| exps.iter().position(|x| x == e).unwrap();
        let p_bits = 64 - (m.value() - 1).leading_zeros();
        // bit length bound of each scratch entry
        let mut bits = vec![p_bits];
        let monomials = exps
            .iter()
            .skip(1)
            .map(|e| {
                let v = (0..dim).find(|&v| e[v] > 0).unwrap();
                let mut parent = *e;
                parent[v] -= 1;
                let pi = index(&parent);
                let raw = if pi == 0 { p_bits } else { bits[pi] + p_bits };
                let reduce = raw > 32;
                bits.push(if reduce { p_bits } else { raw });
                (pi, v, reduce)
            })
            .collect();
        let outputs = polys.iter().map(|terms| terms.iter().map(|(e, c)| (index(e), *c)).collect()).collect();
        let p = m.value();
        EvalPlan { monomials, outputs, fold: (1u64 << 63) / p * p, small: SmallQuadratic::new(dim, polys, p) }
    }

    fn scratch_len(&self) -> usize {
        self.monomials.len() + 1
    }

    #[inline(always)]
    fn eval(&self, m: &Modulus, x: &[u64], scratch: &mut [u64], out: &mut [u64]) {
        if let Some(q) = &self.small {
            return q.eval(m, x, out);
        }
        scratch[0] = 1;
        for (k, &(parent, var, reduce)) in self.monomials.iter().enumerate() {
            scratch[k + 1] = if parent == 0 {
                x[var]
            } else if reduce {
                m.mul(scratch[parent], x[var])
            } else {
                scratch[parent] * x[var]
            };
        }
        for (o, terms) in out.iter_mut().zip(&self.outputs) {
            // scratch entries are below max(p, 2^32) and c < p < 2^31, so each
            // product is below 2^63; keep the running sum below 2^63 too
            let mut acc = 0u64;
            for &(idx, c) in terms {
                acc += c * scratch[idx];
                if acc >= 1 << 63 {
                    acc -= self.fold;
                }
            }
            *o = m.reduce(acc);
        }
    }
}

/// The reduction of an [`IntegerPolySystem`] modulo a prime.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    dim: usize,
    m: Modulus,
    map: EvalPlan,
    jacobian: EvalPlan,
}

/// Reusable buffers so the hot loop never allocates.
#[derive(Debug, Clone)]
pub struct SysScratch {
    mono: Vec<u64>,
    jmono: Vec<u64>,
    x: [u64; MAX_VARS],
    out: Vec<u64>,
}

impl ReducedSystem {
    /// Builds a reduced system from already reduced components without the
    /// Jacobian check.
    pub fn from_components(p: Prime, dim: usize, comps: &[IntPoly]) -> Result<Self, MapError> {
        if comps.len() != dim || dim == 0 || dim > MAX_VARS {
            return Err(MapError::Dimension(comps.len()));
        }
        let m = p.modulus();
        let reduced: Vec<_> = comps.iter().map(|c| c.reduce_mod(p.as_u64())).collect();
        let partials: Vec<_> =
            comps.iter().flat_map(|c| (0..dim).map(move |j| c.partial(j).reduce_mod(p.as_u64()))).collect();
        Ok(ReducedSystem { dim, m, map: EvalPlan::new(dim, &reduced, m), jacobian: EvalPlan::new(dim, &partials, m) })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> Prime {
        self.m.prime()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.m
    }

    pub fn scratch(&self) -> SysScratch {
        SysScratch {
            mono: vec![0; self.map.scratch_len()],
            jmono: vec![0; self.jacobian.scratch_len()],
            x: [0; MAX_VARS],
            out: vec![0; self.dim * self.dim],
        }
    }

    /// One map step on a packed state.
    #[inline]
    pub fn step(&self, s: SysState, scratch: &mut SysScratch) -> SysState {
        let mut x = [0u64; MAX_VARS];
        for k in 0..self.dim {
            x[k] = s[k] as u64;
        }
        let mut out = [0u64; MAX_VARS];
        self.map.eval(&self.m, &x, &mut scratch.mono, &mut out[..self.dim]);
        let mut next = [0u32; MAX_VARS];
        for k in 0..self.dim {
            next[k] = out[k] as u32;
        }
        next
    }

    /// Jacobian determinant at a packed state.
    pub fn jacobian_det_state(&self, s: SysState, scratch: &mut SysScratch) -> u64 {
        for (x, &v) in scratch.x.iter_mut().zip(&s[..self.dim]) {
            *x = v as u64;
        }
        let d = self.dim;
        self.jacobian.eval(&self.m, &scratch.x, &mut scratch.jmono, &mut scratch.out[..d * d]);
        det_mod(&self.m, &mut scratch.out[..d * d], d)
    }

    pub fn state_from(&self, x: &[FpElement]) -> Result<SysState, MapError> {
        if x.len() != self.dim {
            return Err(MapError::Dimension(x.len()));
        }
        let mut s = [0u32; MAX_VARS];
        for (slot, v) in s.iter_mut().zip(x) {
            if v.modulus() != self.prime() {
                return Err(MapError::ModulusMismatch);
            }
            *slot = v.residue();
        }
        Ok(s)
    }

    pub fn state_from_ints(&self, x: &[i64]) -> Result<SysState, MapError> {
        if x.len() != self.dim {
            return Err(MapError::Dimension(x.len()));
        }
        let mut s = [0u32; MAX_VARS];
        for (slot, &v) in s.iter_mut().zip(x) {
            *slot = self.m.from_i64(v) as u32;
        }
        Ok(s)
    }

    pub fn state_to_elements(&self, s: SysState) -> Vec<FpElement> {
        s[..self.dim].iter().map(|&v| self.m.element(v as u64)).collect()
    }

    /// `(f_1(x), ..., f_d(x))`.
    pub fn eval(&self, x: &[FpElement]) -> Result<Vec<FpElement>, MapError> {
        let s = self.state_from(x)?;
        let mut scratch = self.scratch();
        Ok(self.state_to_elements(self.step(s, &mut scratch)))
    }

    /// Matrix of partial derivatives `d f_i / d x_j` at `x`, row major.
    pub fn jacobian_matrix(&self, x: &[FpElement]) -> Result<Vec<Vec<FpElement>>, MapError> {
        let s = self.state_from(x)?;
        let mut scratch = self.scratch();
        for (x, &v) in scratch.x.iter_mut().zip(&s[..self.dim]) {
            *x = v as u64;
        }
        let d = self.dim;
        self.jacobian.eval(&self.m, &scratch.x, &mut scratch.jmono, &mut scratch.out[..d * d]);
        Ok(scratch.out[..d * d].chunks(d).map(|row| row.iter().map(|&v| self.m.element(v)).collect()).collect())
    }

    pub fn jacobian_det(&self, x: &[FpElement]) -> Result<FpElement, MapError> {
        let s = self.state_from(x)?;
        let mut scratch = self.scratch();
        Ok(self.m.element(self.jacobian_det_state(s, &mut scratch)))
    }
}

/// Determinant of a row-major `d x d` matrix over F_p by elimination.
/// Destroys the input.
pub(crate) fn det_mod(m: &Modulus, a: &mut [u64], d: usize) -> u64 {
    let mut det = 1u64;
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| a[r * d + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in 0..d {
                a.swap(piv * d + k, col * d + k);
            }
            det = m.neg(det);
        }
        let pv = a[col * d + col];
        det = m.mul(det, pv);
        let inv = m.inv(pv).unwrap();
        for r in col + 1..d {
            let factor = m.mul(a[r * d + col], inv);
            if factor == 0 {
                continue;
            }
            for k in col..d {
                let t = m.mul(factor, a[col * d + k]);
                a[r * d + k] = m.sub(a[r * d + k], t);
            }
        }
    }
    det
}
