//! Plain-text map descriptions.
//!
//! ```text
//! # comment
//! dim = 3
//! degree = 2
//! f1 = x1^2 + 2*x1*x2 - 3*x1*x3 + 11
//! f2 = ...
//! f3 = ...
//! start = 1, 2, 3
//! ```
//!
//! One `key = value` per line. Keys:
//!
//! * `dim` (required): dimension `1..=4`.
//! * `degree` (required): must equal the actual degree of the map.
//! * `num`, `den`: a rational map of P^1 in the variable `x`; `den`
//!   defaults to `1`. Only valid with `dim = 1`.
//! * `f1` .. `fd`: components of a polynomial self-map of A^d in the
//!   variables `x1` .. `xd` (`x` is accepted when `dim = 1`).
//! * `start` (optional): comma separated start point. Coordinates are
//!   integers, `a/b` rationals or `inf` (the last two only for P^1 maps).
//!
//! Polynomials are sums of terms; a term is an optional integer followed by
//! variables with optional `^exponent`, joined by `*` or juxtaposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::poly::{IntPoly, MAX_VARS};
use super::{IntegerPolySystem, IntegerUniMap, MapError, RationalPoint};

#[derive(Debug, Clone)]
pub enum MapKind {
    Uni(IntegerUniMap),
    System(IntegerPolySystem),
}

impl MapKind {
    pub fn dimension(&self) -> usize {
        match self {
            MapKind::Uni(_) => 1,
            MapKind::System(s) => s.dimension(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MapDescription {
    pub map: MapKind,
    pub start: Option<Vec<RationalPoint>>,
    /// The source text, kept so experiment metadata can hash it.
    pub text: String,
}

fn err(line: usize, msg: impl Into<String>) -> MapError {
    MapError::Parse { line, msg: msg.into() }
}

pub fn parse_map(text: &str) -> Result<MapDescription, MapError> {
    let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| err(i + 1, format!("expected `key = value`, got `{line}`")))?;
        let key = k.trim().to_ascii_lowercase();
        if fields.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
            return Err(err(i + 1, format!("duplicate key `{key}`")));
        }
    }
    let take_int = |key: &str| -> Result<(usize, i64), MapError> {
        let (line, v) = fields.get(key).ok_or_else(|| err(0, format!("missing `{key}`")))?;
        let n = v.parse::<i64>().map_err(|_| err(*line, format!("`{key}` must be an integer")))?;
        Ok((*line, n))
    };
    let (dline, dim) = take_int("dim")?;
    if dim < 1 || dim as usize > MAX_VARS {
        return Err(err(dline, format!("dim must be in 1..={MAX_VARS}")));
    }
    let dim = dim as usize;
    let (degline, degree) = take_int("degree")?;

    for key in fields.keys() {
        let known = matches!(key.as_str(), "dim" | "degree" | "num" | "den" | "start")
            || key.strip_prefix('f').and_then(|s| s.parse::<usize>().ok()).is_some_and(|k| (1..=dim).contains(&k));
        if !known {
            let line = fields[key].0;
            return Err(err(line, format!("unknown key `{key}`")));
        }
    }

    let map = if let Some((line, num)) = fields.get("num") {
        if dim != 1 {
            return Err(err(*line, "`num`/`den` require dim = 1"));
        }
        let f = univariate(&parse_poly(num, 1).map_err(|m| err(*line, m))?);
        let g = match fields.get("den") {
            Some((l, den)) => univariate(&parse_poly(den, 1).map_err(|m| err(*l, m))?),
            None => vec![1],
        };
        let m = IntegerUniMap::new(&f, &g)?;
        if m.degree() as i64 != degree {
            return Err(err(degline, format!("declared degree {degree}, map has degree {}", m.degree())));
        }
        MapKind::Uni(m)
    } else {
        let mut comps = Vec::with_capacity(dim);
        for k in 1..=dim {
            let key = format!("f{k}");
            let (line, src) = fields.get(&key).ok_or_else(|| err(0, format!("missing `{key}`")))?;
            comps.push(parse_poly(src, dim).map_err(|m| err(*line, m))?);
        }
        let sys = IntegerPolySystem::new(comps)?;
        if sys.degree() as i64 != degree {
            return Err(err(degline, format!("declared degree {degree}, map has degree {}", sys.degree())));
        }
        MapKind::System(sys)
    };

    let start = match fields.get("start") {
        None => None,
        Some((line, s)) => {
            let pts = s
                .split(',')
                .map(|t| t.trim().parse::<RationalPoint>().map_err(|m| err(*line, m)))
                .collect::<Result<Vec<_>, _>>()?;
            if pts.len() != dim {
                return Err(err(*line, format!("start has {} coordinates, dim is {dim}", pts.len())));
            }
            if matches!(map, MapKind::System(_)) && pts.iter().any(|p| p.as_integer().is_none()) {
                return Err(err(*line, "affine start coordinates must be integers"));
            }
            Some(pts)
        }
    };
    Ok(MapDescription { map, start, text: text.to_string() })
}

fn univariate(p: &IntPoly) -> Vec<i64> {
    let deg = p.degree().unwrap_or(0) as usize;
    let mut v = vec![0i64; deg + 1];
    for (e, c) in p.terms() {
        v[e[0] as usize] = i64::try_from(c).expect("coefficient fits in i64");
    }
    v
}

/// Renders a P^1 map in the format read by [`parse_map`].
pub fn format_uni_map(map: &IntegerUniMap, start: Option<RationalPoint>, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str(&format!(
        "dim = 1\ndegree = {}\nnum = {}\nden = {}\n",
        map.degree(),
        map.numerator_poly(),
        map.denominator_poly()
    ));
    if let Some(s) = start {
        out.push_str(&format!("start = {s}\n"));
    }
    out
}

/// Parses a polynomial in `x` (dim 1) or `x1..xd`.
pub fn parse_poly(src: &str, dim: usize) -> Result<IntPoly, String> {
    let s: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = IntPoly::zero(dim);
    let mut i = 0;
    while i < s.len() {
        let mut sign = 1i64;
        if i > 0 || s[i] == '+' || s[i] == '-' {
            match s[i] {
                '+' => {}
                '-' => sign = -1,
                c => return Err(format!("expected `+` or `-`, found `{c}`")),
            }
            i += 1;
        }
        let mut coeff = BigInt::from(sign);
        let mut exps = [0u8; MAX_VARS];
        let mut any = false;
        loop {
            if i < s.len() && s[i] == '*' && any {
                i += 1;
            }
            if i >= s.len() {
                break;
            }
            if s[i].is_ascii_digit() {
                let st = i;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[st..i].iter().collect::<String>().parse().unwrap();
                coeff *= n;
            } else if s[i] == 'x' {
                i += 1;
                if i < s.len() && s[i] == '_' {
                    i += 1;
                }
                let st = i;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                let var = if st == i {
                    if dim != 1 {
                        return Err("bare `x` is only valid for dim = 1".into());
                    }
                    0
                } else {
                    let k: usize = s[st..i].iter().collect::<String>().parse().map_err(|_| "bad variable index")?;
                    if k == 0 || k > dim {
                        return Err(format!("variable x{k} out of range for dim = {dim}"));
                    }
                    k - 1
                };
                let mut pow = 1u32;
                if i < s.len() && s[i] == '^' {
                    i += 1;
                    let st = i;
                    while i < s.len() && s[i].is_ascii_digit() {
                        i += 1;
                    }
                    pow = s[st..i].iter().collect::<String>().parse().map_err(|_| "bad exponent")?;
                }
                let e = exps[var] as u32 + pow;
                exps[var] = u8::try_from(e).map_err(|_| "exponent too large")?;
            } else {
                break;
            }
            any = true;
        }
        if !any {
            return Err(format!("expected a term at position {i}"));
        }
        out.add_term(exps, coeff);
    }
    Ok(out)
}
