//! Rational and quadratic points on the base locus `X`, and the map from a
//! conjugate pair of points to `𝒢`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::brauer::{BrauerGenerator, CliffordData};
use crate::error::{Error, Result};
use crate::exact::int::{is_square_rat, squarefree_class};
use crate::exact::linalg::bilinear;
use crate::exact::{rat, Field, Rat};
use crate::localfield::places_above;
use crate::localfield::{hilbert, Half, Place};
use crate::numberfield::{QuadElem, QuadField};
use crate::obstruction::PointP1;
use crate::pencil::{Pencil, QuadraticForm5};

/// A point of `X` with coordinates in `Q` or in `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticPoint {
    /// `None` for a rational point.
    pub field: Option<QuadField>,
    pub coords: Vec<QuadElem>,
}

impl QuadraticPoint {
    pub fn rational(coords: Vec<Rat>) -> QuadraticPoint {
        QuadraticPoint { field: None, coords: coords.into_iter().map(QuadElem::rational).collect() }
    }

    pub fn d(&self) -> Option<&BigInt> {
        self.field.as_ref().map(|k| &k.d)
    }

    pub fn conjugate(&self) -> QuadraticPoint {
        let coords = match &self.field {
            Some(k) => self.coords.iter().map(|x| k.conj(x)).collect(),
            None => self.coords.clone(),
        };
        QuadraticPoint { field: self.field.clone(), coords }
    }

    fn arith(&self) -> QuadField {
        // Q(√−1) arithmetic is harmless on rational coordinates
        self.field.clone().unwrap_or(QuadField { d: BigInt::from(-1) })
    }

    /// Scales so that the first nonzero coordinate is 1.
    pub fn normalized(&self) -> QuadraticPoint {
        let k = self.arith();
        let Some(lead) = self.coords.iter().find(|x| !k.is_zero(x)) else { return self.clone() };
        let inv = k.inv(lead);
        QuadraticPoint { field: self.field.clone(), coords: self.coords.iter().map(|x| k.mul(x, &inv)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.a.is_zero() && x.b.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        let n = self.normalized();
        n.coords.iter().all(QuadElem::is_rational)
    }
}

impl fmt::Display for QuadraticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.arith();
        let parts: Vec<String> = self.coords.iter().map(|x| k.render(x)).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

fn parse_error(s: &str, why: &str) -> Error {
    Error::Parse(format!("coordinate {s:?}: {why}"))
}

/// Parses `a`, `b*sqrt(n)`, `a + b*sqrt(n)`, `-sqrt(n)` and similar, with
/// rational `a`, `b`. Returns `(a, b, n)`; `n` is `None` when no root occurs.
pub fn parse_coordinate(s: &str) -> Result<(Rat, Rat, Option<BigInt>)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(parse_error(s, "empty"));
    }
    // split into signed terms at top-level + and -
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > start && !t[..i].ends_with('*') && !t[..i].ends_with('/') => {
                terms.push(&t[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&t[start..]);
    let (mut a, mut b, mut root) = (Rat::zero(), Rat::zero(), None::<BigInt>);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(r) => (rat(-1), r),
            None => (rat(1), term.strip_prefix('+').unwrap_or(term)),
        };
        if let Some(pos) = body.find("sqrt(") {
            let close = body[pos..].find(')').ok_or_else(|| parse_error(s, "unclosed sqrt("))? + pos;
            let n: BigInt = body[pos + 5..close].parse().map_err(|_| parse_error(s, "sqrt of a non-integer"))?;
            let before = body[..pos].trim_end_matches('*');
            let after = &body[close + 1..];
            let mut coeff = if before.is_empty() { rat(1) } else { parse_rat(before).ok_or_else(|| parse_error(s, "bad coefficient"))? };
            if let Some(den) = after.strip_prefix('/') {
                coeff /= parse_rat(den).ok_or_else(|| parse_error(s, "bad denominator"))?;
            } else if let Some(c) = after.strip_prefix('*') {
                coeff *= parse_rat(c).ok_or_else(|| parse_error(s, "bad coefficient"))?;
            } else if !after.is_empty() {
                return Err(parse_error(s, "trailing characters"));
            }
            // √n = m√n₀ with n₀ squarefree
            let n0 = squarefree_class(&Rat::from_integer(n.clone()));
            let m = crate::numberfield::rat_sqrt(&Rat::new(n.clone(), n0.clone())).ok_or_else(|| parse_error(s, "bad radicand"))?;
            if n0.is_one() {
                a += sign * coeff * m;
                continue;
            }
            match &root {
                Some(r) if r != &n0 => return Err(parse_error(s, "two different square roots")),
                _ => root = Some(n0),
            }
            b += sign * coeff * m;
        } else {
            a += sign * parse_rat(body).ok_or_else(|| parse_error(s, "not a rational number"))?;
        }
    }
    Ok((a, b, root))
}

fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (BigInt, BigInt) = (n.parse().ok()?, d.parse().ok()?);
            (!d.is_zero()).then(|| Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

/// Parses five coordinates; all square roots must generate the same field.
pub fn parse_point(coords: &[impl AsRef<str>]) -> Result<QuadraticPoint> {
    if coords.len() != 5 {
        return Err(Error::Parse(format!("expected 5 coordinates, got {}", coords.len())));
    }
    let parsed: Vec<(Rat, Rat, Option<BigInt>)> = coords.iter().map(|c| parse_coordinate(c.as_ref())).collect::<Result<_>>()?;
    let roots: BTreeSet<&BigInt> = parsed.iter().filter_map(|x| x.2.as_ref()).collect();
    if roots.len() > 1 {
        return Err(Error::Parse(format!("coordinates use several square roots: {roots:?}")));
    }
    let field = roots.into_iter().next().map(|d| QuadField::new(d.clone())).transpose()?;
    let pt = QuadraticPoint { field, coords: parsed.into_iter().map(|(a, b, _)| QuadElem { a, b }).collect() };
    if pt.is_zero() {
        return Err(Error::Parse("all coordinates are zero".into()));
    }
    Ok(pt)
}

fn form_at(f: &QuadraticForm5, k: &QuadField, x: &[QuadElem], y: &[QuadElem]) -> QuadElem {
    bilinear(k, &f.gram_in::<QuadField>(|r| QuadElem::rational(r.clone())), x, y)
}

/// Whether both forms of the pencil vanish at the point and at its
/// conjugate, exactly.
pub fn verify_point(p: &Pencil, pt: &QuadraticPoint) -> bool {
    if pt.coords.len() != 5 || pt.is_zero() {
        return false;
    }
    let k = pt.arith();
    [pt.clone(), pt.conjugate()]
        .iter()
        .all(|x| [p.q0(), p.qinf()].iter().all(|f| k.is_zero(&form_at(f, &k, &x.coords, &x.coords))))
}

/// `B_{Q₀}(x, x′)` and `B_{Q_∞}(x, x′)` for `x` and a second point `y`
/// (its conjugate when `y` is `None`). Both are rational for conjugate
/// pairs.
pub fn pair_values(p: &Pencil, x: &QuadraticPoint, y: Option<&QuadraticPoint>) -> Result<(Rat, Rat)> {
    let k = x.arith();
    let y = y.cloned().unwrap_or_else(|| x.conjugate());
    let b0 = form_at(p.q0(), &k, &x.coords, &y.coords);
    let bi = form_at(p.qinf(), &k, &x.coords, &y.coords);
    if !b0.b.is_zero() || !bi.b.is_zero() {
        return Err(Error::Inconsistent("bilinear values of a conjugate pair are not rational".into()));
    }
    Ok((b0.a, bi.a))
}

/// The point `t = [B_{Q₀}(x, x′) : −B_{Q_∞}(x, x′)]` of `P¹` under the
/// image of the pair `{x, x′}` in `𝒢`: the unique member containing the
/// line through `x` and `x′`.
pub fn pair_to_base_point(p: &Pencil, x: &QuadraticPoint, y: Option<&QuadraticPoint>) -> Result<PointP1> {
    if x.is_rational() && y.is_none() {
        return Err(Error::Domain(format!("{x} is rational: give a second point")));
    }
    let (b0, bi) = pair_values(p, x, y)?;
    match (b0.is_zero(), bi.is_zero()) {
        (true, true) => Err(Error::LineInX),
        (_, true) => Ok(PointP1::Infinity),
        _ => Ok(PointP1::Finite(-b0 / bi)),
    }
}

/// `inv_v β_T` at the pair, from the corestriction formula
/// `Cor_{k(T)/Q}(ε_T, −B_{Q_T}(x, x′)/B_{Q_∞}(x, x′))`, computed over the
/// places of `k(T)` above `v`.
pub fn pair_invariant(g: &BrauerGenerator, b0: &Rat, bi: &Rat, v: &Place) -> Result<Half> {
    if bi.is_zero() {
        return Err(Error::Undefined("the pair lies over t = ∞".into()));
    }
    match &g.clif {
        CliffordData::Split(_) => {
            let crate::brauer::Subscheme::Pair(t1, t2) = &g.t else { unreachable!("split data on a pair") };
            let mut s = Half::ZERO;
            for (e, ti) in g.eps_t.iter().zip([t1, t2]) {
                let u = -(b0 + ti * bi) / bi;
                if u.is_zero() {
                    return Err(Error::Undefined(format!("the pair lies over t = {ti} ∈ T")));
                }
                s += hilbert(&e.coeff(0), &u, v)?;
            }
            Ok(s)
        }
        CliffordData::Quadratic { model, .. } => {
            let k = &model.field;
            let e = model.to_quad(&g.eps_t[0]);
            let theta = model.theta();
            let num = k.add(&QuadElem::rational(b0.clone()), &k.mul(&theta, &QuadElem::rational(bi.clone())));
            let u = k.neg(&k.div(&num, &QuadElem::rational(bi.clone())));
            let mut s = Half::ZERO;
            for w in places_above(k, v) {
                s += w.hilbert(&e, &u)?;
            }
            Ok(s)
        }
    }
}

/// Coordinates as `(a, b)` integer pairs, for the box search.
type IntPoint = [(i64, i64); 5];

fn int_forms(p: &Pencil) -> Option<[[i64; 15]; 2]> {
    let (a, b) = p.integral_forms();
    let conv = |f: &QuadraticForm5| -> Option<[i64; 15]> {
        let v: Vec<i64> = f.coeffs().iter().map(|c| c.to_integer().to_i64()).collect::<Option<_>>()?;
        v.try_into().ok()
    };
    Some([conv(&a)?, conv(&b)?])
}

/// `f(x)` as `A + B√d`, in `i128`.
fn eval_int(c: &[i64; 15], x: &IntPoint, d: i128) -> (i128, i128) {
    let (mut ra, mut rb) = (0i128, 0i128);
    let mut k = 0;
    for i in 0..5 {
        for j in i..5 {
            let cij = c[k] as i128;
            k += 1;
            if cij == 0 {
                continue;
            }
            let (a1, b1) = (x[i].0 as i128, x[i].1 as i128);
            let (a2, b2) = (x[j].0 as i128, x[j].1 as i128);
            ra += cij * (a1 * a2 + d * b1 * b2);
            rb += cij * (a1 * b2 + a2 * b1);
        }
    }
    (ra, rb)
}

/// Box search over coordinates `a + b√d` with `|a|, |b| ≤ bound`
/// (`d = 1` searches rational points). Sound but not complete; results
/// are normalized, deduplicated up to scaling and conjugation, and sorted.
pub fn search_points(p: &Pencil, d: &BigInt, bound: u32) -> Result<Vec<QuadraticPoint>> {
    if bound == 0 {
        return Err(Error::Domain("height bound must be at least 1".into()));
    }
    let field = if d.is_one() { None } else { Some(QuadField::new(d.clone())?) };
    let forms = int_forms(p).ok_or_else(|| Error::Domain("coefficients too large for the box search".into()))?;
    let b = bound as i64;
    let coord_range: Vec<(i64, i64)> = if field.is_some() {
        (-b..=b).flat_map(|a| (-b..=b).map(move |c| (a, c))).collect()
    } else {
        (-b..=b).map(|a| (a, 0)).collect()
    };
    let di = d.to_i128().ok_or_else(|| Error::Domain("d too large".into()))?;
    let n = coord_range.len();
    let found: Vec<IntPoint> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i0| {
            let coord_range = &coord_range;
            let mut out = Vec::new();
            let mut idx = [i0, 0, 0, 0, 0];
            loop {
                let x: IntPoint = std::array::from_fn(|k| coord_range[idx[k]]);
                if x.iter().any(|c| *c != (0, 0))
                    && leading_is_canonical(&x)
                    && eval_int(&forms[0], &x, di) == (0, 0)
                    && eval_int(&forms[1], &x, di) == (0, 0)
                {
                    out.push(x);
                }
                // odometer over the last four coordinates
                let mut k = 4;
                loop {
                    idx[k] += 1;
                    if idx[k] < n {
                        break;
                    }
                    idx[k] = 0;
                    k -= 1;
                    if k == 0 {
                        return out.into_iter();
                    }
                }
            }
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in found {
        let pt = QuadraticPoint {
            field: field.clone(),
            coords: x.iter().map(|&(a, c)| QuadElem { a: rat(a), b: rat(c) }).collect(),
        }
        .normalized();
        let key = canonical_key(&pt);
        if seen.insert(key) {
            out.push(pt);
        }
    }
    out.sort_by_key(canonical_key);
    Ok(out)
}

/// Cuts the search by sign: the first nonzero coordinate has a positive
/// leading part.
fn leading_is_canonical(x: &IntPoint) -> bool {
    match x.iter().find(|c| **c != (0, 0)) {
        Some(&(a, b)) => a > 0 || (a == 0 && b > 0),
        None => false,
    }
}

fn key_of(pt: &QuadraticPoint) -> Vec<(Rat, Rat)> {
    pt.coords.iter().map(|x| (x.a.clone(), x.b.clone())).collect()
}

/// Ordering key, the same for a point and its conjugate.
fn canonical_key(pt: &QuadraticPoint) -> Vec<(Rat, Rat)> {
    let a = key_of(&pt.normalized());
    let b = key_of(&pt.conjugate().normalized());
    let h = |k: &Vec<(Rat, Rat)>| k.iter().map(|(x, y)| x.abs() + y.abs()).fold(rat(0), |s, v| s + v);
    std::cmp::min_by(a, b, |x, y| h(x).cmp(&h(y)).then_with(|| x.cmp(y)))
}

/// Whether `ε_T` becomes a square over `k(T) ⊗ K` for `K = Q(√d)`: for a
/// rational class `ε`, iff `ε ≡ d` or `ε ≡ 1`.
pub fn eps_square_over(g: &BrauerGenerator, d: &BigInt) -> bool {
    is_square_rat(&g.eps) || is_square_rat(&(&g.eps / Rat::from_integer(d.clone())))
}
