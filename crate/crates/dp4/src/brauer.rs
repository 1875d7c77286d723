//! Br(𝒢)/Br₀(𝒢) from the square classes ε_s, the Clifford classes C_T and
//! C′_T, the place sets R_T and R′_T, and the parity criterion.
//!
//! Everything is expressed in the normalized coordinate T of the pencil
//! (see [`Pencil::mobius`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::exact::int::{is_square_rat, primes_of_rat};
use crate::exact::linalg::{diagonalize, Matrix};
use crate::exact::{rat, Field, Poly, Rat, QQ};
use crate::localfield::{clifford_rank4, hilbert, is_local_square, isotropy, places_above, Half, Place, SymbolSum};
use crate::numberfield::{QuadElem, QuadraticModel};
use crate::pencil::{Pencil, SingularLocus, SingularPoint};

/// A degree-2 subscheme `T ⊆ 𝒮`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subscheme {
    /// Two rational points, smaller first.
    Pair(Rat, Rat),
    /// One point of degree 2, by its monic minimal polynomial.
    Quadratic(Poly),
}

impl Subscheme {
    /// `g_T = Π_{t ∈ T} (T − t)`, monic of degree 2.
    pub fn g(&self) -> Poly {
        match self {
            Subscheme::Pair(a, b) => &Poly::linear_root(a) * &Poly::linear_root(b),
            Subscheme::Quadratic(m) => m.clone(),
        }
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, Subscheme::Pair(..))
    }
}

impl fmt::Display for Subscheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subscheme::Pair(a, b) => write!(f, "{{{a}, {b}}}"),
            Subscheme::Quadratic(m) => write!(f, "{{{m} = 0}}"),
        }
    }
}

/// Diagonalized rank-4 part of `Q_T` over `k(T)`.
#[derive(Clone, Debug, PartialEq)]
pub enum CliffordData {
    /// One diagonal over Q for each rational point.
    Split(Vec<Vec<Rat>>),
    Quadratic { model: QuadraticModel, diag: Vec<QuadElem> },
}

impl CliffordData {
    /// Multiplies every diagonal entry by `c`: the data of `c·Q_T`.
    pub fn scaled(&self, c: &Rat) -> CliffordData {
        match self {
            CliffordData::Split(ds) => CliffordData::Split(ds.iter().map(|d| d.iter().map(|x| x * c).collect()).collect()),
            CliffordData::Quadratic { model, diag } => CliffordData::Quadratic {
                model: model.clone(),
                diag: diag.iter().map(|x| model.field.mul(x, &QuadElem::rational(c.clone()))).collect(),
            },
        }
    }

    /// `inv_v(Cor Clif(Q_T)) = Σ_{w | v} inv_w(Clif(Q_T))`.
    pub fn inv(&self, v: &Place) -> Half {
        match self {
            CliffordData::Split(ds) => ds.iter().map(|d| clifford_rank4(&QQ, d).inv(v)).sum(),
            CliffordData::Quadratic { model, diag } => {
                let sym = clifford_rank4(&model.field, diag);
                places_above(&model.field, v).iter().map(|w| sym.inv(w)).sum()
            }
        }
    }

    /// Finite places where some symbol entry is not a unit.
    fn bad_primes(&self) -> BTreeSet<BigInt> {
        let mut out = BTreeSet::new();
        match self {
            CliffordData::Split(ds) => {
                for x in ds.iter().flatten() {
                    out.extend(primes_of_rat(x));
                }
            }
            CliffordData::Quadratic { model, diag } => {
                for x in diag {
                    out.extend(primes_of_rat(&model.field.norm(x)));
                }
                out.extend(primes_of_rat(&Rat::from_integer(model.field.d.clone())));
            }
        }
        out
    }

    /// The Clifford symbols written out, for reports.
    pub fn symbols(&self) -> Vec<(String, String)> {
        match self {
            CliffordData::Split(ds) => ds
                .iter()
                .flat_map(|d| clifford_rank4(&QQ, d).terms)
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            CliffordData::Quadratic { model, diag } => clifford_rank4(&model.field, diag)
                .terms
                .iter()
                .map(|(a, b)| (model.field.render(a), model.field.render(b)))
                .collect(),
        }
    }

    /// Diagonal entries written out, for reports.
    pub fn diagonals(&self) -> Vec<Vec<String>> {
        match self {
            CliffordData::Split(ds) => ds.iter().map(|d| d.iter().map(Rat::to_string).collect()).collect(),
            CliffordData::Quadratic { model, diag } => vec![diag.iter().map(|x| model.field.render(x)).collect()],
        }
    }
}

/// Invariants of a class in Br(Q) on a finite set of places, nonzero ones
/// listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    /// Every place examined; the class is unramified elsewhere.
    pub checked: BTreeSet<Place>,
    pub nonzero: BTreeSet<Place>,
}

impl LocalInvariants {
    pub fn inv(&self, v: &Place) -> Half {
        Half(self.nonzero.contains(v))
    }

    /// Sum of all invariants; zero by reciprocity.
    pub fn total(&self) -> Half {
        Half(self.nonzero.len() % 2 == 1)
    }
}

/// A set of places with its parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTSet {
    pub places: Vec<Place>,
}

impl RTSet {
    pub fn odd(&self) -> bool {
        self.places.len() % 2 == 1
    }

    pub fn parity(&self) -> &'static str {
        if self.odd() {
            "odd"
        } else {
            "even"
        }
    }
}

/// `C′_T` and `R′_T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPrime {
    pub c_prime: LocalInvariants,
    pub set: RTSet,
}

/// A degree-2 subscheme `T` with `N(ε_T)` square, carrying what is needed
/// to compute with `β_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrauerGenerator {
    pub t: Subscheme,
    /// Indices into the singular locus.
    pub members: Vec<usize>,
    /// A rational `ε` with `ε·ε_T` a square in `k(T)`.
    pub eps: Rat,
    /// `ε_T` itself, one representative per point of `T`.
    pub eps_t: Vec<Poly>,
    /// Discriminant class of `k(T)`; 1 when `T` is reducible.
    pub delta: BigInt,
    pub clif: CliffordData,
    pub vertex: Vec<Vec<Poly>>,
    pub qinf_at_vertex: Vec<Poly>,
    /// `N_{k(T)/Q}(Q_∞(v_T))`.
    pub qinf_norm: Rat,
}

fn rank4_diag(m: &Matrix<Rat>) -> Vec<Rat> {
    diagonalize(&QQ, m, false)
}

impl BrauerGenerator {
    /// Builds the data for `T` made of the given points of the locus (two
    /// rational points, or one of degree 2).
    pub fn new(p: &Pencil, locus: &SingularLocus, members: &[usize]) -> Result<BrauerGenerator> {
        let pts: Vec<&SingularPoint> = members.iter().map(|&i| &locus.points[i]).collect();
        let norm: Rat = pts.iter().map(|s| s.eps_norm()).product();
        if !is_square_rat(&norm) {
            return domain("N(ε_T) is not a square");
        }
        let vertex = pts.iter().map(|s| s.vertex.clone()).collect();
        let qinf_at_vertex: Vec<Poly> = pts.iter().map(|s| s.qinf_at_vertex.clone()).collect();
        let eps_t = pts.iter().map(|s| s.eps.clone()).collect();
        let lift = |m: Matrix<Poly>| -> Matrix<Rat> { m.iter().map(|r| r.iter().map(|x| x.coeff(0)).collect()).collect() };
        match pts.as_slice() {
            [a, b] if a.degree() == 1 && b.degree() == 1 => {
                let (ra, rb) = (a.rational_root().unwrap(), b.rational_root().unwrap());
                let (first, second, ia, ib) = if ra <= rb { (ra, rb, members[0], members[1]) } else { (rb, ra, members[1], members[0]) };
                let (pa, pb) = (&locus.points[ia], &locus.points[ib]);
                let diag = vec![rank4_diag(&lift(pa.complement_gram(p))), rank4_diag(&lift(pb.complement_gram(p)))];
                Ok(BrauerGenerator {
                    t: Subscheme::Pair(first, second),
                    members: vec![ia, ib],
                    eps: pa.eps_rational().unwrap(),
                    eps_t: vec![pa.eps.clone(), pb.eps.clone()],
                    delta: BigInt::one(),
                    clif: CliffordData::Split(diag),
                    vertex: vec![pa.vertex.clone(), pb.vertex.clone()],
                    qinf_at_vertex: vec![pa.qinf_at_vertex.clone(), pb.qinf_at_vertex.clone()],
                    qinf_norm: pa.qinf_at_vertex.coeff(0) * pb.qinf_at_vertex.coeff(0),
                })
            }
            [s] if s.degree() == 2 => {
                let model = QuadraticModel::new(&s.factor)?;
                let k = &model.field;
                let m: Matrix<QuadElem> =
                    s.complement_gram(p).iter().map(|r| r.iter().map(|x| model.to_quad(x)).collect()).collect();
                let diag = diagonalize(k, &m, false);
                let e = model.to_quad(&s.eps);
                let eps = k.rational_class(&e).ok_or_else(|| Error::Inconsistent("ε_T has no rational class".into()))?;
                Ok(BrauerGenerator {
                    t: Subscheme::Quadratic(s.factor.clone()),
                    members: members.to_vec(),
                    eps,
                    eps_t,
                    delta: k.d.clone(),
                    qinf_norm: k.norm(&model.to_quad(&s.qinf_at_vertex)),
                    clif: CliffordData::Quadratic { model, diag },
                    vertex,
                    qinf_at_vertex,
                })
            }
            _ => domain("T must be two rational points or one point of degree 2"),
        }
    }

    pub fn is_reducible(&self) -> bool {
        self.t.is_reducible()
    }

    pub fn g(&self) -> Poly {
        self.t.g()
    }

    /// Whether `ε_T` is a square in every completion of `k(T)` above `v`.
    pub fn eps_square_at(&self, v: &Place) -> bool {
        match &self.clif {
            CliffordData::Split(_) => is_local_square(&self.eps, v).expect("ε ≠ 0"),
            CliffordData::Quadratic { model, .. } => {
                let e = QuadElem::rational(self.eps.clone());
                places_above(&model.field, v).iter().all(|w| w.is_square(&e).expect("ε ≠ 0"))
            }
        }
    }

    /// ∞, 2 and every prime at which `C_T`, `ε` or `Δ_T` might ramify.
    pub fn candidate_places(&self) -> BTreeSet<Place> {
        let mut primes = self.clif.bad_primes();
        primes.insert(BigInt::from(2));
        primes.extend(primes_of_rat(&self.eps));
        let mut out: BTreeSet<Place> = primes.into_iter().map(Place::Finite).collect();
        out.insert(Place::Real);
        out
    }

    /// `inv_v(C_T)`.
    pub fn c_inv(&self, v: &Place) -> Half {
        self.clif.inv(v)
    }

    /// The local invariant map of `C_T`.
    pub fn clifford_class(&self) -> LocalInvariants {
        let checked = self.candidate_places();
        let nonzero = checked.iter().filter(|v| !self.c_inv(v).is_zero()).cloned().collect();
        LocalInvariants { checked, nonzero }
    }

    /// `R_T = {v : ε_T ∈ k(T_v)^×2 and inv_v(C_T) ≠ 0}`.
    pub fn r_set(&self) -> RTSet {
        let places = self
            .candidate_places()
            .into_iter()
            .filter(|v| self.eps_square_at(v) && !self.c_inv(v).is_zero())
            .collect();
        RTSet { places }
    }

    /// `R_T` again, as the places where an odd number of the components of
    /// `Q_{T_v}` have no smooth local point.
    pub fn r_set_by_isotropy(&self) -> RTSet {
        let places = self
            .candidate_places()
            .into_iter()
            .filter(|v| {
                let anisotropic = match &self.clif {
                    CliffordData::Split(ds) => ds.iter().filter(|d| !isotropy(d.as_slice(), v)).count(),
                    CliffordData::Quadratic { model, diag } => {
                        places_above(&model.field, v).iter().filter(|w| !isotropy(diag.as_slice(), *w)).count()
                    }
                };
                anisotropic % 2 == 1
            })
            .collect();
        RTSet { places }
    }

    /// For `T` irreducible, the set `R_t` of places `w` of `L = k(T)` with
    /// `ε_t ∈ L_w^×2` and `inv_w Clif(Q_t) ≠ 0`, as `(v, #{w | v})` pairs.
    pub fn r_set_over_field(&self) -> Option<Vec<(Place, usize)>> {
        let CliffordData::Quadratic { model, diag } = &self.clif else { return None };
        let sym: SymbolSum<QuadElem> = clifford_rank4(&model.field, diag);
        let e = QuadElem::rational(self.eps.clone());
        let mut out = Vec::new();
        for v in self.candidate_places() {
            let n = places_above(&model.field, &v)
                .iter()
                .filter(|w| w.is_square(&e).expect("ε ≠ 0") && !sym.inv(*w).is_zero())
                .count();
            if n > 0 {
                out.push((v, n));
            }
        }
        Some(out)
    }

    /// The constant `−Δ_T·N(Q_∞(v_T))` in `C′_T = C_T + (ε, −Δ_T·N(Q_∞(v_T)))`.
    pub fn c_prime_twist(&self) -> Rat {
        -(Rat::from_integer(self.delta.clone()) * &self.qinf_norm)
    }

    /// `C′_T` and `R′_T = {v : ε_T ∉ k(T_v)^×2 and inv_v(C′_T) ≠ 0}`.
    pub fn r_prime_set(&self) -> Result<RPrime> {
        if self.eps_t_is_square() {
            return domain("ε_T is a square in k(T)");
        }
        let twist = self.c_prime_twist();
        let mut checked = self.candidate_places();
        checked.extend(primes_of_rat(&twist).into_iter().map(Place::Finite));
        let inv = |v: &Place| self.c_inv(v) + hilbert(&self.eps, &twist, v).expect("nonzero entries");
        let nonzero: BTreeSet<Place> = checked.iter().filter(|v| !inv(v).is_zero()).cloned().collect();
        let places = nonzero.iter().filter(|v| !self.eps_square_at(v)).cloned().collect();
        Ok(RPrime { c_prime: LocalInvariants { checked, nonzero }, set: RTSet { places } })
    }

    /// Whether `ε_T` is a square in `k(T)` (then `β_T = 0`).
    pub fn eps_t_is_square(&self) -> bool {
        match &self.clif {
            CliffordData::Split(_) => is_square_rat(&self.eps),
            CliffordData::Quadratic { model, .. } => {
                model.field.is_square(&QuadElem::rational(self.eps.clone())).expect("ε ≠ 0")
            }
        }
    }
}

/// `Br(𝒢)/Br₀(𝒢) ≅ (Z/2)^n` with a basis of generators.
#[derive(Clone, Debug)]
pub struct BrauerGroupOfG {
    pub n: usize,
    /// Points `s` with `ε_s` not a square (indices into the locus).
    pub nonsquare: Vec<usize>,
    /// A basis of `ker N` on the indicator space of `nonsquare`, as subsets.
    pub kernel: Vec<Vec<usize>>,
    pub generators: Vec<BrauerGenerator>,
    /// Every degree-2 `T` with `N(ε_T)` square and `ε_T` not a square, in
    /// preference order, with its class as a bitmask over `nonsquare`
    /// reduced modulo `ε_𝒮`.
    pub candidates: Vec<(BrauerGenerator, u32)>,
}

impl BrauerGroupOfG {
    /// The nonzero classes, each with the candidates representing it.
    pub fn classes(&self) -> Vec<(u32, Vec<&BrauerGenerator>)> {
        let mut by: BTreeMap<u32, Vec<&BrauerGenerator>> = BTreeMap::new();
        for (g, c) in &self.candidates {
            by.entry(*c).or_default().push(g);
        }
        by.into_iter().collect()
    }
}

fn canonical(mask: u32, full: u32) -> u32 {
    mask.min(mask ^ full)
}

/// Span of `vecs` over F₂, as a set.
fn span(vecs: &[u32]) -> BTreeSet<u32> {
    let mut s = BTreeSet::from([0u32]);
    for v in vecs {
        let add: Vec<u32> = s.iter().map(|x| x ^ v).collect();
        s.extend(add);
    }
    s
}

/// Computes `Br(𝒢)/Br₀(𝒢)` as `ker N / ⟨ε_𝒮⟩`, where `N` is the norm map
/// on `⊕⟨ε_s⟩`, and picks degree-2 generators: reducible `T` first, then
/// quadratic fields of smaller discriminant, then by the roots.
pub fn brauer_group(p: &Pencil, locus: &SingularLocus) -> Result<BrauerGroupOfG> {
    let nonsquare: Vec<usize> = (0..locus.points.len()).filter(|&i| !locus.points[i].eps_is_square()).collect();
    let norms: Vec<Rat> = nonsquare.iter().map(|&i| locus.points[i].eps_norm()).collect();
    let j = nonsquare.len();
    // ker N by brute force over subsets; |J| ≤ 5
    let in_kernel: Vec<u32> = (0u32..1 << j)
        .filter(|m| {
            let prod: Rat = (0..j).filter(|k| m & (1 << k) != 0).map(|k| norms[k].clone()).fold(rat(1), |a, b| a * b);
            is_square_rat(&prod)
        })
        .collect();
    let dim = in_kernel.len().trailing_zeros() as usize;
    if in_kernel.len() != 1 << dim {
        return Err(Error::Inconsistent("ker N is not a subgroup".into()));
    }
    let mut kernel_basis: Vec<u32> = Vec::new();
    for &m in &in_kernel {
        if !span(&kernel_basis).contains(&m) {
            kernel_basis.push(m);
        }
    }
    let full = if j == 0 { 0 } else { (1u32 << j) - 1 };
    if j > 0 && !in_kernel.contains(&full) {
        return Err(Error::Inconsistent("N(ε_𝒮) is not a square".into()));
    }
    let n = if j == 0 { 0 } else { dim - 1 };
    let to_set = |m: u32| -> Vec<usize> { (0..j).filter(|k| m & (1 << k) != 0).map(|k| nonsquare[k]).collect() };

    let mut raw: Vec<Vec<usize>> = Vec::new();
    let rational: Vec<usize> = nonsquare.iter().copied().filter(|&i| locus.points[i].degree() == 1).collect();
    for (a, &x) in rational.iter().enumerate() {
        for &y in &rational[a + 1..] {
            raw.push(vec![x, y]);
        }
    }
    for &i in &nonsquare {
        if locus.points[i].degree() == 2 {
            raw.push(vec![i]);
        }
    }
    let mut candidates: Vec<(BrauerGenerator, u32)> = Vec::new();
    for members in raw {
        let m = to_set_mask(&nonsquare, &members);
        if !in_kernel.contains(&m) {
            continue;
        }
        let g = BrauerGenerator::new(p, locus, &members)?;
        let c = canonical(m, full);
        candidates.push((g, c));
    }
    candidates.sort_by(|(a, _), (b, _)| preference_key(a).cmp(&preference_key(b)));

    let mut picked: Vec<u32> = Vec::new();
    let mut generators = Vec::new();
    for (g, c) in &candidates {
        if generators.len() == n {
            break;
        }
        let mut with_full = picked.clone();
        with_full.push(full);
        if !span(&with_full).contains(c) {
            picked.push(*c);
            generators.push(g.clone());
        }
    }
    if generators.len() != n {
        return Err(Error::Inconsistent(format!(
            "found {} degree-2 representatives for a group of rank {n}",
            generators.len()
        )));
    }
    Ok(BrauerGroupOfG { n, kernel: kernel_basis.into_iter().map(to_set).collect(), nonsquare, generators, candidates })
}

fn to_set_mask(nonsquare: &[usize], members: &[usize]) -> u32 {
    members.iter().fold(0u32, |acc, i| acc | (1 << nonsquare.iter().position(|j| j == i).expect("member of J")))
}

/// Sort key: reducible first, then `|Δ|`, then the roots or coefficients.
fn preference_key(g: &BrauerGenerator) -> (u8, BigInt, Vec<Rat>) {
    match &g.t {
        Subscheme::Pair(a, b) => (0, BigInt::zero(), vec![a.clone(), b.clone()]),
        Subscheme::Quadratic(m) => (1, g.delta.abs(), m.coeffs().to_vec()),
    }
}

/// Which of the conditions for `𝒢(A)^Br ≠ ∅` hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityVerdict {
    /// Every nontrivial class has a representative with `#R_T` even.
    pub condition1: bool,
    /// Every nontrivial class has a reducible representative.
    pub condition2: bool,
    /// Neither holds: the nontrivial class is represented only by
    /// irreducible `T`, all with `#R_T` odd.
    pub open_case: bool,
    /// Some representative has `#R_T` odd, so `β_T` is not constant on
    /// `𝒢(A)` and weak approximation fails.
    pub wa_obstructed: bool,
    /// For each nontrivial class, every representative `T` with `R_T`.
    pub classes: Vec<Vec<(String, RTSet)>>,
}

pub fn parity_criterion(b: &BrauerGroupOfG) -> ParityVerdict {
    let mut condition1 = true;
    let mut condition2 = true;
    let mut wa = false;
    let mut classes = Vec::new();
    for (c, reps) in b.classes() {
        if c == 0 {
            continue;
        }
        let sets: Vec<(String, RTSet)> = reps.iter().map(|g| (g.t.to_string(), g.r_set())).collect();
        condition1 &= sets.iter().any(|(_, r)| !r.odd());
        condition2 &= reps.iter().any(|g| g.is_reducible());
        wa |= sets.iter().any(|(_, r)| r.odd());
        classes.push(sets);
    }
    ParityVerdict { condition1, condition2, open_case: !(condition1 || condition2), wa_obstructed: wa, classes }
}

/// `C_s` for a point with `ε_s` a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantClass {
    pub point: usize,
    pub factor: Poly,
    /// Nonzero local invariants; `None` when `deg s ≥ 3` (no local fields
    /// of higher degree are implemented).
    pub invariants: Option<LocalInvariants>,
}

/// Generators `C_s` of the kernel of `Br(Q) → Br(X)`, one for each `s`
/// with `ε_s ∈ k(s)^×2`.
pub fn br_constant_kernel(p: &Pencil, locus: &SingularLocus) -> Result<Vec<ConstantClass>> {
    let mut out = Vec::new();
    for (i, s) in locus.points.iter().enumerate() {
        if !s.eps_is_square() {
            continue;
        }
        let clif = match s.degree() {
            1 => {
                let m: Matrix<Rat> = s.complement_gram(p).iter().map(|r| r.iter().map(|x| x.coeff(0)).collect()).collect();
                let d = rank4_diag(&m);
                Some(CliffordData::Split(vec![d]))
            }
            2 => {
                let model = QuadraticModel::new(&s.factor)?;
                let m: Matrix<QuadElem> =
                    s.complement_gram(p).iter().map(|r| r.iter().map(|x| model.to_quad(x)).collect()).collect();
                let diag = diagonalize(&model.field, &m, false);
                Some(CliffordData::Quadratic { model, diag })
            }
            _ => None,
        };
        let invariants = clif.map(|c| {
            let mut checked: BTreeSet<Place> = c.bad_primes().into_iter().map(Place::Finite).collect();
            checked.insert(Place::p(2));
            checked.insert(Place::Real);
            let nonzero = checked.iter().filter(|v| !c.inv(v).is_zero()).cloned().collect();
            LocalInvariants { checked, nonzero }
        });
        out.push(ConstantClass { point: i, factor: s.factor.clone(), invariants });
    }
    Ok(out)
}
