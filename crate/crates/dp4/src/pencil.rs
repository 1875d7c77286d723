//! Pencils of quadrics in P⁴: the forms Q₀ and Q_∞, normalization so that
//! ∞ is not a singular member, the singular locus 𝒮 with its vertices and
//! discriminant classes ε_s, and the smoothness test for the base locus.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::linalg::{self, Matrix};
use crate::exact::{factor, interpolate, rat, Field, Poly, Rat, QQ};
use crate::numberfield::NumberField;

/// Index of the monomial `x_i x_j` (`i ≤ j`) in the 15-term order
/// x₀², x₀x₁, …, x₀x₄, x₁², …, x₄².
pub fn monomial_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    5 * i - i * i.saturating_sub(1) / 2 + (j - i)
}

/// A quadratic form in x₀..x₄ with rational coefficients, kept both as its
/// 15 monomial coefficients and as the Gram matrix with `q(x) = xᵀMx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm5 {
    coeffs: Vec<Rat>,
    gram: Matrix<Rat>,
}

fn half() -> Rat {
    Rat::new(1.into(), 2.into())
}

impl QuadraticForm5 {
    pub fn from_coeffs(c: &[Rat]) -> Result<QuadraticForm5> {
        if c.len() != 15 {
            return Err(Error::Parse(format!("expected 15 coefficients, got {}", c.len())));
        }
        let mut gram = vec![vec![Rat::zero(); 5]; 5];
        for i in 0..5 {
            for j in i..5 {
                let a = c[monomial_index(i, j)].clone();
                if i == j {
                    gram[i][i] = a;
                } else {
                    let h = a * half();
                    gram[i][j] = h.clone();
                    gram[j][i] = h;
                }
            }
        }
        Ok(QuadraticForm5 { coeffs: c.to_vec(), gram })
    }

    pub fn from_ints(c: &[i64]) -> QuadraticForm5 {
        let c: Vec<Rat> = c.iter().map(|&x| rat(x)).collect();
        QuadraticForm5::from_coeffs(&c).expect("15 coefficients")
    }

    pub fn from_gram(m: &Matrix<Rat>) -> Result<QuadraticForm5> {
        if m.len() != 5 || m.iter().any(|r| r.len() != 5) {
            return Err(Error::Parse("Gram matrix must be 5×5".into()));
        }
        let mut c = vec![Rat::zero(); 15];
        for i in 0..5 {
            for j in i..5 {
                if m[i][j] != m[j][i] {
                    return Err(Error::Parse(format!("Gram matrix not symmetric at ({i},{j})")));
                }
                c[monomial_index(i, j)] = if i == j { m[i][i].clone() } else { &m[i][j] * rat(2) };
            }
        }
        QuadraticForm5::from_coeffs(&c)
    }

    pub fn zero() -> QuadraticForm5 {
        QuadraticForm5::from_coeffs(&vec![Rat::zero(); 15]).unwrap()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn gram(&self) -> &Matrix<Rat> {
        &self.gram
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        linalg::bilinear(&QQ, &self.gram, x, x)
    }

    /// `B(x, y)` with `B(x, x) = q(x)`.
    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        linalg::bilinear(&QQ, &self.gram, x, y)
    }

    pub fn det(&self) -> Rat {
        linalg::det(&QQ, &self.gram)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&QQ, &self.gram)
    }

    pub fn lin(&self, a: &Rat, other: &QuadraticForm5, b: &Rat) -> QuadraticForm5 {
        let c: Vec<Rat> = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        QuadraticForm5::from_coeffs(&c).unwrap()
    }

    pub fn scale(&self, a: &Rat) -> QuadraticForm5 {
        self.lin(a, &QuadraticForm5::zero(), &Rat::zero())
    }

    /// The form `y ↦ q(A y)`.
    pub fn substitute(&self, a: &Matrix<Rat>) -> QuadraticForm5 {
        let at: Matrix<Rat> = (0..5).map(|i| (0..5).map(|j| a[j][i].clone()).collect()).collect();
        QuadraticForm5::from_gram(&linalg::congruence(&QQ, &self.gram, &at)).unwrap()
    }

    /// Gram matrix with entries mapped into another field.
    pub fn gram_in<F: Field>(&self, lift: impl Fn(&Rat) -> F::Elem) -> Matrix<F::Elem> {
        self.gram.iter().map(|r| r.iter().map(&lift).collect()).collect()
    }

    /// Whether `self` is a rational multiple of `other`.
    pub fn proportional(&self, other: &QuadraticForm5) -> bool {
        let Some(i) = other.coeffs.iter().position(|c| !c.is_zero()) else {
            return true;
        };
        let r = &self.coeffs[i] / &other.coeffs[i];
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| *a == &r * b)
    }

    /// Human-readable form, e.g. `x0*x1 - x2^2 + 2*x3^2`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in 0..5 {
            for j in i..5 {
                let c = &self.coeffs[monomial_index(i, j)];
                if c.is_zero() {
                    continue;
                }
                let mono = if i == j { format!("x{i}^2") } else { format!("x{i}*x{j}") };
                let neg = c < &Rat::zero();
                let a = if neg { -c.clone() } else { c.clone() };
                let sep = match (out.is_empty(), neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                let body = if a.is_one() { mono } else { format!("{a}*{mono}") };
                out.push_str(sep);
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for QuadraticForm5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The pencil `Q₀ + T·Q_∞`, normalized so that `det Q_∞ ≠ 0` unless every
/// member is singular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    q0: QuadraticForm5,
    qinf: QuadraticForm5,
    mobius: [[Rat; 2]; 2],
    pub label: Option<String>,
}

impl Pencil {
    /// Pencil spanned by `Q₀` and `Q₁`, with `Q_∞ = Q₁ − Q₀`.
    pub fn normalize(q0: &QuadraticForm5, q1: &QuadraticForm5) -> Result<Pencil> {
        let qinf = q1.lin(&rat(1), q0, &rat(-1));
        Pencil::from_qinf(q0, &qinf)
    }

    /// Pencil given directly as `Q₀ + T·Q_∞`. If `Q_∞` is singular it is
    /// replaced by `Q₀ + aQ_∞` for the first `a` in 1, −1, 2, −2, … making it
    /// nonsingular; the old parameter is `aT′/(T′ + 1)`.
    pub fn from_qinf(q0: &QuadraticForm5, qinf: &QuadraticForm5) -> Result<Pencil> {
        if qinf.is_zero() || q0.proportional(qinf) {
            return Err(Error::DegeneratePencil("the two forms are proportional".into()));
        }
        let id = [[rat(1), rat(0)], [rat(0), rat(1)]];
        if !qinf.det().is_zero() {
            return Ok(Pencil { q0: q0.clone(), qinf: qinf.clone(), mobius: id, label: None });
        }
        // det(Q₀ + aQ_∞) has degree ≤ 4 in a here, so six trials decide it
        for k in 1..=3i64 {
            for a in [rat(k), rat(-k)] {
                let cand = q0.lin(&rat(1), qinf, &a);
                if !cand.det().is_zero() {
                    let mobius = [[a, rat(0)], [rat(1), rat(1)]];
                    return Ok(Pencil { q0: q0.clone(), qinf: cand, mobius, label: None });
                }
            }
        }
        // every member is singular; kept so that check_smooth can report it
        Ok(Pencil { q0: q0.clone(), qinf: qinf.clone(), mobius: id, label: None })
    }

    /// Every member singular (`det(M₀ + T·M_∞) ≡ 0`).
    pub fn is_degenerate(&self) -> bool {
        self.qinf.det().is_zero()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Pencil {
        self.label = Some(label.into());
        self
    }

    pub fn q0(&self) -> &QuadraticForm5 {
        &self.q0
    }

    pub fn qinf(&self) -> &QuadraticForm5 {
        &self.qinf
    }

    /// `[[a, b], [c, d]]` with original `T = (aT′ + b)/(cT′ + d)`.
    pub fn mobius(&self) -> &[[Rat; 2]; 2] {
        &self.mobius
    }

    pub fn is_identity_normalized(&self) -> bool {
        self.mobius[0][1].is_zero() && self.mobius[1][0].is_zero()
    }

    /// The member `Q₀ + t·Q_∞`.
    pub fn member(&self, t: &Rat) -> QuadraticForm5 {
        self.q0.lin(&rat(1), &self.qinf, t)
    }

    /// Gram matrix of `Q₀ + t·Q_∞` for `t` in a field containing Q.
    pub fn gram_at<F: Field>(&self, k: &F, t: &F::Elem, lift: impl Fn(&Rat) -> F::Elem) -> Matrix<F::Elem> {
        let (g0, gi) = (self.q0.gram(), self.qinf.gram());
        (0..5)
            .map(|i| (0..5).map(|j| k.add(&lift(&g0[i][j]), &k.mul(t, &lift(&gi[i][j])))).collect())
            .collect()
    }

    /// `det(M₀ + T·M_∞)` (not normalized).
    pub fn det_poly(&self) -> Poly {
        let xs: Vec<Rat> = (0..=5).map(rat).collect();
        let ys: Vec<Rat> = xs.iter().map(|t| self.member(t).det()).collect();
        interpolate(&xs, &ys)
    }

    /// The monic quintic `f` cutting out 𝒮 (zero for a degenerate pencil).
    pub fn f(&self) -> Poly {
        let d = self.det_poly();
        if d.is_zero() {
            return d;
        }
        d.monic()
    }

    /// Both forms as an integral pair (common denominators cleared, each
    /// form scaled by a positive rational). The pencil and 𝒮 are unchanged.
    pub fn integral_forms(&self) -> (QuadraticForm5, QuadraticForm5) {
        let clear = |q: &QuadraticForm5| {
            let l = q.coeffs().iter().fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
            q.scale(&Rat::from_integer(l))
        };
        (clear(&self.q0), clear(&self.qinf))
    }

    /// Checks (†): f squarefree, every singular member of rank exactly 4,
    /// and no vertex lying on `Q_∞`.
    pub fn check_smooth(&self) -> SmoothnessReport {
        if self.is_degenerate() {
            let failures = vec![SmoothnessFailure::EveryMemberSingular];
            return SmoothnessReport { smooth: false, f: Poly::zero(), failures, points: vec![] };
        }
        let f = self.f();
        let fac = factor(&f).expect("nonzero quintic");
        let mut failures = Vec::new();
        let mut points = Vec::new();
        for (g, mult) in &fac.factors {
            if *mult > 1 {
                failures.push(SmoothnessFailure::NotSquarefree { factor: g.to_string(), multiplicity: *mult });
            }
            match singular_point(self, g) {
                Ok(p) => {
                    if p.field.is_zero(&p.qinf_at_vertex) {
                        failures.push(SmoothnessFailure::VertexOnEveryQuadric { factor: g.to_string() });
                    }
                    points.push(p);
                }
                Err(rank) => failures.push(SmoothnessFailure::RankDeficient { factor: g.to_string(), rank }),
            }
        }
        SmoothnessReport { smooth: failures.is_empty(), f, failures, points }
    }

    /// The singular locus; fails with a diagnostic when (†) does not hold.
    pub fn singular_locus(&self) -> Result<SingularLocus> {
        let rep = self.check_smooth();
        if !rep.smooth {
            let msg: Vec<String> = rep.failures.iter().map(|x| x.to_string()).collect();
            return Err(Error::NotSmooth(msg.join("; ")));
        }
        Ok(SingularLocus { f: rep.f, points: rep.points })
    }
}

/// Why a pencil fails (†).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothnessFailure {
    /// 𝒮 is not reduced.
    NotSquarefree { factor: String, multiplicity: u32 },
    /// A singular member has rank below 4.
    RankDeficient { factor: String, rank: usize },
    /// The vertex of a rank-4 member lies on every quadric of the pencil.
    VertexOnEveryQuadric { factor: String },
    /// `det(M₀ + T·M_∞)` vanishes identically.
    EveryMemberSingular,
}

impl fmt::Display for SmoothnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothnessFailure::NotSquarefree { factor, multiplicity } => {
                write!(f, "f has the repeated factor ({factor})^{multiplicity}")
            }
            SmoothnessFailure::RankDeficient { factor, rank } => {
                write!(f, "member over {factor} = 0 has rank {rank}")
            }
            SmoothnessFailure::VertexOnEveryQuadric { factor } => {
                write!(f, "vertex over {factor} = 0 lies on every quadric")
            }
            SmoothnessFailure::EveryMemberSingular => f.write_str("every member of the pencil is singular"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub f: Poly,
    pub failures: Vec<SmoothnessFailure>,
    /// Rank-4 points found along the way (all of 𝒮 when smooth).
    pub points: Vec<SingularPoint>,
}

/// A closed point `s` of 𝒮.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    /// Irreducible factor of f defining `s`.
    pub factor: Poly,
    /// `k(s) = Q[T]/(factor)`; θ is the class of T.
    pub field: NumberField,
    /// Vertex of `Q_s`, scaled so its first nonzero coordinate is 1.
    pub vertex: Vec<Poly>,
    /// Index of that coordinate; ε_s is computed on the complement.
    pub pivot: usize,
    /// Representative of ε_s ∈ k(s)^×/k(s)^×2.
    pub eps: Poly,
    pub qinf_at_vertex: Poly,
}

impl SingularPoint {
    pub fn degree(&self) -> usize {
        self.factor.deg()
    }

    /// The rational value of `s` when `deg s = 1`.
    pub fn rational_root(&self) -> Option<Rat> {
        (self.degree() == 1).then(|| -self.factor.coeff(0))
    }

    /// ε_s as a rational when `s` is rational.
    pub fn eps_rational(&self) -> Option<Rat> {
        (self.degree() == 1).then(|| self.eps.coeff(0))
    }

    pub fn eps_is_square(&self) -> bool {
        self.field.is_square(&self.eps).expect("ε_s ≠ 0")
    }

    /// `N_{k(s)/Q}(ε_s)`.
    pub fn eps_norm(&self) -> Rat {
        self.field.norm(&self.eps).expect("ε_s ≠ 0")
    }

    /// Gram matrix of `Q_s` over `k(s)`.
    pub fn gram(&self, p: &Pencil) -> Matrix<Poly> {
        let k = &self.field;
        p.gram_at(k, &k.theta(), |r| Poly::constant(r.clone()))
    }

    /// The 4×4 Gram matrix on the coordinate complement of the vertex.
    pub fn complement_gram(&self, p: &Pencil) -> Matrix<Poly> {
        complement(&self.gram(p), self.pivot)
    }
}

fn complement<E: Clone>(m: &Matrix<E>, skip: usize) -> Matrix<E> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Builds the point over the factor `g`, or returns the rank when it is not 4.
fn singular_point(p: &Pencil, g: &Poly) -> std::result::Result<SingularPoint, usize> {
    let k = NumberField::from_irreducible(g.monic());
    let m = p.gram_at(&k, &k.theta(), |r| Poly::constant(r.clone()));
    let rk = linalg::rank(&k, &m);
    if rk != 4 {
        return Err(rk);
    }
    let mut v = linalg::kernel(&k, &m).pop().expect("corank one");
    let pivot = v.iter().position(|x| !k.is_zero(x)).expect("nonzero kernel vector");
    let inv = k.inv(&v[pivot]);
    for x in v.iter_mut() {
        *x = k.mul(x, &inv);
    }
    let eps = linalg::det(&k, &complement(&m, pivot));
    let gi = p.qinf.gram_in::<NumberField>(|r| Poly::constant(r.clone()));
    let qv = linalg::bilinear(&k, &gi, &v, &v);
    Ok(SingularPoint { factor: k.modulus().clone(), field: k, vertex: v, pivot, eps, qinf_at_vertex: qv })
}

/// 𝒮 with its points, grouped by irreducible factor of f.
#[derive(Clone, Debug)]
pub struct SingularLocus {
    pub f: Poly,
    pub points: Vec<SingularPoint>,
}

impl SingularLocus {
    pub fn rational_points(&self) -> impl Iterator<Item = &SingularPoint> {
        self.points.iter().filter(|s| s.degree() == 1)
    }

    /// `N_{k(𝒮)/Q}(ε_𝒮)`.
    pub fn total_norm(&self) -> Rat {
        self.points.iter().map(|s| s.eps_norm()).fold(rat(1), |a, b| a * b)
    }

    /// The point over the rational value `t`, if any.
    pub fn at_rational(&self, t: &Rat) -> Option<&SingularPoint> {
        self.rational_points().find(|s| s.rational_root().as_ref() == Some(t))
    }
}

/// Applies `x ↦ A x` to both forms.
pub fn change_coordinates(p: &Pencil, a: &Matrix<Rat>) -> Result<Pencil> {
    if linalg::det(&QQ, a).is_zero() {
        return domain("coordinate change must be invertible");
    }
    let mut out = Pencil::from_qinf(&p.q0.substitute(a), &p.qinf.substitute(a))?;
    out.label = p.label.clone();
    Ok(out)
}
