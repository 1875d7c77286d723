//! Mod-`p` analysis of integral models: ranks of quadratic forms over
//! finite fields, Tian's weighted multiplicities, and a certificate that
//! the special fiber is split.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::exact::int::{is_prime, val_int};
use crate::exact::linalg::{kernel, rank, Matrix};
use crate::exact::modp::{Fp, PolyP};
use crate::exact::{Field, Rat};
use crate::pencil::{monomial_index, Pencil, QuadraticForm5};

/// The field `F_{p^r} = F_p[x]/(m)`; elements are trimmed coefficient
/// vectors of degree `< r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    pub fp: Fp,
    pub r: usize,
    pub modulus: PolyP,
}

impl Gf {
    /// `F_{p^r}` with the first monic irreducible modulus in lexicographic
    /// order of coefficients.
    pub fn new(p: u64, r: usize) -> Gf {
        assert!(r >= 1 && is_prime(&BigInt::from(p)));
        let fp = Fp::new(p);
        if r == 1 {
            return Gf { fp, r, modulus: vec![0, 1] };
        }
        let mut c = vec![0u64; r];
        loop {
            let mut m = c.clone();
            m.push(1);
            if is_irreducible(&fp, &m) {
                return Gf { fp, r, modulus: m };
            }
            // next coefficient vector
            let mut i = 0;
            loop {
                c[i] += 1;
                if c[i] < p {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.fp.p
    }

    pub fn order(&self) -> u64 {
        self.fp.p.pow(self.r as u32)
    }

    /// The `n`-th element in a fixed enumeration of the field.
    pub fn element(&self, mut n: u64) -> PolyP {
        let mut v = Vec::with_capacity(self.r);
        for _ in 0..self.r {
            v.push(n % self.fp.p);
            n /= self.fp.p;
        }
        self.fp.trim(v)
    }

    pub fn from_int(&self, a: i64) -> PolyP {
        self.fp.trim(vec![self.fp.reduce_i(a as i128)])
    }

    /// The unique `p`-th root (Frobenius is bijective on a finite field).
    pub fn pth_root(&self, a: &PolyP) -> PolyP {
        let e = BigUint::from(self.fp.p).pow(self.r as u32 - 1);
        self.fp.ppowmod(a, &e, &self.modulus)
    }
}

fn is_irreducible(fp: &Fp, m: &[u64]) -> bool {
    let r = m.len() - 1;
    let x = vec![0, 1];
    let frob = |k: usize| fp.ppowmod(&x, &BigUint::from(fp.p).pow(k as u32), m);
    if !fp.prem(&fp.psub(&frob(r), &x), m).is_empty() {
        return false;
    }
    let mut q = 2;
    let mut rr = r;
    while rr > 1 {
        if rr % q == 0 {
            let g = fp.pgcd(&fp.psub(&frob(r / q), &x), m);
            if g.len() > 1 {
                return false;
            }
            while rr % q == 0 {
                rr /= q;
            }
        }
        q += 1;
    }
    true
}

impl Field for Gf {
    type Elem = PolyP;
    fn zero(&self) -> PolyP {
        Vec::new()
    }
    fn one(&self) -> PolyP {
        vec![1]
    }
    fn add(&self, a: &PolyP, b: &PolyP) -> PolyP {
        self.fp.padd(a, b)
    }
    fn sub(&self, a: &PolyP, b: &PolyP) -> PolyP {
        self.fp.psub(a, b)
    }
    fn mul(&self, a: &PolyP, b: &PolyP) -> PolyP {
        self.fp.prem(&self.fp.pmul(a, b), &self.modulus)
    }
    fn neg(&self, a: &PolyP) -> PolyP {
        self.fp.psub(&[], a)
    }
    fn inv(&self, a: &PolyP) -> PolyP {
        assert!(!a.is_empty(), "inverse of zero");
        let (g, s, _) = self.fp.pxgcd(a, &self.modulus);
        // g is a nonzero constant
        let c = self.fp.inverse(g[0]);
        self.fp.prem(&self.fp.pscale(&s, c), &self.modulus)
    }
    fn is_zero(&self, a: &PolyP) -> bool {
        a.is_empty()
    }
}

/// A quadratic form `Σ_{i≤j} c_ij x_i x_j` over `F_{p^r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FfForm {
    pub n: usize,
    /// `c[i][j]` for `i ≤ j`; entries below the diagonal are ignored.
    pub c: Vec<Vec<PolyP>>,
}

impl FfForm {
    pub fn zero(n: usize) -> FfForm {
        FfForm { n, c: vec![vec![Vec::new(); n]; n] }
    }

    pub fn eval(&self, k: &Gf, x: &[PolyP]) -> PolyP {
        let mut s = k.zero();
        for i in 0..self.n {
            for j in i..self.n {
                s = k.add(&s, &k.mul(&self.c[i][j], &k.mul(&x[i], &x[j])));
            }
        }
        s
    }

    /// `q ⊥ q̃` in disjoint variables.
    pub fn orthogonal_sum(&self, o: &FfForm) -> FfForm {
        let n = self.n + o.n;
        let mut s = FfForm::zero(n);
        for i in 0..self.n {
            for j in i..self.n {
                s.c[i][j] = self.c[i][j].clone();
            }
        }
        for i in 0..o.n {
            for j in i..o.n {
                s.c[self.n + i][self.n + j] = o.c[i][j].clone();
            }
        }
        s
    }

    /// The polar form `b(x, y) = q(x + y) − q(x) − q(y)` as a matrix.
    pub fn polar(&self, k: &Gf) -> Matrix<PolyP> {
        let mut m = vec![vec![k.zero(); self.n]; self.n];
        for i in 0..self.n {
            m[i][i] = k.add(&self.c[i][i], &self.c[i][i]);
            for j in i + 1..self.n {
                m[i][j] = self.c[i][j].clone();
                m[j][i] = self.c[i][j].clone();
            }
        }
        m
    }
}

/// The rank of a quadratic form over `F_{p^r}`: the number of variables
/// left after reducing to `x₁x₂ + ⋯ (+ x₀²)`. In odd characteristic this is
/// the rank of the polar form; in characteristic 2 the polar form is
/// alternating of even rank and `q` restricted to its radical is the
/// square of a linear form, adding 1 when that form is nonzero.
pub fn rank_ff(k: &Gf, q: &FfForm) -> usize {
    let b = q.polar(k);
    let rb = rank(k, &b);
    if k.p() != 2 {
        return rb;
    }
    let defect = kernel(k, &b).iter().any(|v| !k.is_zero(&q.eval(k, v)));
    rb + defect as usize
}

/// An integral model of `X` over `Z_(p)`: two forms with `p`-integral
/// coefficients, each primitive at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModel {
    pub p: BigInt,
    pub forms: [Vec<BigInt>; 2],
}

impl IntegralModel {
    pub fn new(p: &BigInt, a: &[BigInt], b: &[BigInt]) -> IntegralModel {
        let prim = |c: &[BigInt]| -> Vec<BigInt> {
            let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g.is_zero() {
                return c.to_vec();
            }
            let e = val_int(&g, p);
            let s = p.pow(e);
            c.iter().map(|x| x / &s).collect()
        };
        IntegralModel { p: p.clone(), forms: [prim(a), prim(b)] }
    }

    /// The model given by the pencil's integral forms.
    pub fn from_pencil(pencil: &Pencil, p: &BigInt) -> IntegralModel {
        let (a, b) = pencil.integral_forms();
        let ints = |f: &QuadraticForm5| f.coeffs().iter().map(Rat::to_integer).collect::<Vec<_>>();
        IntegralModel::new(p, &ints(&a), &ints(&b))
    }

    /// The `2 × 15` coefficient matrix after `x_i ↦ p^{w_i} x_i`.
    pub fn weighted(&self, w: &[u32; 5]) -> [Vec<BigInt>; 2] {
        let scale = |c: &Vec<BigInt>| -> Vec<BigInt> {
            let mut out = c.clone();
            for i in 0..5 {
                for j in i..5 {
                    out[monomial_index(i, j)] *= self.p.pow(w[i] + w[j]);
                }
            }
            out
        };
        [scale(&self.forms[0]), scale(&self.forms[1])]
    }

    /// The model with coordinates permuted: new `x_i` is old `x_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize; 5]) -> IntegralModel {
        let mv = |c: &Vec<BigInt>| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); 15];
            for i in 0..5 {
                for j in i..5 {
                    out[monomial_index(i, j)] = c[monomial_index(perm[i].min(perm[j]), perm[i].max(perm[j]))].clone();
                }
            }
            out
        };
        IntegralModel { p: self.p.clone(), forms: [mv(&self.forms[0]), mv(&self.forms[1])] }
    }
}

/// `mult_w`: the least `p`-adic valuation of a `2 × 2` minor of the
/// weighted coefficient matrix; `None` when every minor vanishes.
pub fn mult_w(m: &IntegralModel, w: &[u32; 5]) -> Option<u32> {
    let [a, b] = m.weighted(w);
    let mut best: Option<u32> = None;
    for k in 0..15 {
        for l in k + 1..15 {
            let minor = &a[k] * &b[l] - &a[l] * &b[k];
            if !minor.is_zero() {
                let v = val_int(&minor, &m.p);
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
    }
    best
}

/// What the special fiber says about `X(Q_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCertificate {
    /// Reduced complete intersection with no member of rank `≤ 2` over
    /// `F̄_p`: the special fiber is split, so `X(Q_p) ≠ ∅`.
    SplitCertified,
    /// No conclusion.
    NonsplitPossible { reason: String },
    /// The reduction is not a complete intersection of two quadrics with
    /// nonvanishing discriminant.
    Degenerate { reason: String },
}

impl fmt::Display for SplitCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitCertificate::SplitCertified => f.write_str("split-certified"),
            SplitCertificate::NonsplitPossible { reason } => write!(f, "nonsplit-possible ({reason})"),
            SplitCertificate::Degenerate { reason } => write!(f, "degenerate ({reason})"),
        }
    }
}

fn det_poly(fp: &Fp, m: &[Vec<PolyP>]) -> PolyP {
    // Laplace expansion; the matrices are at most 5 × 5
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Vec::new();
    for j in 0..n {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<PolyP>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = fp.pmul(&m[0][j], &det_poly(fp, &minor));
        acc = if j % 2 == 0 { fp.padd(&acc, &t) } else { fp.psub(&acc, &t) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Checks the special fiber over `F̄_p`, `p` odd. Geometric reducedness is
/// tested through squarefreeness of `det(aM₀ + bM_∞)` mod `p`, and members
/// of rank `≤ 2` through the gcd of all `3 × 3` minors.
pub fn split_fiber_certificate(m: &IntegralModel) -> SplitCertificate {
    let Some(p) = m.p.to_u64().filter(|&p| p < 1 << 31) else {
        return SplitCertificate::NonsplitPossible { reason: "prime too large".into() };
    };
    if p == 2 {
        return SplitCertificate::NonsplitPossible { reason: "residue characteristic 2 is not certified".into() };
    }
    let fp = Fp::new(p);
    let red = |c: &Vec<BigInt>| -> Vec<u64> { c.iter().map(|x| x.mod_floor(&m.p).to_u64().unwrap()).collect() };
    let (a, b) = (red(&m.forms[0]), red(&m.forms[1]));
    if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
        return SplitCertificate::Degenerate { reason: "a form vanishes mod p".into() };
    }
    // proportional mod p: every 2×2 minor vanishes
    if (0..15).all(|k| (k + 1..15).all(|l| (a[k] * b[l] + p * p - a[l] * b[k] % p) % p == 0)) {
        return SplitCertificate::Degenerate { reason: "the forms are proportional mod p".into() };
    }
    let half = fp.inverse(2);
    let gram = |c: &[u64], i: usize, j: usize| -> u64 {
        let v = c[monomial_index(i.min(j), i.max(j))];
        if i == j { v } else { v * half % p }
    };
    // M(T) = M₀ + T M_∞ with entries in F_p[T]
    let mt: Vec<Vec<PolyP>> = (0..5).map(|i| (0..5).map(|j| fp.trim(vec![gram(&a, i, j), gram(&b, i, j)])).collect()).collect();
    let det = det_poly(&fp, &mt);
    if det.is_empty() {
        return SplitCertificate::Degenerate { reason: "every member of the pencil is singular mod p".into() };
    }
    // as a binary quintic: the root at ∞ has multiplicity 5 − deg
    let at_inf = 5 - (det.len() - 1);
    if at_inf >= 2 || !fp.is_squarefree(&det) {
        return SplitCertificate::NonsplitPossible { reason: "the discriminant has a repeated root mod p".into() };
    }
    let mut g: PolyP = Vec::new();
    let mut inf_low = true;
    for rows in subsets(5, 3) {
        for cols in subsets(5, 3) {
            let sub: Vec<Vec<PolyP>> = rows.iter().map(|&i| cols.iter().map(|&j| mt[i][j].clone()).collect()).collect();
            let d = det_poly(&fp, &sub);
            g = fp.pgcd(&g, &d);
            if d.len() == 4 {
                inf_low = false;
            }
        }
    }
    if g.len() > 1 {
        return SplitCertificate::NonsplitPossible { reason: "a member has rank at most 2 over the algebraic closure".into() };
    }
    // at T = ∞ the top coefficients of the minors are the minors of M_∞
    if inf_low {
        return SplitCertificate::NonsplitPossible { reason: "M_∞ has rank at most 2 mod p".into() };
    }
    SplitCertificate::SplitCertified
}

/// Lifts a form over `F_p` to the coefficient list used by `FfForm`.
pub fn form_mod(k: &Gf, c: &[BigInt], n: usize) -> FfForm {
    let mut f = FfForm::zero(n);
    let pb = BigInt::from(k.p());
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            f.c[i][j] = k.fp.trim(vec![c[idx].mod_floor(&pb).to_u64().unwrap()]);
            idx += 1;
        }
    }
    f
}
