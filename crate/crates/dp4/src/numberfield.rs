//! Residue fields `k(s) = Q[T]/(g)` of closed points of the singular locus,
//! quadratic fields `Q(√D)`, and square classes of Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exact::int::{is_square_int, is_square_rat, squarefree_class};
use crate::exact::modp::Fp;
use crate::exact::{factor, rat, resultant, Field, Poly, Rat};

/// A signed squarefree integer standing for a class in `Q^×/Q^×2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct SquareClassQ(pub BigInt);

impl SquareClassQ {
    pub fn is_trivial(&self) -> bool {
        self.0.is_one()
    }
    pub fn as_rat(&self) -> Rat {
        Rat::from_integer(self.0.clone())
    }
    pub fn mul(&self, o: &SquareClassQ) -> SquareClassQ {
        square_class_of_rat(&Rat::from_integer(&self.0 * &o.0)).unwrap()
    }
}

impl fmt::Display for SquareClassQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<SquareClassQ> for String {
    fn from(s: SquareClassQ) -> String {
        s.to_string()
    }
}

pub fn square_class_of_rat(r: &Rat) -> Result<SquareClassQ> {
    if r.is_zero() {
        return domain("square class of zero");
    }
    Ok(SquareClassQ(squarefree_class(r)))
}

/// Exact square root of a rational square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if !is_square_rat(r) {
        return None;
    }
    Some(Rat::new(r.numer().sqrt(), r.denom().sqrt()))
}

/// `Q[T]/(modulus)` for a monic irreducible modulus of degree ≥ 1.
/// Elements are polynomials of degree < d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: Poly,
}

impl NumberField {
    /// Checks that the modulus is monic and irreducible.
    pub fn new(modulus: Poly) -> Result<NumberField> {
        if modulus.deg() == 0 || !modulus.is_monic() {
            return domain("number field modulus must be monic of positive degree");
        }
        let f = factor(&modulus)?;
        if f.factors.len() != 1 || f.factors[0].1 != 1 {
            return domain(format!("modulus {modulus} is reducible"));
        }
        Ok(NumberField { modulus })
    }

    /// Skips the irreducibility check (the caller got the modulus from `factor`).
    pub fn from_irreducible(modulus: Poly) -> NumberField {
        debug_assert!(modulus.is_monic());
        NumberField { modulus }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// The image θ of T.
    pub fn theta(&self) -> Poly {
        self.reduce(&Poly::x())
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus)
    }

    pub fn from_rat(&self, r: &Rat) -> Poly {
        Poly::constant(r.clone())
    }

    /// Coefficients of 1, θ, …, θ^{d−1}.
    pub fn coords(&self, e: &Poly) -> Vec<Rat> {
        (0..self.degree()).map(|i| e.coeff(i)).collect()
    }

    pub fn is_rational(&self, e: &Poly) -> bool {
        e.deg() == 0
    }

    pub fn norm(&self, e: &Poly) -> Result<Rat> {
        if e.is_zero() {
            return domain("norm of zero");
        }
        Ok(resultant(&self.modulus, e))
    }

    /// Characteristic polynomial `N(x − e)` of multiplication by `e`.
    pub fn charpoly(&self, e: &Poly) -> Poly {
        let d = self.degree();
        let xs: Vec<Rat> = (0..=d as i64).map(rat).collect();
        let ys: Vec<Rat> = xs
            .iter()
            .map(|x| resultant(&self.modulus, &(&Poly::constant(x.clone()) - e)))
            .collect();
        crate::exact::interpolate(&xs, &ys)
    }

    /// Decides whether `e` is a square in the field by factoring the norm
    /// of `x² − e` over Q (Trager), shifting `x ↦ x − kθ` until the norm is
    /// squarefree.
    pub fn is_square(&self, e: &Poly) -> Result<bool> {
        let e = self.reduce(e);
        if e.is_zero() {
            return domain("square test of zero");
        }
        let d = self.degree();
        if d == 1 || e.deg() == 0 && d % 2 == 1 {
            // a rational is a square in an odd-degree field iff it is one in Q
            return Ok(is_square_rat(&e.coeff(0)));
        }
        if !is_square_rat(&self.norm(&e)?) {
            return Ok(false);
        }
        if self.nonsquare_mod_p(&e) {
            return Ok(false);
        }
        for k in 0..64i64 {
            let r = self.trager_norm(&e, k);
            if r.is_squarefree() {
                return Ok(factor(&r)?.factors.len() > 1);
            }
        }
        unreachable!("no squarefree shift found")
    }

    /// Cheap certificate: a simple root `r` of the modulus mod `p` gives an
    /// embedding into Q_p with θ ↦ r + O(p), so a non-residue `e(r)` rules
    /// out squares.
    fn nonsquare_mod_p(&self, e: &Poly) -> bool {
        const PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
        for p in PRIMES {
            let fp = Fp::new(p);
            let (Some(m), Some(ep)) = (reduce_poly(&self.modulus, p), reduce_poly(e, p)) else { continue };
            let dm = fp.pderiv(&m);
            for r in 0..p {
                if fp.peval(&m, r) == 0 && fp.peval(&dm, r) != 0 {
                    let v = fp.peval(&ep, r);
                    if v != 0 && fp.pow(v, (p - 1) / 2) == p - 1 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// `Res_T(m(T), (x − kT)² − e(T))` as a polynomial in x.
    fn trager_norm(&self, e: &Poly, k: i64) -> Poly {
        let d = self.degree();
        let xs: Vec<Rat> = (0..=(2 * d) as i64).map(rat).collect();
        let kt = Poly::monomial(rat(k), 1);
        let ys: Vec<Rat> = xs
            .iter()
            .map(|x| {
                let lin = &Poly::constant(x.clone()) - &kt;
                resultant(&self.modulus, &(&(&lin * &lin) - e))
            })
            .collect();
        crate::exact::interpolate(&xs, &ys)
    }

    pub fn render(&self, e: &Poly) -> String {
        self.reduce(e).render("θ")
    }
}

impl Field for NumberField {
    type Elem = Poly;
    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a - b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        (a * b).rem(&self.modulus)
    }
    fn neg(&self, a: &Poly) -> Poly {
        -a
    }
    fn inv(&self, a: &Poly) -> Poly {
        assert!(!a.is_zero(), "inverse of zero");
        let (g, s, _) = a.xgcd(&self.modulus);
        assert!(g.deg() == 0, "modulus not irreducible");
        s.rem(&self.modulus)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn height(&self, a: &Poly) -> u64 {
        a.coeffs().iter().map(crate::exact::rat::height).sum()
    }
}

/// The quadratic field `Q(√D)`, `D` squarefree and `≠ 0, 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    pub d: BigInt,
}

/// `a + b√D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
}

impl QuadElem {
    pub fn rational(a: Rat) -> QuadElem {
        QuadElem { a, b: Rat::zero() }
    }
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl QuadField {
    pub fn new(d: BigInt) -> Result<QuadField> {
        if d.is_zero() || d.is_one() || squarefree_class(&Rat::from_integer(d.clone())) != d {
            return domain(format!("{d} is not a squarefree integer other than 0, 1"));
        }
        Ok(QuadField { d })
    }

    pub fn conj(&self, x: &QuadElem) -> QuadElem {
        QuadElem { a: x.a.clone(), b: -x.b.clone() }
    }

    pub fn norm(&self, x: &QuadElem) -> Rat {
        &x.a * &x.a - Rat::from_integer(self.d.clone()) * &x.b * &x.b
    }

    pub fn trace(&self, x: &QuadElem) -> Rat {
        &x.a * rat(2)
    }

    /// `x` is a square iff its norm is `n²` and `(a ± n)/2` is a rational square.
    pub fn is_square(&self, x: &QuadElem) -> Result<bool> {
        if self.is_zero(x) {
            return domain("square test of zero");
        }
        if x.b.is_zero() {
            return Ok(is_square_rat(&x.a) || is_square_rat(&(&x.a / Rat::from_integer(self.d.clone()))));
        }
        let Some(n) = rat_sqrt(&self.norm(x)) else {
            return Ok(false);
        };
        let two = rat(2);
        Ok([&x.a + &n, &x.a - &n].iter().any(|u| !u.is_zero() && is_square_rat(&(u / &two))))
    }

    /// For `x` with square norm, a rational `c` with `x ≡ c` mod squares.
    pub fn rational_class(&self, x: &QuadElem) -> Option<Rat> {
        if x.b.is_zero() {
            return Some(x.a.clone());
        }
        let n = rat_sqrt(&self.norm(x))?;
        // (a + n + b√D)² = 2(a + n)(a + b√D)
        for u in [&x.a + &n, &x.a - &n] {
            if !u.is_zero() {
                return Some(u * rat(2));
            }
        }
        None
    }

    pub fn render(&self, x: &QuadElem) -> String {
        if x.b.is_zero() {
            return x.a.to_string();
        }
        let root = format!("sqrt({})", self.d);
        let bpart = if x.b.is_one() {
            root
        } else if (-&x.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", x.b)
        };
        if x.a.is_zero() {
            bpart
        } else if bpart.starts_with('-') {
            format!("{} - {}", x.a, &bpart[1..])
        } else {
            format!("{} + {}", x.a, bpart)
        }
    }
}

impl Field for QuadField {
    type Elem = QuadElem;
    fn zero(&self) -> QuadElem {
        QuadElem::rational(Rat::zero())
    }
    fn one(&self) -> QuadElem {
        QuadElem::rational(Rat::one())
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: &x.a + &y.a, b: &x.b + &y.b }
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: &x.a - &y.a, b: &x.b - &y.b }
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let d = Rat::from_integer(self.d.clone());
        QuadElem { a: &x.a * &y.a + d * &x.b * &y.b, b: &x.a * &y.b + &x.b * &y.a }
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem { a: -x.a.clone(), b: -x.b.clone() }
    }
    fn inv(&self, x: &QuadElem) -> QuadElem {
        let n = self.norm(x);
        assert!(!n.is_zero(), "inverse of zero");
        let c = self.conj(x);
        QuadElem { a: c.a / &n, b: c.b / n }
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn height(&self, x: &QuadElem) -> u64 {
        crate::exact::rat::height(&x.a) + crate::exact::rat::height(&x.b)
    }
}

/// A degree-2 number field presented as `Q[T]/(T² + pT + q)` together with
/// its identification with `Q(√D)`: θ = (−p + m√D)/2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticModel {
    pub field: QuadField,
    pub modulus: Poly,
    pub m: Rat,
}

impl QuadraticModel {
    pub fn new(modulus: &Poly) -> Result<QuadraticModel> {
        if modulus.deg() != 2 || !modulus.is_monic() {
            return domain("quadratic model needs a monic quadratic");
        }
        let (p, q) = (modulus.coeff(1), modulus.coeff(0));
        let disc = &p * &p - rat(4) * q;
        if disc.is_zero() {
            return domain("repeated root");
        }
        let d = squarefree_class(&disc);
        if d.is_one() {
            return domain(format!("{modulus} is reducible"));
        }
        let m = rat_sqrt(&(&disc / Rat::from_integer(d.clone()))).expect("square by construction");
        Ok(QuadraticModel { field: QuadField { d }, modulus: modulus.clone(), m })
    }

    /// Image of `c0 + c1·θ + …` (reduced first).
    pub fn to_quad(&self, e: &Poly) -> QuadElem {
        let e = e.rem(&self.modulus);
        let (c0, c1) = (e.coeff(0), e.coeff(1));
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        QuadElem { a: c0 - &c1 * self.modulus.coeff(1) * &half, b: c1 * &self.m * half }
    }

    pub fn theta(&self) -> QuadElem {
        self.to_quad(&Poly::x())
    }
}

/// Coefficients mod `p`, or `None` when a denominator is divisible by `p`.
fn reduce_poly(f: &Poly, p: u64) -> Option<Vec<u64>> {
    let pb = BigInt::from(p);
    f.coeffs()
        .iter()
        .map(|c| {
            let d = c.denom().mod_floor(&pb);
            if d.is_zero() {
                return None;
            }
            let n = c.numer().mod_floor(&pb);
            let fp = Fp::new(p);
            let (n, d): (u64, u64) = (n.try_into().ok()?, d.try_into().ok()?);
            Some(n * fp.inverse(d) % p)
        })
        .collect()
}

/// Integer square test re-exported for callers that hold integers.
pub fn is_square_integer(n: &BigInt) -> bool {
    !n.is_negative() && is_square_int(n)
}
