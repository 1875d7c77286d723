//! Completions of a quadratic field `L = Q(√D)` at the places above a place
//! of Q. Split places are handled through an explicit embedding into Q_p,
//! odd non-split places through the tame symbol, and the single place above
//! 2 when 2 does not split through Hilbert reciprocity in L.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hilbert::{padic_hilbert, padic_is_square, prec_for};
use super::padic::{sqrt_unit, PAdic};
use super::{Half, LocalField, Place};
use crate::error::{domain, Result};
use crate::exact::int::{factor_int, legendre, split_rat, val_rat};
use crate::exact::{rat, Field, Rat};
use crate::numberfield::{QuadElem, QuadField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtKind {
    /// `L_w = Q_p` via `√D ↦ r`, `r` the root chosen by `branch`.
    Split { branch: u8 },
    Inert,
    Ramified,
    /// `√D ↦ sign·|√D|`.
    Real { sign: i8 },
    Complex,
}

/// A place `w` of a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtPlace {
    pub field: QuadField,
    pub base: Place,
    pub kind: ExtKind,
}

fn two() -> BigInt {
    BigInt::from(2)
}

/// The places of `Q(√D)` above `v`.
pub fn places_above(field: &QuadField, v: &Place) -> Vec<ExtPlace> {
    let d = &field.d;
    let mk = |kind| ExtPlace { field: field.clone(), base: v.clone(), kind };
    match v {
        Place::Real if d.is_positive() => vec![mk(ExtKind::Real { sign: 1 }), mk(ExtKind::Real { sign: -1 })],
        Place::Real => vec![mk(ExtKind::Complex)],
        Place::Finite(p) if p == &two() => match d.mod_floor(&BigInt::from(8)).to_string().as_str() {
            "1" => vec![mk(ExtKind::Split { branch: 0 }), mk(ExtKind::Split { branch: 1 })],
            "5" => vec![mk(ExtKind::Inert)],
            _ => vec![mk(ExtKind::Ramified)],
        },
        Place::Finite(p) => match legendre(d, p) {
            0 => vec![mk(ExtKind::Ramified)],
            1 => vec![mk(ExtKind::Split { branch: 0 }), mk(ExtKind::Split { branch: 1 })],
            _ => vec![mk(ExtKind::Inert)],
        },
    }
}

fn qpow(k: &QuadField, x: &QuadElem, e: i64) -> QuadElem {
    let base = if e < 0 { k.inv(x) } else { x.clone() };
    let mut acc = k.one();
    for _ in 0..e.unsigned_abs() {
        acc = k.mul(&acc, &base);
    }
    acc
}

impl ExtPlace {
    fn p(&self) -> &BigInt {
        self.base.prime().expect("finite place")
    }

    fn rat_d(&self) -> Rat {
        Rat::from_integer(self.field.d.clone())
    }

    /// Local degree `[L_w : Q_v]`.
    pub fn local_degree(&self) -> u32 {
        match self.kind {
            ExtKind::Split { .. } | ExtKind::Real { .. } => 1,
            _ => 2,
        }
    }

    /// Ramification index of `L_w / Q_v`.
    fn e(&self) -> i64 {
        if self.kind == ExtKind::Ramified {
            2
        } else {
            1
        }
    }

    /// Image in Q_p at a split place.
    pub fn split_image(&self, x: &QuadElem) -> PAdic {
        let ExtKind::Split { branch } = self.kind else { panic!("not a split place") };
        let p = self.p().clone();
        let need = prec_for(&p);
        if x.b.is_zero() {
            return PAdic::from_rat(&x.a, &p, need);
        }
        if x.a.is_zero() {
            let r = sqrt_unit(&self.field.d, &p, need + 2, branch);
            let br = PAdic::from_rat(&x.b, &p, need);
            let m = p.pow(need);
            return PAdic { val: br.val, unit: (br.unit * r).mod_floor(&m), prec: need };
        }
        let (an, ad) = (x.a.numer(), x.a.denom());
        let (bn, bd) = (x.b.numer(), x.b.denom());
        let den = Rat::from_integer(ad * bd);
        let (vl, ln, ld) = split_rat(&den, &p);
        let mut prec = 24 + need;
        loop {
            let m = p.pow(prec);
            let r = sqrt_unit(&self.field.d, &p, prec + 2, branch);
            let z = (an * bd + bn * ad * r).mod_floor(&m);
            let vz = if z.is_zero() { prec } else { crate::exact::int::val_int(&z, &p) };
            if vz + need >= prec {
                prec *= 2;
                continue;
            }
            let mu = p.pow(need);
            let uz = (&z / p.pow(vz)).mod_floor(&mu);
            let linv = (ln.mod_floor(&mu)).modinv(&mu).unwrap();
            let unit = (uz * linv * ld).mod_floor(&mu);
            return PAdic { val: vz as i64 - vl, unit, prec: need };
        }
    }

    /// Normalized valuation `v_w` at a non-archimedean place.
    pub fn valuation(&self, x: &QuadElem) -> i64 {
        match self.kind {
            ExtKind::Split { .. } => self.split_image(x).val,
            ExtKind::Inert => val_rat(&self.field.norm(x), self.p()) / 2,
            ExtKind::Ramified => val_rat(&self.field.norm(x), self.p()),
            _ => panic!("archimedean place has no valuation"),
        }
    }

    fn uniformizer(&self) -> QuadElem {
        let p = Rat::from_integer(self.p().clone());
        match self.kind {
            ExtKind::Inert => QuadElem::rational(p),
            ExtKind::Ramified => {
                if self.p() == &two() && self.field.d.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
                    QuadElem { a: rat(1), b: rat(1) }
                } else {
                    QuadElem { a: rat(0), b: rat(1) }
                }
            }
            _ => panic!("uniformizer only used at non-split places"),
        }
    }

    /// `(v_w(x), x / π^{v_w(x)})` at a non-split finite place.
    fn unit_part(&self, x: &QuadElem) -> (i64, QuadElem) {
        let v = self.valuation(x);
        let pi = self.uniformizer();
        (v, self.field.mul(x, &qpow(&self.field, &pi, -v)))
    }

    /// Quadratic character of the residue of a unit at an odd non-split place.
    fn unit_char(&self, u: &QuadElem) -> i32 {
        let p = self.p();
        let res = |r: &Rat| {
            let (_, n, d) = split_rat(r, p);
            n * d
        };
        match self.kind {
            ExtKind::Inert => legendre(&res(&self.field.norm(u)), p),
            ExtKind::Ramified => legendre(&res(&u.a), p),
            _ => unreachable!(),
        }
    }

    fn real_sign(&self, x: &QuadElem) -> i32 {
        let ExtKind::Real { sign } = self.kind else { unreachable!() };
        let a = &x.a;
        let b = if sign > 0 { x.b.clone() } else { -x.b.clone() };
        let sa = a.signum();
        let sb = b.signum();
        if sb.is_zero() || sa == sb {
            return if sa.is_zero() { sb_to_i(&sb) } else { sb_to_i(&sa) };
        }
        if sa.is_zero() {
            return sb_to_i(&sb);
        }
        let lhs = a * a;
        let rhs = &b * &b * self.rat_d();
        if lhs > rhs {
            sb_to_i(&sa)
        } else {
            sb_to_i(&sb)
        }
    }

    /// Exact square test in `L_w`.
    pub fn is_square(&self, x: &QuadElem) -> Result<bool> {
        if self.field.is_zero(x) {
            return domain("square test of zero");
        }
        Ok(match self.kind {
            ExtKind::Complex => true,
            ExtKind::Real { .. } => self.real_sign(x) > 0,
            ExtKind::Split { .. } => padic_is_square(&self.split_image(x), self.p()),
            _ if self.p() == &two() => self.two_adic_square(x),
            _ => {
                let (v, u) = self.unit_part(x);
                v % 2 == 0 && self.unit_char(&u) == 1
            }
        })
    }

    /// Non-split place above 2: strip an even power of the uniformizer and
    /// test the unit against squares modulo `π^{2e+1}`.
    fn two_adic_square(&self, x: &QuadElem) -> bool {
        let k = &self.field;
        let (v, u) = self.unit_part(x);
        if v % 2 != 0 {
            return false;
        }
        debug_assert_eq!(self.valuation(&u), 0);
        let bound = 2 * self.e() + 1;
        let omega = match self.kind {
            ExtKind::Inert => QuadElem { a: Rat::new(BigInt::one(), two()), b: Rat::new(BigInt::one(), two()) },
            _ => QuadElem { a: rat(0), b: rat(1) },
        };
        for a in 0..8 {
            for b in 0..8 {
                let y = k.add(&QuadElem::rational(rat(a)), &k.mul(&QuadElem::rational(rat(b)), &omega));
                let diff = k.sub(&u, &k.mul(&y, &y));
                if k.is_zero(&diff) || self.valuation(&diff) >= bound {
                    return true;
                }
            }
        }
        false
    }

    /// Hilbert symbol `(a, b)_w`.
    pub fn hilbert(&self, a: &QuadElem, b: &QuadElem) -> Result<Half> {
        let k = &self.field;
        if k.is_zero(a) || k.is_zero(b) {
            return domain("Hilbert symbol with a zero entry");
        }
        Ok(match self.kind {
            ExtKind::Complex => Half::ZERO,
            ExtKind::Real { .. } => Half(self.real_sign(a) < 0 && self.real_sign(b) < 0),
            ExtKind::Split { .. } => padic_hilbert(&self.split_image(a), &self.split_image(b), self.p()),
            _ if self.p() == &two() => self.hilbert_by_reciprocity(a, b)?,
            _ => {
                let (al, a0) = self.unit_part(a);
                let (be, b0) = self.unit_part(b);
                let mut s = 1;
                if al * be % 2 != 0 && self.kind == ExtKind::Ramified {
                    s *= legendre(&BigInt::from(-1), self.p());
                }
                if be % 2 != 0 {
                    s *= self.unit_char(&a0);
                }
                if al % 2 != 0 {
                    s *= self.unit_char(&b0);
                }
                Half(s < 0)
            }
        })
    }

    /// At the unique place above 2 the symbol equals the sum of the symbols
    /// at every other place of L.
    fn hilbert_by_reciprocity(&self, a: &QuadElem, b: &QuadElem) -> Result<Half> {
        let k = &self.field;
        let mut primes: Vec<BigInt> = Vec::new();
        for x in [a, b] {
            let n = k.norm(x);
            for m in [n.numer(), n.denom()] {
                primes.extend(factor_int(m).into_iter().map(|f| f.0));
            }
        }
        primes.sort();
        primes.dedup();
        let mut total = Half::ZERO;
        let mut others: Vec<Place> = primes.into_iter().filter(|p| p != &two()).map(Place::Finite).collect();
        others.push(Place::Real);
        for v in others {
            for w in places_above(k, &v) {
                total += w.hilbert(a, b)?;
            }
        }
        Ok(total)
    }
}

fn sb_to_i(r: &Rat) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Independent oracle for `(a, b)_w`: the symbol vanishes iff `a` is a
/// square or `a x² + b y²` is a nonzero square for some `x, y` on a grid of
/// integral representatives. Sound when it reports 0; complete for the
/// small inputs used in tests.
pub fn hensel_search_hilbert(a: &QuadElem, b: &QuadElem, w: &ExtPlace) -> Half {
    let k = &w.field;
    if w.is_square(a).unwrap() || w.is_square(b).unwrap() {
        return Half::ZERO;
    }
    let omega = match (&w.kind, w.base.prime()) {
        (ExtKind::Inert, Some(p)) if p == &two() => QuadElem { a: Rat::new(BigInt::one(), two()), b: Rat::new(BigInt::one(), two()) },
        _ => QuadElem { a: rat(0), b: rat(1) },
    };
    let reps: Vec<QuadElem> = (0..8)
        .flat_map(|c| (0..8).map(move |d| (c, d)))
        .map(|(c, d)| k.add(&QuadElem::rational(rat(c)), &k.mul(&QuadElem::rational(rat(d)), &omega)))
        .collect();
    let ax: Vec<QuadElem> = reps.iter().map(|x| k.mul(a, &k.mul(x, x))).collect();
    for (i, x2a) in ax.iter().enumerate() {
        for (j, y) in reps.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            let s = k.add(x2a, &k.mul(b, &k.mul(y, y)));
            if !k.is_zero(&s) && w.is_square(&s).unwrap() {
                return Half::ZERO;
            }
        }
    }
    Half::HALF
}

impl LocalField for ExtPlace {
    type Elem = QuadElem;

    fn archimedean(&self) -> Option<bool> {
        match self.kind {
            ExtKind::Real { .. } => Some(true),
            ExtKind::Complex => Some(false),
            _ => None,
        }
    }
    fn is_square(&self, a: &QuadElem) -> bool {
        ExtPlace::is_square(self, a).expect("nonzero")
    }
    fn hilbert(&self, a: &QuadElem, b: &QuadElem) -> Half {
        ExtPlace::hilbert(self, a, b).expect("nonzero")
    }
    fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        self.field.mul(a, b)
    }
    fn neg(&self, a: &QuadElem) -> QuadElem {
        self.field.neg(a)
    }
    fn one(&self) -> QuadElem {
        self.field.one()
    }
}
