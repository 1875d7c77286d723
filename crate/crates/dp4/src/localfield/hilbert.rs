use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::padic::PAdic;
use super::{Half, LocalField, Place};
use crate::error::{domain, Result};
use crate::exact::int::{legendre, non_residue};
use crate::exact::{rat, Rat};

fn two() -> BigInt {
    BigInt::from(2)
}

/// Square test for a p-adic number given by valuation and unit residue.
pub(crate) fn padic_is_square(x: &PAdic, p: &BigInt) -> bool {
    if x.val % 2 != 0 {
        return false;
    }
    if p == &two() {
        x.residue(p) == 1
    } else {
        legendre(&BigInt::from(x.residue(p)), p) == 1
    }
}

/// Hilbert symbol over Q_p from valuations and unit residues.
pub(crate) fn padic_hilbert(a: &PAdic, b: &PAdic, p: &BigInt) -> Half {
    let (al, be) = (a.val.rem_euclid(2) as u64, b.val.rem_euclid(2) as u64);
    if p == &two() {
        let (u, v) = (a.residue(p), b.residue(p));
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        Half(e % 2 == 1)
    } else {
        let (u, v) = (BigInt::from(a.residue(p)), BigInt::from(b.residue(p)));
        let mut sign = 1;
        if al * be == 1 && legendre(&BigInt::from(-1), p) == -1 {
            sign = -sign;
        }
        if be == 1 {
            sign *= legendre(&u, p);
        }
        if al == 1 {
            sign *= legendre(&v, p);
        }
        Half(sign == -1)
    }
}

pub(crate) fn prec_for(p: &BigInt) -> u32 {
    if p == &two() {
        3
    } else {
        1
    }
}

/// Whether `r` is a square in Q_v.
pub fn is_local_square(r: &Rat, v: &Place) -> Result<bool> {
    if r.is_zero() {
        return domain("square test of zero");
    }
    Ok(match v {
        Place::Real => r.is_positive(),
        Place::Finite(p) => padic_is_square(&PAdic::from_rat(r, p, prec_for(p)), p),
    })
}

/// The Hilbert symbol `(a, b)_v` as an element of ½Z/Z.
pub fn hilbert(a: &Rat, b: &Rat, v: &Place) -> Result<Half> {
    if a.is_zero() || b.is_zero() {
        return domain("Hilbert symbol with a zero entry");
    }
    Ok(match v {
        Place::Real => Half(a.is_negative() && b.is_negative()),
        Place::Finite(p) => {
            let k = prec_for(p);
            padic_hilbert(&PAdic::from_rat(a, p, k), &PAdic::from_rat(b, p, k), p)
        }
    })
}

/// Representatives of `Q_v^× / Q_v^{×2}` that are units (valuation 0), and
/// all classes (including `p·u`).
pub fn local_square_class_reps(v: &Place) -> (Vec<Rat>, Vec<Rat>) {
    match v {
        Place::Real => (vec![rat(1), rat(-1)], vec![rat(1), rat(-1)]),
        Place::Finite(p) if p == &two() => {
            let units: Vec<Rat> = [1, 3, 5, 7].iter().map(|&u| rat(u)).collect();
            let mut all = units.clone();
            all.extend(units.iter().map(|u| u * rat(2)));
            (units, all)
        }
        Place::Finite(p) => {
            let units = vec![rat(1), Rat::from_integer(non_residue(p))];
            let mut all = units.clone();
            all.extend(units.iter().map(|u| u * Rat::from_integer(p.clone())));
            (units, all)
        }
    }
}

impl LocalField for Place {
    type Elem = Rat;

    fn archimedean(&self) -> Option<bool> {
        self.is_real().then_some(true)
    }
    fn is_square(&self, a: &Rat) -> bool {
        is_local_square(a, self).expect("nonzero")
    }
    fn hilbert(&self, a: &Rat, b: &Rat) -> Half {
        hilbert(a, b, self).expect("nonzero")
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn one(&self) -> Rat {
        rat(1)
    }
}
