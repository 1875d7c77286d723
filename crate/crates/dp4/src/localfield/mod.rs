//! Places of Q and of quadratic fields, local square classes, Hilbert
//! symbols, isotropy of diagonal forms and Clifford invariants.

mod clifford;
mod hilbert;
mod isotropy;
pub mod padic;
mod quadext;

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::int::is_prime;

pub use clifford::{clifford_even_rank5, clifford_rank4, SymbolSum};
pub use hilbert::{hilbert, is_local_square, local_square_class_reps};
pub use isotropy::isotropy;
pub use quadext::{hensel_search_hilbert, places_above, ExtKind, ExtPlace};

/// A place of Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub enum Place {
    Finite(BigInt),
    Real,
}

impl Place {
    pub fn p(n: u64) -> Place {
        Place::Finite(BigInt::from(n))
    }

    pub fn prime(&self) -> Option<&BigInt> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Real => None,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Place::Real)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => f.write_str("inf"),
        }
    }
}

impl From<Place> for String {
    fn from(p: Place) -> String {
        p.to_string()
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        let s = s.trim();
        if ["inf", "infinity", "real", "oo", "∞"].contains(&s) {
            return Ok(Place::Real);
        }
        let p: BigInt = s.parse().map_err(|_| Error::Parse(format!("not a place: {s:?}")))?;
        if !is_prime(&p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        Ok(Place::Finite(p))
    }
}

/// An element of `½Z/Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct Half(pub bool);

impl Half {
    pub const ZERO: Half = Half(false);
    pub const HALF: Half = Half(true);

    pub fn is_zero(self) -> bool {
        !self.0
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 ^ o.0)
    }
}

impl AddAssign for Half {
    fn add_assign(&mut self, o: Half) {
        self.0 ^= o.0;
    }
}

impl std::iter::Sum for Half {
    fn sum<I: Iterator<Item = Half>>(it: I) -> Half {
        it.fold(Half::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1/2" } else { "0" })
    }
}

impl From<Half> for String {
    fn from(h: Half) -> String {
        h.to_string()
    }
}

/// What the isotropy and Clifford code needs from a completion.
pub trait LocalField {
    type Elem: Clone + std::fmt::Debug;

    fn archimedean(&self) -> Option<bool>; // Some(true) real, Some(false) complex, None p-adic
    fn is_square(&self, a: &Self::Elem) -> bool;
    fn hilbert(&self, a: &Self::Elem, b: &Self::Elem) -> Half;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn one(&self) -> Self::Elem;
}
