//! The worked examples, embedded as pencil files.

use crate::error::Result;
use crate::exact::{rat, Rat};
use crate::input::parse_pencil;
use crate::pencil::{monomial_index, Pencil, QuadraticForm5};

pub const AB_FAMILY: &str = include_str!("../fixtures/ab_family.json");
pub const QUADRATIC_T: &str = include_str!("../fixtures/quadratic_t.json");
pub const BSD: &str = include_str!("../fixtures/bsd.json");

/// `(name, pencil file)` for every bundled example.
pub const ALL: [(&str, &str); 3] = [("ab-family", AB_FAMILY), ("quadratic-t", QUADRATIC_T), ("bsd", BSD)];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// `Q₀ = x₀x₁ − x₂² + εx₃²`, `Q₁ = ax₀² + bx₁² − abx₂² − εx₄²`.
pub fn ab_family(a: &Rat, b: &Rat, eps: &Rat) -> Result<Pencil> {
    let mut c0 = vec![rat(0); 15];
    c0[monomial_index(0, 1)] = rat(1);
    c0[monomial_index(2, 2)] = rat(-1);
    c0[monomial_index(3, 3)] = eps.clone();
    let mut c1 = vec![rat(0); 15];
    c1[monomial_index(0, 0)] = a.clone();
    c1[monomial_index(1, 1)] = b.clone();
    c1[monomial_index(2, 2)] = -(a * b);
    c1[monomial_index(4, 4)] = -eps.clone();
    let p = Pencil::normalize(&QuadraticForm5::from_coeffs(&c0)?, &QuadraticForm5::from_coeffs(&c1)?)?;
    Ok(p.with_label(format!("ab-family (a, b, eps) = ({a}, {b}, {eps})")))
}

/// `Q₀ = (x₀ + x₁)(x₀ + 2x₁) − x₂² + 5x₄²`, `Q₁ = 2(x₀x₁ − x₂² + 5x₃²)`:
/// a reducible generator and seven quadratic points.
pub fn bsd() -> Pencil {
    parse_pencil(BSD).expect("bundled fixture")
}

/// `Q₀ = −55x₁² + 2x₁x₂ + x₃² + 5x₄²`, `Q_∞ = 33x₀² − 5x₁² − x₂² + 10x₃x₄`:
/// the nontrivial class is carried only by a point of degree 2.
pub fn quadratic_t() -> Pencil {
    parse_pencil(QUADRATIC_T).expect("bundled fixture")
}

/// The seven quadratic points listed for the BSD surface, as
/// `(d, coordinates)` with coordinates written `a+b*sqrt(d)`.
pub const BSD_POINTS: [(i64, [&str; 5]); 7] = [
    (-1, ["1", "1", "1", "0", "sqrt(-1)"]),
    (2, ["1", "-2", "2*sqrt(2)", "sqrt(2)", "1"]),
    (-2, ["4", "9", "6", "0", "5*sqrt(-2)"]),
    (5, ["0", "0", "sqrt(5)", "1", "1"]),
    (-5, ["5", "0", "0", "0", "sqrt(-5)"]),
    (10, ["2*sqrt(10)", "-sqrt(10)", "0", "2", "0"]),
    (-10, ["0", "sqrt(-10)", "0", "0", "2"]),
];
