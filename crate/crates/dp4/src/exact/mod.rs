//! Exact arithmetic: rationals, integers, polynomials over Q and their
//! factorization, and linear algebra over an arbitrary field.

pub mod factor;
pub mod field;
pub mod int;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod rat;
pub mod sturm;

pub use factor::{factor, squarefree_decomposition, Factorization};
pub use field::{Field, QQ};
pub use poly::{discriminant, interpolate, resultant, Poly};
pub use rat::{parse_rat, rat, ratio, Rat};
