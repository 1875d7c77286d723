use super::{Half, LocalField};
use crate::error::{domain, Result};
use crate::exact::linalg::{congruence, diagonalize, Matrix};
use crate::exact::{Field, Rat, QQ};

/// A formal sum of quaternion symbols `Σ (a_i, b_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolSum<E> {
    pub terms: Vec<(E, E)>,
}

impl<E: Clone + std::fmt::Debug> SymbolSum<E> {
    pub fn empty() -> Self {
        SymbolSum { terms: Vec::new() }
    }

    pub fn push(&mut self, a: E, b: E) {
        self.terms.push((a, b));
    }

    pub fn extend(&mut self, o: &SymbolSum<E>) {
        self.terms.extend(o.terms.iter().cloned());
    }

    /// Local invariant at a completion.
    pub fn inv<L: LocalField<Elem = E>>(&self, w: &L) -> Half {
        self.terms.iter().map(|(a, b)| w.hilbert(a, b)).sum()
    }

    /// Every entry, for collecting the support of the symbols.
    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.terms.iter().flat_map(|(a, b)| [a, b])
    }
}

/// Clifford invariant of `⟨a1, a2, a3, a4⟩`: `Σ_{i<j} (a_i, a_j) + (−1, −det)`.
pub fn clifford_rank4<F: Field>(k: &F, diag: &[F::Elem]) -> SymbolSum<F::Elem> {
    assert_eq!(diag.len(), 4, "rank-4 Clifford invariant needs four entries");
    let mut s = SymbolSum::empty();
    for i in 0..4 {
        for j in i + 1..4 {
            s.push(diag[i].clone(), diag[j].clone());
        }
    }
    let det = diag.iter().skip(1).fold(diag[0].clone(), |acc, a| k.mul(&acc, a));
    let m1 = k.neg(&k.one());
    s.push(m1, k.neg(&det));
    s
}

/// Class of the even Clifford algebra of a nondegenerate rank-5 form with
/// Gram matrix `m`, computed from the splitting `⟨v0⟩ ⊥ v0^⊥`:
/// `Clif(q|v0⊥) + (disc(q|v0⊥), −q(v0))`.
pub fn clifford_even_rank5(m: &Matrix<Rat>, v0: &[Rat]) -> Result<SymbolSum<Rat>> {
    let q0 = crate::exact::linalg::bilinear(&QQ, m, v0, v0);
    if q0.is_zero() {
        return domain("the chosen vector is isotropic");
    }
    let j = v0.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    let mut basis = vec![v0.to_vec()];
    for i in 0..5 {
        if i != j {
            let mut e = vec![Rat::zero(); 5];
            e[i] = Rat::from_integer(1.into());
            basis.push(e);
        }
    }
    let g = congruence(&QQ, m, &basis);
    let d = diagonalize(&QQ, &g, true);
    if d.iter().any(|x| x.is_zero()) {
        return domain("form is degenerate");
    }
    let rest = &d[1..];
    let mut s = clifford_rank4(&QQ, rest);
    let disc: Rat = rest.iter().product();
    s.push(disc, -q0);
    Ok(s)
}

use num_traits::Zero;
