//! Real roots of squarefree rational polynomials by Sturm sequences.

use num_traits::{Signed, Zero};

use super::poly::Poly;
use super::rat::{rat, Rat};

fn sturm_chain(f: &Poly) -> Vec<Poly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&rat(-1)));
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &Rat) -> usize {
    let signs: Vec<bool> = chain.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A real root, exact or inside an open interval `(lo, hi)` whose ends
/// are not roots.
#[derive(Clone, Debug, PartialEq)]
pub enum RealRoot {
    Exact(Rat),
    Between(Rat, Rat),
}

impl RealRoot {
    fn bounds(&self) -> (Rat, Rat) {
        match self {
            RealRoot::Exact(r) => (r.clone(), r.clone()),
            RealRoot::Between(a, b) => (a.clone(), b.clone()),
        }
    }

    /// Halves the isolating interval.
    fn refine(&self, f: &Poly) -> RealRoot {
        let RealRoot::Between(a, b) = self else { return self.clone() };
        let m = (a + b) / rat(2);
        let fm = f.eval(&m);
        if fm.is_zero() {
            RealRoot::Exact(m)
        } else if fm.is_positive() == f.eval(a).is_positive() {
            RealRoot::Between(m, b.clone())
        } else {
            RealRoot::Between(a.clone(), m)
        }
    }

    /// A rational within `tol` of the root.
    pub fn approx(&self, f: &Poly, tol: &Rat) -> Rat {
        let mut r = self.clone();
        loop {
            let (a, b) = r.bounds();
            if &(&b - &a) <= tol {
                return (a + b) / rat(2);
            }
            r = r.refine(f);
        }
    }
}

/// Isolates the real roots of a squarefree `f`, in increasing order.
/// Rational roots come out exact.
pub fn real_roots(f: &Poly) -> Vec<RealRoot> {
    if f.deg() == 0 {
        return Vec::new();
    }
    let fac = super::factor(f).expect("nonzero polynomial");
    let mut out = Vec::new();
    let mut rest = Poly::one();
    for (g, _) in &fac.factors {
        if g.deg() == 1 {
            out.push(RealRoot::Exact(-g.coeff(0) / g.coeff(1)));
        } else {
            rest = &rest * g;
        }
    }
    if rest.deg() > 0 {
        // no rational roots left, so no bisection point is ever a root
        let chain = sturm_chain(&rest);
        let lc = rest.lc();
        let bound = rest.coeffs().iter().map(|c| (c / &lc).abs()).fold(rat(0), |a, b| a + b) + rat(1);
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            match sign_changes(&chain, &a) - sign_changes(&chain, &b) {
                0 => {}
                1 => out.push(isolate_from(&rest, f, a, b)),
                _ => {
                    let m = (&a + &b) / rat(2);
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
            }
        }
    }
    out.sort_by(|x, y| x.bounds().0.cmp(&y.bounds().0));
    out
}

/// Shrinks an interval isolating a root of `g | f` until its ends are not
/// roots of `f` and no other root of `f` lies inside.
fn isolate_from(g: &Poly, f: &Poly, mut a: Rat, mut b: Rat) -> RealRoot {
    let chain = sturm_chain(f);
    loop {
        if !f.eval(&a).is_zero() && !f.eval(&b).is_zero() && sign_changes(&chain, &a) - sign_changes(&chain, &b) == 1 {
            return RealRoot::Between(a, b);
        }
        let m = (&a + &b) / rat(2);
        if g.eval(&m).is_positive() == g.eval(&a).is_positive() {
            a = m;
        } else {
            b = m;
        }
    }
}

/// One rational point in each connected component of `R − {roots of f}`,
/// in increasing order (`f` squarefree).
pub fn separators(f: &Poly) -> Vec<Rat> {
    let mut roots = real_roots(f);
    if roots.is_empty() {
        return vec![rat(0)];
    }
    // refine until neighbouring intervals are disjoint
    for i in 0..roots.len().saturating_sub(1) {
        while roots[i].bounds().1 >= roots[i + 1].bounds().0 {
            roots[i] = roots[i].refine(f);
            roots[i + 1] = roots[i + 1].refine(f);
        }
    }
    let mut out = vec![roots[0].bounds().0 - rat(1)];
    for w in roots.windows(2) {
        out.push((w[0].bounds().1 + w[1].bounds().0) / rat(2));
    }
    out.push(roots.last().unwrap().bounds().1 + rat(1));
    out
}
