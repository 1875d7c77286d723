//! Independent oracles shared by the test suites and the acceptance run.

use std::collections::BTreeSet;

use dp4::brauer::{brauer_group, parity_criterion, BrauerGenerator, CliffordData};
use dp4::exact::{Field, Rat};
use dp4::localfield::{is_local_square, Half, Place};
use dp4::pencil::Pencil;
use dp4::reduction::{FfForm, Gf};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Brute-force isotropy over Q_p for diagonal integer forms whose
/// coefficients have valuation 0 or 1. Odd p: a zero of the unit part or of
/// the p-part modulo p (Hensel applies to a unit coordinate). p = 2: search
/// modulo 2^5 with the one-variable Hensel criterion v(F) > 2·v(∂F).
pub fn brute_isotropic(a: &[i64], p: i64) -> bool {
    let n = a.len();
    if p != 2 {
        let split = |want: u32| -> Vec<i64> {
            a.iter().filter(|&&x| (x % p == 0) as u32 == want).map(|&x| if want == 1 { x / p } else { x }).collect()
        };
        let has_zero = |c: &[i64]| -> bool {
            let m = c.len() as u32;
            (1..(p as u64).pow(m)).any(|mut code| {
                let mut s = 0i64;
                for &ci in c {
                    let xi = (code % p as u64) as i64;
                    code /= p as u64;
                    s += ci * xi * xi;
                }
                s.rem_euclid(p) == 0
            })
        };
        return has_zero(&split(0)) || has_zero(&split(1));
    }
    let k = 5u32;
    let m = 1i64 << k;
    let v2 = |x: i64| if x == 0 { 64 } else { x.trailing_zeros() };
    let total = (m as u64).pow(n as u32);
    let mut x = vec![0i64; n];
    for code in 1..total {
        let mut c = code;
        for xi in x.iter_mut() {
            *xi = (c % m as u64) as i64;
            c /= m as u64;
        }
        if x.iter().all(|xi| xi % 2 == 0) {
            continue;
        }
        let f: i64 = a.iter().zip(&x).map(|(ai, xi)| ai * xi * xi).sum();
        let md = a.iter().zip(&x).map(|(ai, xi)| v2(2 * ai * xi)).min().unwrap();
        if v2(f) > 2 * md {
            return true;
        }
    }
    false
}

pub fn random_form(k: &Gf, n: usize, r: &mut ChaCha8Rng) -> FfForm {
    let mut f = FfForm::zero(n);
    for i in 0..n {
        for j in i..n {
            // sparse enough that low ranks occur
            if r.gen_bool(0.5) {
                f.c[i][j] = k.element(r.gen_range(0..k.order()));
            }
        }
    }
    f
}

/// `n − dim W` with `W = {w ∈ rad b : q(w) = 0}`, counted by enumeration.
pub fn brute_rank(k: &Gf, q: &FfForm) -> usize {
    let n = q.n;
    let b = q.polar(k);
    let size = k.order();
    let mut count = 0u64;
    for idx in 0..size.pow(n as u32) {
        let mut m = idx;
        let w: Vec<_> = (0..n)
            .map(|_| {
                let e = k.element(m % size);
                m /= size;
                e
            })
            .collect();
        let in_rad = (0..n).all(|i| {
            let s = (0..n).fold(k.zero(), |s, j| k.add(&s, &k.mul(&b[i][j], &w[j])));
            k.is_zero(&s)
        });
        if in_rad && k.is_zero(&q.eval(k, &w)) {
            count += 1;
        }
    }
    let mut dim = 0;
    while size.pow(dim) < count {
        dim += 1;
    }
    assert_eq!(size.pow(dim), count);
    n - dim as usize
}

/// What [`check_pencil`] looked at.
pub struct PencilChecks {
    pub n: usize,
    /// Candidates `T`, each checked by both routes to `R_T`.
    pub candidates: usize,
    /// Irreducible candidates, each checked for parity transfer.
    pub irreducible: usize,
}

/// Checks every structural property on one pencil, panicking on failure.
pub fn check_pencil(p: &Pencil) -> PencilChecks {
    let l = p.singular_locus().unwrap();
    let b = brauer_group(p, &l).unwrap();
    assert!(b.n <= 2);
    if b.n == 2 {
        assert!(b.generators.iter().all(BrauerGenerator::is_reducible));
    }
    // every nontrivial class is reached by some degree-2 T
    assert_eq!(b.classes().len(), (1 << b.n) - 1);
    let mut irreducible = 0;
    for (g, _) in &b.candidates {
        assert!(!g.eps_t_is_square());
        let c = g.clifford_class();
        assert_eq!(c.total(), Half::ZERO, "reciprocity for C_T, T = {}", g.t);
        let rt = g.r_set();
        assert_eq!(g.r_set_by_isotropy(), rt, "dual path for T = {}", g.t);
        if let Some(over) = g.r_set_over_field() {
            irreducible += 1;
            let count: usize = over.iter().map(|(_, n)| n).sum();
            assert_eq!(count % 2 == 1, rt.odd(), "parity transfer for T = {}", g.t);
        }
        if let CliffordData::Split(ds) = &g.clif {
            // R_{t,t'} is the symmetric difference of R_t and R_t'
            let single = |d: &Vec<Rat>| -> BTreeSet<Place> {
                let c = CliffordData::Split(vec![d.clone()]);
                g.candidate_places()
                    .into_iter()
                    .filter(|v| is_local_square(&g.eps, v).unwrap() && !c.inv(v).is_zero())
                    .collect()
            };
            let sym: BTreeSet<Place> = single(&ds[0]).symmetric_difference(&single(&ds[1])).cloned().collect();
            assert_eq!(sym, rt.places.iter().cloned().collect::<BTreeSet<_>>());
        }
        let rp = g.r_prime_set().unwrap();
        assert_eq!(rp.c_prime.total(), Half::ZERO);
        if rt.odd() {
            assert!(rp.set.odd(), "R′_T parity for T = {}", g.t);
        }
    }
    parity_criterion(&b);
    PencilChecks { n: b.n, candidates: b.candidates.len(), irreducible }
}

