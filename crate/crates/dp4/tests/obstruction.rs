mod common;

use std::collections::BTreeSet;

use common::{diagonal, q, rng, smooth_pencils};
use dp4::brauer::{brauer_group, BrauerGroupOfG};
use dp4::exact::linalg::diagonalize;
use dp4::exact::{Rat, QQ};
use dp4::fixtures;
use dp4::localfield::{hilbert, is_local_square, Half, Place};
use dp4::obstruction::*;
use dp4::pencil::{Pencil, SingularLocus};
use num_traits::{Signed, Zero};
use rand::Rng;

fn setup(p: &Pencil) -> (SingularLocus, BrauerGroupOfG) {
    let l = p.singular_locus().unwrap();
    let b = brauer_group(p, &l).unwrap();
    (l, b)
}

/// Hasse invariant `Σ_{i<j} (a_i, a_j)_v` of a diagonal form.
fn hasse(d: &[Rat], v: &Place) -> Half {
    let mut s = Half::ZERO;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            s = s + hilbert(&d[i], &d[j], v).unwrap();
        }
    }
    s
}

/// Whether a nondegenerate rank-5 diagonal form has Witt index 2 over
/// `Q_v`: it must be isometric to `⟨1, −1, 1, −1, det⟩`.
fn witt_index_two(d: &[Rat], v: &Place) -> bool {
    if v.is_real() {
        let pos = d.iter().filter(|x| x.is_positive()).count();
        return pos == 2 || pos == 3;
    }
    let det: Rat = d.iter().product();
    let split = [q(1), q(-1), q(1), q(-1), det];
    hasse(d, v) == hasse(&split, v)
}

fn small_places() -> Vec<Place> {
    [Place::Real].into_iter().chain([2u64, 3, 5, 7, 11, 13].map(Place::p)).collect()
}

#[test]
fn fiber_solvability_agrees_with_the_hasse_invariant() {
    let mut r = rng(7);
    for p in smooth_pencils(3, 15, false) {
        let l = p.singular_locus().unwrap();
        for _ in 0..12 {
            let t = Rat::new(r.gen_range(-40i64..=40).into(), r.gen_range(1i64..=9).into());
            if p.f().eval(&t).is_zero() {
                continue;
            }
            let d = diagonalize(&QQ, p.member(&t).gram(), false);
            for v in small_places() {
                assert_eq!(fiber_solvable(&p, &l, &PointP1::Finite(t.clone()), &v), witt_index_two(&d, &v), "t = {t} at {v}");
            }
        }
        let d = diagonalize(&QQ, p.qinf().gram(), false);
        for v in small_places() {
            assert_eq!(fiber_solvable(&p, &l, &PointP1::Infinity, &v), witt_index_two(&d, &v));
        }
    }
}

#[test]
fn fiber_near_a_rational_singular_point() {
    // near s, Q_t ≅ C ⊥ ⟨det M_t / det C⟩ with C the rank-4 part of Q_s
    let mut checked = 0;
    for p in smooth_pencils(11, 40, true) {
        let l = p.singular_locus().unwrap();
        for s in l.rational_points() {
            let s0 = s.rational_root().unwrap();
            let c: Vec<Vec<Rat>> = s.complement_gram(&p).iter().map(|row| row.iter().map(|x| x.coeff(0)).collect()).collect();
            let dc = diagonalize(&QQ, &c, false);
            let detc: Rat = dc.iter().product();
            for v in [Place::Real, Place::p(2), Place::p(3), Place::p(5)] {
                let h = match &v {
                    Place::Real => Rat::new(1.into(), 1000.into()),
                    Place::Finite(pr) => Rat::from_integer(pr.clone()).pow(9),
                };
                for u in [q(1), q(-1), q(3), q(-3), q(5), q(2)] {
                    let t = &s0 + &h * &u;
                    if p.f().eval(&t).is_zero() {
                        continue;
                    }
                    let mut d = dc.clone();
                    d.push(dp4::exact::linalg::det(&QQ, p.member(&t).gram()) / &detc);
                    assert_eq!(fiber_solvable(&p, &l, &PointP1::Finite(t.clone()), &v), witt_index_two(&d, &v));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn real_samples_cover_every_component() {
    for p in smooth_pencils(5, 20, false) {
        let l = p.singular_locus().unwrap();
        let samples = sample_points(&l, &Place::Real, 3);
        // one per interval between real roots, plus ∞
        let real_roots = dp4::exact::sturm::real_roots(&l.f).len();
        let expect = if real_roots == 0 { 2 } else { real_roots + 2 };
        assert_eq!(samples.len(), expect);
    }
}

#[test]
fn evaluation_is_the_hilbert_symbol_of_g() {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    let (_, b) = setup(&p);
    let g = &b.generators[0];
    for t in [q(2), q(-1), q(5), Rat::new(1.into(), 3.into())] {
        for v in small_places() {
            let gt = &t * (&t - q(1));
            assert_eq!(eval_at_t(g, &PointP1::Finite(t.clone()), &v).unwrap(), hilbert(&g.eps, &gt, &v).unwrap());
        }
    }
    assert_eq!(eval_at_t(g, &PointP1::Infinity, &Place::p(7)).unwrap(), Half::ZERO);
    assert!(eval_at_t(g, &PointP1::Finite(q(1)), &Place::p(7)).is_err());
}

#[test]
fn ab_family_report() {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    let (l, b) = setup(&p);
    let rep = adelic_report(&p, &l, &b, DEFAULT_DEPTH).unwrap();
    assert!(rep.zero_reachable);
    assert!(rep.wa_obstructed);
    assert_eq!(rep.sums, BTreeSet::from([0, 1]));
    let sel = rep.selection.clone().unwrap();
    let total: Half = sel.iter().map(|(v, t)| eval_at_t(&b.generators[0], t, v).unwrap()).sum();
    assert_eq!(total, Half::ZERO);
    for (v, t) in &sel {
        assert!(fiber_solvable(&p, &l, t, v));
    }
    let sf = rep.suggestion.unwrap();
    // X(Q_2) = X(Q_3) = ∅ and ε = 2 is not a square there, so d ≡ 2 at 2
    // and 3; at 7 (ε a square, C_T ≠ 0) d is a nonsquare
    assert_eq!(sf.d, (-46).into());
    assert!(sf.conditions.iter().all(|c| c.2));
}

#[test]
fn suggested_field_meets_its_conditions_directly() {
    let d = q(-46);
    for pr in [2u64, 3] {
        assert!(is_local_square(&(&d / q(2)), &Place::p(pr)).unwrap());
    }
    assert!(!is_local_square(&d, &Place::p(7)).unwrap());
    // every smaller |d| fails one of the three conditions
    for n in 2i64..46 {
        for d in [q(-n), q(n)] {
            let ok = is_local_square(&(&d / q(2)), &Place::p(2)).unwrap()
                && is_local_square(&(&d / q(2)), &Place::p(3)).unwrap()
                && !is_local_square(&d, &Place::p(7)).unwrap();
            assert!(!ok, "d = {d}");
        }
    }
}

/// Primitive solutions of both forms mod `m`, by exhaustive enumeration.
fn primitive_solutions_mod(p: &Pencil, prime: i64, m: i64) -> usize {
    let (a, b) = p.integral_forms();
    let ints = |f: &dp4::pencil::QuadraticForm5| -> Vec<i64> { f.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect() };
    let (ca, cb) = (ints(&a), ints(&b));
    let ev = |c: &[i64], x: &[i64]| {
        let mut s = 0i64;
        let mut k = 0;
        for i in 0..5 {
            for j in i..5 {
                s = (s + c[k] * x[i] % m * x[j]) % m;
                k += 1;
            }
        }
        s.rem_euclid(m)
    };
    let mut count = 0;
    let mut x = [0i64; 5];
    for n in 0..m.pow(5) {
        let mut r = n;
        for c in x.iter_mut() {
            *c = r % m;
            r /= m;
        }
        if x.iter().all(|c| c % prime == 0) {
            continue;
        }
        if ev(&ca, &x) == 0 && ev(&cb, &x) == 0 {
            count += 1;
        }
    }
    count
}

#[test]
fn ab_family_has_no_points_at_2_and_3() {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    assert_eq!(primitive_solutions_mod(&p, 2, 8), 0);
    assert_eq!(primitive_solutions_mod(&p, 3, 9), 0);
    assert_eq!(has_local_point(&p, &Place::p(2)), Some(false));
    assert_eq!(has_local_point(&p, &Place::p(3)), Some(false));
}

#[test]
fn quadratic_t_profiles() {
    let p = fixtures::quadratic_t();
    let (l, b) = setup(&p);
    let g = b
        .candidates
        .iter()
        .map(|(g, _)| g)
        .find(|g| g.r_prime_set().unwrap().set.places.contains(&Place::p(5)))
        .unwrap();
    let gens = std::slice::from_ref(g);
    let p5 = local_profile(&p, &l, gens, &Place::p(5), DEFAULT_DEPTH).unwrap();
    assert!(p5.is_constant(), "{:?}", p5.values());
    let p2 = local_profile(&p, &l, gens, &Place::p(2), DEFAULT_DEPTH).unwrap();
    assert_eq!(p2.values(), BTreeSet::from([0, 1]));
}

#[test]
fn bsd_has_an_orthogonal_adelic_point() {
    let p = fixtures::bsd();
    let (l, b) = setup(&p);
    let rep = adelic_report(&p, &l, &b, 4).unwrap();
    assert!(rep.zero_reachable);
}

#[test]
fn trivial_group_is_unobstructed() {
    let p = diagonal([1, 2, 3, 4, 5], [-1, -1, -1, -1, -1]);
    let (l, b) = setup(&p);
    if b.n == 0 {
        let rep = adelic_report(&p, &l, &b, 3).unwrap();
        assert!(rep.zero_reachable && !rep.wa_obstructed);
        assert!(rep.profiles.iter().all(|pr| pr.values() == BTreeSet::from([0])));
    }
    let mut found = false;
    for p in smooth_pencils(21, 40, true) {
        let (l, b) = setup(&p);
        if b.n == 0 {
            let rep = adelic_report(&p, &l, &b, 3).unwrap();
            assert!(rep.zero_reachable && !rep.wa_obstructed && rep.sums == BTreeSet::from([0]));
            found = true;
            break;
        }
    }
    assert!(found);
}

#[test]
fn profiles_saturate_and_are_locally_constant() {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    let (l, b) = setup(&p);
    for v in [Place::Real, Place::p(2), Place::p(3), Place::p(7)] {
        let pr = local_profile(&p, &l, &b.generators, &v, 4).unwrap();
        assert!(pr.saturated, "{v}");
        // perturbing a witness by a high power of p keeps solvability and value
        for (m, t) in &pr.achievable {
            let PointP1::Finite(t) = t else { continue };
            let h = match &v {
                Place::Finite(pp) => Rat::from_integer(pp.clone()).pow(20),
                _ => Rat::new(1.into(), num_bigint::BigInt::from(10).pow(12)),
            };
            let t2 = PointP1::Finite(t + h);
            assert!(fiber_solvable(&p, &l, &t2, &v));
            let val = eval_at_t(&b.generators[0], &t2, &v).unwrap();
            assert_eq!(val, Half(*m & 1 == 1));
        }
    }
}

#[test]
fn invariant_sum_witness_on_the_ab_family() {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    let (l, b) = setup(&p);
    let w = invariant_sum_witness(&p, &l, &b.generators[0], DEFAULT_DEPTH).unwrap().unwrap();
    assert_eq!(w.total, Half(true));
    for (v, t, val, exp) in &w.selection {
        assert_eq!(val, exp);
        assert!(fiber_solvable(&p, &l, t, v));
    }
}

#[test]
fn invariant_sum_witness_on_random_odd_instances() {
    let mut r = rng(517);
    let mut found = 0;
    while found < 20 {
        let (a, bb, e) = (r.gen_range(-15i64..=15), r.gen_range(-15i64..=15), r.gen_range(-15i64..=15));
        if a * bb * e == 0 || dp4::exact::int::is_square_rat(&q(e)) {
            continue;
        }
        let Ok(p) = fixtures::ab_family(&q(a), &q(bb), &q(e)) else { continue };
        if !p.check_smooth().smooth {
            continue;
        }
        let (l, b) = setup(&p);
        for (g, _) in &b.candidates {
            if let Some(w) = invariant_sum_witness(&p, &l, g, 4).unwrap() {
                assert_eq!(w.total, Half(true), "(a, b, ε) = ({a}, {bb}, {e}), T = {}", g.t);
                found += 1;
            }
        }
    }
}

#[test]
fn real_points_detected_by_definiteness() {
    // Q₀ is positive definite
    let p = diagonal([1, 1, 1, 1, 1], [1, 2, 3, 4, 5]);
    assert_eq!(has_local_point(&p, &Place::Real), Some(false));
    // Q_t = ⟨1+t, t−1, 1−t, −1−t, 1+2t⟩ is indefinite for every t
    let p = diagonal([1, -1, 1, -1, 1], [1, 1, -1, -1, 2]);
    assert_eq!(has_local_point(&p, &Place::Real), Some(true));
}

#[test]
fn local_points_mod_p() {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    for pr in [5u64, 11, 13, 17, 83] {
        assert_eq!(has_local_point(&p, &Place::p(pr)), Some(true), "p = {pr}");
    }
}
