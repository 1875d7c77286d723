mod common;

use common::oracles::brute_isotropic;
use dp4::exact::{rat, Rat, QQ};
use num_traits::Zero;
use dp4::localfield::*;
use dp4::numberfield::{QuadElem, QuadField};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q(n: i64) -> Rat {
    rat(n)
}

fn primes_of(xs: &[i64]) -> Vec<Place> {
    let mut out = vec![Place::Real, Place::p(2)];
    for &x in xs {
        let mut m = x.unsigned_abs();
        let mut d = 2;
        while m > 1 {
            if m % d == 0 {
                out.push(Place::p(d));
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn local_squares() {
    assert!(is_local_square(&q(2), &Place::p(7)).unwrap());
    assert!(!is_local_square(&q(2), &Place::p(2)).unwrap());
    assert!(!is_local_square(&q(-1), &Place::Real).unwrap());
    assert!(is_local_square(&q(17), &Place::p(2)).unwrap());
    assert!(is_local_square(&q(-7), &Place::p(2)).unwrap());
    assert!(!is_local_square(&q(5), &Place::p(2)).unwrap());
    assert!(is_local_square(&dp4::exact::ratio(4, 9), &Place::p(3)).unwrap());
    assert!(is_local_square(&q(0), &Place::p(3)).is_err());
}

#[test]
fn hilbert_examples() {
    assert_eq!(hilbert(&q(-1), &q(-1), &Place::Real).unwrap(), Half::HALF);
    for (v, want) in [(7, Half::HALF), (2, Half::HALF), (3, Half::ZERO), (5, Half::ZERO)] {
        assert_eq!(hilbert(&q(3), &q(7), &Place::p(v)).unwrap(), want, "v = {v}");
    }
    assert_eq!(hilbert(&q(3), &q(7), &Place::Real).unwrap(), Half::ZERO);
    for v in [Place::Real, Place::p(2), Place::p(3), Place::p(11)] {
        assert_eq!(hilbert(&q(1), &q(-33), &v).unwrap(), Half::ZERO);
    }
    assert_eq!(hilbert(&q(2), &q(-1), &Place::p(2)).unwrap(), Half::ZERO);
    assert_eq!(hilbert(&q(-1), &q(-1), &Place::p(2)).unwrap(), Half::HALF);
    assert!(hilbert(&q(0), &q(3), &Place::p(3)).is_err());
}

fn form_coeff(p: i64) -> impl Strategy<Value = i64> {
    (prop::bool::ANY, 0u32..2, 1i64..12).prop_filter_map("unit", move |(neg, e, u)| {
        if u % p == 0 {
            return None;
        }
        let c = u * p.pow(e);
        Some(if neg { -c } else { c })
    })
}

fn forms() -> impl Strategy<Value = (i64, Vec<i64>)> {
    prop::sample::select(vec![2i64, 3, 5, 7])
        .prop_flat_map(|p| (Just(p), prop::collection::vec(form_coeff(p), 3..=5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(110))]

    #[test]
    fn isotropy_matches_brute_force((p, a) in forms()) {
        let diag: Vec<Rat> = a.iter().map(|&x| q(x)).collect();
        prop_assert_eq!(isotropy(&diag, &Place::p(p as u64)), brute_isotropic(&a, p), "form {:?} at {}", a, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hilbert_reciprocity(a in -400i64..400, b in -400i64..400) {
        prop_assume!(a != 0 && b != 0);
        let total: Half = primes_of(&[a, b]).iter().map(|v| hilbert(&q(a), &q(b), v).unwrap()).sum();
        prop_assert_eq!(total, Half::ZERO);
    }

    #[test]
    fn hilbert_bilinear_symmetric(a in -90i64..90, b in -90i64..90, c in -90i64..90) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        for v in primes_of(&[a, b, c]) {
            let lhs = hilbert(&q(a), &q(b * c), &v).unwrap();
            let rhs = hilbert(&q(a), &q(b), &v).unwrap() + hilbert(&q(a), &q(c), &v).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(hilbert(&q(a), &q(b), &v).unwrap(), hilbert(&q(b), &q(a), &v).unwrap());
        }
    }

    #[test]
    fn hilbert_matches_conic_oracle(a in -60i64..60, b in -60i64..60, pi in 0usize..4) {
        let p = [2i64, 3, 5, 7][pi];
        prop_assume!(a != 0 && b != 0);
        // reduce to valuations 0/1 by removing square factors of p
        let red = |mut x: i64| { while x % (p * p) == 0 { x /= p * p; } x };
        let (a, b) = (red(a), red(b));
        let want = if brute_isotropic(&[a, b, -1], p) { Half::ZERO } else { Half::HALF };
        prop_assert_eq!(hilbert(&q(a), &q(b), &Place::p(p as u64)).unwrap(), want);
    }
}

#[test]
fn isotropy_examples() {
    let ones: Vec<Rat> = vec![q(1); 4];
    assert!(!isotropy(&ones, &Place::Real));
    assert!(!isotropy(&ones, &Place::p(2)));
    assert!(brute_isotropic(&[1, 1, 1, 1], 2) == false);
    for v in [Place::Real, Place::p(2), Place::p(3), Place::p(13)] {
        assert!(isotropy(&[q(1), q(-1), q(5), q(7)], &v));
    }
    assert!(isotropy(&[q(1), q(1), q(1), q(1), q(1)], &Place::p(2)));
    assert!(!isotropy(&[q(1), q(1), q(1), q(1), q(1)], &Place::Real));
}

fn all_places_of(vals: &[Rat]) -> Vec<Place> {
    let mut out = vec![Place::Real, Place::p(2)];
    for x in vals {
        for p in dp4::exact::int::primes_of_rat(x) {
            out.push(Place::Finite(p));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn clifford_calibration() {
    for (a, b) in [(3, 7), (-1, -1), (2, 5), (-3, 10), (6, -15)] {
        let s = clifford_rank4(&QQ, &[q(1), q(-a), q(-b), q(a * b)]);
        for v in all_places_of(&[q(a), q(b)]) {
            assert_eq!(s.inv(&v), hilbert(&q(a), &q(b), &v).unwrap(), "({a},{b}) at {v}");
        }
    }
    let hyp = clifford_rank4(&QQ, &[q(1), q(-1), q(1), q(-1)]);
    for v in all_places_of(&[q(30)]) {
        assert!(hyp.inv(&v).is_zero());
    }
}

#[test]
fn clifford_of_cone_normal_form() {
    // c(l0 l1 - l2^2 + eps l3^2): l0 l1 diagonalizes to <c, -c>
    for (c, eps) in [(1, 2), (3, 5), (-2, 7), (5, -1), (6, 10)] {
        let s = clifford_rank4(&QQ, &[q(c), q(-c), q(-c), q(c * eps)]);
        for v in all_places_of(&[q(c), q(eps)]) {
            assert_eq!(s.inv(&v), hilbert(&q(eps), &q(-c), &v).unwrap(), "c={c} eps={eps} at {v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn clifford_square_disc_detects_isotropy(a1 in -30i64..30, a2 in -30i64..30, a3 in -30i64..30) {
        prop_assume!(a1 != 0 && a2 != 0 && a3 != 0);
        let a4 = a1 * a2 * a3; // det = (a1 a2 a3)^2
        let diag = [q(a1), q(a2), q(a3), q(a4)];
        let s = clifford_rank4(&QQ, &diag);
        for v in all_places_of(&diag) {
            prop_assert_eq!(s.inv(&v).is_zero(), isotropy(&diag, &v));
        }
    }

    #[test]
    fn even_clifford_independent_of_vector(c in prop::collection::vec(-4i64..=4, 15), v0 in prop::collection::vec(-2i64..=2, 5), v1 in prop::collection::vec(-2i64..=2, 5)) {
        let m = sym5(&c);
        prop_assume!(!dp4::exact::linalg::det(&QQ, &m).is_zero());
        let v0: Vec<Rat> = v0.iter().map(|&x| q(x)).collect();
        let v1: Vec<Rat> = v1.iter().map(|&x| q(x)).collect();
        let Ok(s0) = clifford_even_rank5(&m, &v0) else { return Ok(()); };
        let Ok(s1) = clifford_even_rank5(&m, &v1) else { return Ok(()); };
        let mut ent: Vec<Rat> = s0.entries().cloned().collect();
        ent.extend(s1.entries().cloned());
        for v in all_places_of(&ent) {
            prop_assert_eq!(s0.inv(&v), s1.inv(&v));
            // Witt index ≥ 2 iff Hasse invariant of a diagonalization is (-1,-1)
            let d = dp4::exact::linalg::diagonalize(&QQ, &m, false);
            let mut hasse = Half::ZERO;
            for i in 0..5 { for j in i+1..5 { hasse += hilbert(&d[i], &d[j], &v).unwrap(); } }
            let lines = match v {
                Place::Real => { let pos = d.iter().filter(|x| **x > q(0)).count(); pos == 2 || pos == 3 }
                _ => hasse == hilbert(&q(-1), &q(-1), &v).unwrap(),
            };
            prop_assert_eq!(s0.inv(&v).is_zero(), lines, "place {}", v);
        }
    }
}

fn sym5(c: &[i64]) -> Vec<Vec<Rat>> {
    let mut m = vec![vec![q(0); 5]; 5];
    let mut k = 0;
    for i in 0..5 {
        for j in i..5 {
            m[i][j] = q(c[k]);
            m[j][i] = q(c[k]);
            k += 1;
        }
    }
    m
}

#[test]
fn split_form_has_trivial_even_clifford() {
    let m: Vec<Vec<Rat>> = (0..5).map(|i| (0..5).map(|j| if i == j { q([1, -1, 1, -1, 1][i]) } else { q(0) }).collect()).collect();
    let e0: Vec<Rat> = (0..5).map(|i| q((i == 0) as i64)).collect();
    let s = clifford_even_rank5(&m, &e0).unwrap();
    for v in [Place::Real, Place::p(2), Place::p(3), Place::p(5)] {
        assert!(s.inv(&v).is_zero());
    }
    let iso: Vec<Rat> = vec![q(1), q(1), q(0), q(0), q(0)];
    assert!(clifford_even_rank5(&m, &iso).is_err());
}

fn qe(a: i64, b: i64) -> QuadElem {
    QuadElem { a: q(a), b: q(b) }
}

#[test]
fn splitting_types() {
    let kind = |d: i64, p: u64| places_above(&QuadField::new(BigInt::from(d)).unwrap(), &Place::p(p)).into_iter().map(|w| w.kind).collect::<Vec<_>>();
    assert_eq!(kind(2, 7).len(), 2);
    assert_eq!(kind(17, 2).len(), 2);
    assert_eq!(kind(5, 2), vec![ExtKind::Inert]);
    assert_eq!(kind(-1, 2), vec![ExtKind::Ramified]);
    assert_eq!(kind(3, 5), vec![ExtKind::Inert]);
    assert_eq!(kind(15, 5), vec![ExtKind::Ramified]);
}

#[test]
fn unramified_extension_kills_unit_symbols() {
    // (u, p) over the unramified quadratic extension of Q_p, u a non-square unit
    for (p, u, d) in [(3u64, 2i64, -1i64), (5, 2, 2), (7, 3, 3), (11, 2, 2)] {
        let k = QuadField::new(BigInt::from(d)).unwrap();
        let w = places_above(&k, &Place::p(p));
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, ExtKind::Inert);
        assert_eq!(w[0].hilbert(&qe(u, 0), &qe(p as i64, 0)).unwrap(), Half::ZERO);
        assert_eq!(hilbert(&q(u), &q(p as i64), &Place::p(p)).unwrap(), Half::HALF);
    }
}

fn quad_fields() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-1i64, -2, -3, -5, -6, -7, 2, 3, 5, 6, 7, 10, 13, 17, -15, 33])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Σ_{w|v} (a, b)_w = (N a, b)_v for rational b.
    #[test]
    fn projection_formula(d in quad_fields(), a0 in -12i64..12, a1 in -12i64..12, b in -40i64..40) {
        prop_assume!((a0, a1) != (0, 0) && b != 0);
        let k = QuadField::new(BigInt::from(d)).unwrap();
        let a = qe(a0, a1);
        let n = k.norm(&a);
        for v in all_places_of(&[n.clone(), q(b), q(d)]) {
            let s: Half = places_above(&k, &v).iter().map(|w| w.hilbert(&a, &qe(b, 0)).unwrap()).sum();
            prop_assert_eq!(s, hilbert(&n, &q(b), &v).unwrap(), "d={} a={:?} b={} v={}", d, a, b, v);
        }
    }

    #[test]
    fn squares_are_squares_everywhere(d in quad_fields(), a0 in -9i64..9, a1 in -9i64..9) {
        prop_assume!((a0, a1) != (0, 0));
        let k = QuadField::new(BigInt::from(d)).unwrap();
        use dp4::exact::Field;
        let x = qe(a0, a1);
        let x2 = k.mul(&x, &x);
        for v in all_places_of(&[k.norm(&x), q(d)]) {
            for w in places_above(&k, &v) {
                prop_assert!(w.is_square(&x2).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_adic_symbols_match_hensel_search(d in prop::sample::select(vec![-1i64, -5, 3, 5, 2, -2, 6, 13]), a0 in -5i64..5, a1 in -5i64..5, b0 in -5i64..5, b1 in -5i64..5) {
        prop_assume!((a0, a1) != (0, 0) && (b0, b1) != (0, 0));
        let k = QuadField::new(BigInt::from(d)).unwrap();
        let (a, b) = (qe(a0, a1), qe(b0, b1));
        for w in places_above(&k, &Place::p(2)) {
            prop_assert_eq!(w.hilbert(&a, &b).unwrap(), hensel_search_hilbert(&a, &b, &w), "d={} a={:?} b={:?} w={:?}", d, a, b, w.kind);
        }
    }
}
