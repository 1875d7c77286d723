mod common;

use common::{block_pencils, q, rng};
use dp4::brauer::brauer_group;
use dp4::exact::Rat;
use dp4::fixtures::{self, BSD_POINTS};
use dp4::localfield::{is_local_square, Half, Place};
use dp4::obstruction::{eval_at_t, PointP1};
use dp4::pencil::{monomial_index, Pencil, QuadraticForm5};
use dp4::points::*;
use dp4::Error;
use num_bigint::BigInt;
use rand::Rng;

fn bsd_points() -> Vec<QuadraticPoint> {
    BSD_POINTS.iter().map(|(_, c)| parse_point(c).unwrap()).collect()
}

fn small_places() -> Vec<Place> {
    [Place::Real].into_iter().chain([2u64, 3, 5, 7, 11, 13, 17].map(Place::p)).collect()
}

#[test]
fn bsd_points_verify() {
    let p = fixtures::bsd();
    for ((d, _), pt) in BSD_POINTS.iter().zip(bsd_points()) {
        assert_eq!(pt.d(), Some(&BigInt::from(*d)));
        assert!(verify_point(&p, &pt), "{pt}");
    }
    let bad = parse_point(&["1", "0", "0", "0", "0"]).unwrap();
    assert!(!verify_point(&p, &bad));
    let bad = parse_point(&["0", "0", "sqrt(5)", "1", "2"]).unwrap();
    assert!(!verify_point(&p, &bad));
}

#[test]
fn coordinate_parsing() {
    let (a, b, d) = parse_coordinate("1/2 - 3*sqrt(8)").unwrap();
    assert_eq!((a, b, d), (Rat::new(1.into(), 2.into()), q(-6), Some(BigInt::from(2))));
    let (a, b, d) = parse_coordinate("-sqrt(-5)/2 + 4").unwrap();
    assert_eq!((a, b, d), (q(4), Rat::new((-1).into(), 2.into()), Some(BigInt::from(-5))));
    assert_eq!(parse_coordinate("sqrt(9)").unwrap(), (q(3), q(0), None));
    assert_eq!(parse_coordinate(" 7 ").unwrap(), (q(7), q(0), None));
    for bad in ["", "abc", "sqrt(2", "1/0", "sqrt(x)", "2*sqrt(2)sqrt(3)"] {
        assert!(matches!(parse_coordinate(bad), Err(Error::Parse(_))), "{bad:?}");
    }
    assert!(matches!(parse_point(&["sqrt(2)", "sqrt(3)", "0", "0", "1"]), Err(Error::Parse(_))));
    assert!(matches!(parse_point(&["0", "0", "0", "0", "0"]), Err(Error::Parse(_))));
    assert!(matches!(parse_point(&["1", "2"]), Err(Error::Parse(_))));
}

#[test]
fn pair_to_base_point_is_symmetric_and_rational() {
    let p = fixtures::bsd();
    for x in bsd_points() {
        let y = x.conjugate();
        let t1 = pair_to_base_point(&p, &x, None).unwrap();
        let t2 = pair_to_base_point(&p, &y, None).unwrap();
        let t3 = pair_to_base_point(&p, &x, Some(&y)).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1, t3);
        // the member over t contains the line: it vanishes on x, x′ and B_t(x, x′) = 0
        if let PointP1::Finite(t) = &t1 {
            let (b0, bi) = pair_values(&p, &x, None).unwrap();
            assert_eq!(b0 + t * bi, q(0));
        }
    }
}

#[test]
fn bsd_dual_path_on_every_usable_pair() {
    let p = fixtures::bsd();
    let l = p.singular_locus().unwrap();
    let b = brauer_group(&p, &l).unwrap();
    let mut usable = 0;
    for x in bsd_points() {
        let (b0, bi) = pair_values(&p, &x, None).unwrap();
        let t = pair_to_base_point(&p, &x, None).unwrap();
        for (g, _) in &b.candidates {
            let mut places = g.candidate_places();
            places.extend(small_places());
            for v in &places {
                match (eval_at_t(g, &t, v), pair_invariant(g, &b0, &bi, v)) {
                    (Ok(a), Ok(c)) => {
                        assert_eq!(a, c, "{x} at {v}, T = {}", g.t);
                        usable += 1;
                    }
                    (Err(_), Err(_)) | (Ok(_), Err(Error::Undefined(_))) => {}
                    other => panic!("{x} at {v}: {other:?}"),
                }
            }
        }
    }
    assert!(usable >= 10, "{usable}");
}

#[test]
fn points_over_the_root_of_eps_evaluate_to_the_clifford_class() {
    // over K = Q(√ε): β_T(y_v) = inv_v C_T where ε is not a local square, 0 where it is
    let p = fixtures::bsd();
    let l = p.singular_locus().unwrap();
    let b = brauer_group(&p, &l).unwrap();
    let g = &b.generators[0];
    let mut checked = 0;
    for x in bsd_points() {
        let d = x.d().unwrap();
        if !eps_square_over(g, d) {
            continue;
        }
        let t = pair_to_base_point(&p, &x, None).unwrap();
        for v in g.candidate_places() {
            let Ok(val) = eval_at_t(g, &t, &v) else { continue };
            let expect = if is_local_square(&g.eps, &v).unwrap() { Half::ZERO } else { g.c_inv(&v) };
            assert_eq!(val, expect, "{x} at {v}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn corestriction_formula_matches_evaluation_for_irreducible_t() {
    let mut r = rng(55);
    let mut checked = 0;
    for p in block_pencils(3, 1500) {
        let l = p.singular_locus().unwrap();
        let b = brauer_group(&p, &l).unwrap();
        for (g, _) in b.candidates.iter().filter(|(g, _)| !g.is_reducible()) {
            for _ in 0..4 {
                let t = Rat::new(r.gen_range(-30i64..=30).into(), r.gen_range(1i64..=7).into());
                let bi = Rat::new(r.gen_range(1i64..=5).into(), 1.into());
                let b0 = -&t * &bi;
                for v in g.candidate_places().iter().filter(|v| v.prime().map_or(true, |p| p < &BigInt::from(200))) {
                    assert_eq!(eval_at_t(g, &PointP1::Finite(t.clone()), v).unwrap(), pair_invariant(g, &b0, &bi, v).unwrap());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn a_line_on_x_has_no_base_point() {
    // X contains the line x₂ = x₃ = x₄ = 0
    let mut c0 = vec![0i64; 15];
    let mut c1 = vec![0i64; 15];
    c0[monomial_index(0, 2)] = 1;
    c0[monomial_index(1, 3)] = 1;
    c0[monomial_index(4, 4)] = 1;
    c1[monomial_index(0, 3)] = 1;
    c1[monomial_index(1, 4)] = 1;
    c1[monomial_index(2, 2)] = 1;
    let p = Pencil::from_qinf(&QuadraticForm5::from_ints(&c0), &QuadraticForm5::from_ints(&c1)).unwrap();
    let x = QuadraticPoint::rational(vec![q(1), q(0), q(0), q(0), q(0)]);
    let y = QuadraticPoint::rational(vec![q(0), q(1), q(0), q(0), q(0)]);
    assert!(verify_point(&p, &x) && verify_point(&p, &y));
    assert_eq!(pair_to_base_point(&p, &x, Some(&y)), Err(Error::LineInX));
    assert!(matches!(pair_to_base_point(&p, &x, None), Err(Error::Domain(_))));
}

#[test]
fn search_finds_listed_points() {
    let p = fixtures::bsd();
    let found = search_points(&p, &BigInt::from(-1), 2).unwrap();
    let target = parse_point(&["1", "1", "1", "0", "sqrt(-1)"]).unwrap();
    assert!(found.iter().any(|x| x.normalized() == target.normalized() || x.normalized() == target.conjugate().normalized()));
    for x in &found {
        assert!(verify_point(&p, x));
    }
    // deterministic and sorted
    assert_eq!(found, search_points(&p, &BigInt::from(-1), 2).unwrap());
    let rational = search_points(&p, &BigInt::from(1), 3).unwrap();
    for x in &rational {
        assert!(x.is_rational() && verify_point(&p, x));
    }
}

#[test]
fn search_on_the_ab_family_without_small_points() {
    // X(Q_2) = ∅, so there are no rational points at all
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    assert!(search_points(&p, &BigInt::from(1), 4).unwrap().is_empty());
}
