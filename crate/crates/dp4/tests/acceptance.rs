//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the terminal.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::oracles::{brute_isotropic, brute_rank, check_pencil, random_form};
use common::{block_pencils, q, rng, smooth_pencils, sweep_pencils};
use dp4::brauer::{brauer_group, BrauerGroupOfG};
use dp4::exact::int::{is_square_rat, primes_of_rat};
use dp4::exact::Rat;
use dp4::fixtures::{self, BSD_POINTS};
use dp4::localfield::{hilbert, isotropy, Half, Place};
use dp4::numberfield::square_class_of_rat;
use dp4::obstruction::{adelic_report, eval_at_t, invariant_sum_witness, local_profile, DEFAULT_DEPTH};
use dp4::pencil::{Pencil, SingularLocus};
use dp4::points::{pair_invariant, pair_to_base_point, pair_values, parse_point, verify_point};
use dp4::reduction::{rank_ff, Gf};
use dp4::Error;
use num_bigint::BigInt;
use rand::Rng;

fn setup(p: &Pencil) -> (SingularLocus, BrauerGroupOfG) {
    let l = p.singular_locus().expect("smooth");
    let b = brauer_group(p, &l).expect("Brauer group");
    (l, b)
}

fn within(start: Instant, limit: Duration) -> String {
    let t = start.elapsed();
    assert!(t < limit, "took {t:.1?}, limit {limit:?}");
    format!("{:.1}s", t.as_secs_f64())
}

/// The `(a, b, ε)` family at `(3, 7, 2)`.
fn criterion_1() -> String {
    let start = Instant::now();
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    let (l, b) = setup(&p);
    assert_eq!(b.n, 1);
    let g = &b.generators[0];
    assert_eq!(g.t.to_string(), "{0, 1}");
    let rt = g.r_set();
    assert_eq!(rt.places, vec![Place::p(7)]);
    assert!(rt.odd());
    let rep = adelic_report(&p, &l, &b, DEFAULT_DEPTH).unwrap();
    assert!(rep.verdict.condition2);
    assert!(rep.wa_obstructed && rep.zero_reachable);
    let t = within(start, Duration::from_secs(5));
    format!("R_T = {{7}} (odd), T = {{0, 1}}, wa_obstructed and zero_reachable, {t}")
}

/// The pencil whose class is carried by a quadratic `T`.
fn criterion_2() -> String {
    let start = Instant::now();
    let p = fixtures::quadratic_t();
    let (l, b) = setup(&p);
    let g = b
        .candidates
        .iter()
        .map(|(g, _)| g)
        .find(|g| g.r_prime_set().unwrap().set.places.contains(&Place::p(5)))
        .expect("a generator with 5 in R'_T");
    let gens = std::slice::from_ref(g);
    let p5 = local_profile(&p, &l, gens, &Place::p(5), DEFAULT_DEPTH).unwrap();
    assert!(p5.is_constant(), "profile at 5: {:?}", p5.values());
    let p2 = local_profile(&p, &l, gens, &Place::p(2), DEFAULT_DEPTH).unwrap();
    assert_eq!(p2.values(), BTreeSet::from([0, 1]));
    let t = within(start, Duration::from_secs(30));
    format!("profile at 5 = {:?}, at 2 = {{0, 1/2}}, 5 in R'_T, {t}", p5.values().iter().map(|&m| Half(m == 1).to_string()).collect::<Vec<_>>())
}

/// The BSD surface.
fn criterion_3() -> String {
    let p = fixtures::bsd();
    let (l, b) = setup(&p);
    let mut rational: Vec<(Rat, BigInt)> =
        l.rational_points().map(|s| (s.rational_root().unwrap(), square_class_of_rat(&s.eps_rational().unwrap()).unwrap().0)).collect();
    rational.sort();
    assert_eq!(rational, vec![(q(-1), BigInt::from(-1)), (q(0), BigInt::from(5)), (q(1), BigInt::from(5))]);
    let quad: Vec<_> = l.points.iter().filter(|s| s.degree() == 2).collect();
    assert_eq!(quad.len(), 1);
    assert_eq!(square_class_of_rat(&quad[0].eps_norm()).unwrap().0, BigInt::from(-1));
    assert_eq!(b.n, 1);
    assert!(b.generators[0].is_reducible());
    let pts: Vec<_> = BSD_POINTS.iter().map(|(_, c)| parse_point(c).unwrap()).collect();
    assert!(pts.iter().all(|x| verify_point(&p, x)));
    // dual path: base point then evaluation, against the pair formula
    let mut usable = 0;
    for x in &pts {
        let (b0, bi) = pair_values(&p, x, None).unwrap();
        let t = pair_to_base_point(&p, x, None).unwrap();
        for (g, _) in &b.candidates {
            let mut places = g.candidate_places();
            places.extend([Place::Real].into_iter().chain([2u64, 3, 5, 7, 11, 13].map(Place::p)));
            for v in &places {
                match (eval_at_t(g, &t, v), pair_invariant(g, &b0, &bi, v)) {
                    (Ok(a), Ok(c)) => {
                        assert_eq!(a, c, "{x} at {v}");
                        usable += 1;
                    }
                    (Err(_), Err(_)) | (Ok(_), Err(Error::Undefined(_))) => {}
                    other => panic!("{x} at {v}: {other:?}"),
                }
            }
        }
    }
    assert!(usable > 0);
    format!("S(Q) = {{0, 1, -1}} with eps = 5, 5, -1, quadratic factor of norm class -1, n = 1 (reducible), 7/7 points verify, {usable} usable pairs agree")
}

/// The property suites.
fn criterion_4() -> String {
    let start = Instant::now();
    let mut r = rng(4);

    let mut symbols = 0;
    while symbols < 200 {
        let (a, b) = (r.gen_range(-500i64..=500), r.gen_range(-500i64..=500));
        if a == 0 || b == 0 {
            continue;
        }
        let (a, b) = (q(a), q(b));
        let mut places: BTreeSet<Place> = primes_of_rat(&a).into_iter().chain(primes_of_rat(&b)).map(Place::Finite).collect();
        places.extend([Place::Real, Place::p(2)]);
        let total: Half = places.iter().map(|v| hilbert(&a, &b, v).unwrap()).sum();
        assert_eq!(total, Half::ZERO, "({a}, {b})");
        symbols += 1;
    }

    for _ in 0..100 {
        let p = [2i64, 3, 5, 7][r.gen_range(0..4)];
        let n = r.gen_range(3..=5);
        let a: Vec<i64> = (0..n)
            .map(|_| loop {
                let u = r.gen_range(1i64..12);
                if u % p != 0 {
                    let c = u * p.pow(r.gen_range(0..2));
                    break if r.gen_bool(0.5) { -c } else { c };
                }
            })
            .collect();
        let diag: Vec<Rat> = a.iter().map(|&x| q(x)).collect();
        assert_eq!(isotropy(&diag, &Place::p(p as u64)), brute_isotropic(&a, p), "{a:?} at {p}");
    }

    for p in smooth_pencils(43, 50, false) {
        let l = p.singular_locus().unwrap();
        assert!(is_square_rat(&l.total_norm()));
    }

    let (mut candidates, mut irreducible, mut max_n) = (0, 0, 0);
    // block pencils add irreducible T, which the sweep rarely meets
    for p in sweep_pencils().into_iter().chain(block_pencils(3, 300)) {
        let c = check_pencil(&p);
        candidates += c.candidates;
        irreducible += c.irreducible;
        max_n = max_n.max(c.n);
    }
    assert!(irreducible > 0);

    let fields = [Gf::new(2, 1), Gf::new(3, 1), Gf::new(2, 2), Gf::new(5, 1)];
    for i in 0..200 {
        let k = &fields[i % fields.len()];
        let (n1, n2) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let (q1, q2) = (random_form(k, n1, &mut r), random_form(k, n2, &mut r));
        let (a, b) = (rank_ff(k, &q1), rank_ff(k, &q2));
        assert_eq!(a, brute_rank(k, &q1));
        let s = rank_ff(k, &q1.orthogonal_sum(&q2));
        let expect = if k.p() == 2 && a % 2 == 1 && b % 2 == 1 { a + b - 1 } else { a + b };
        assert_eq!(s, expect);
    }
    let t = within(start, Duration::from_secs(600));
    format!(
        "200 reciprocity sums, 100 isotropy oracles, 50 norm squares, 500-pencil sweep plus 300 block pencils (max n = {max_n}), \
         {candidates} R_T dual paths, {irreducible} parity transfers, 200 rank sums, {t}"
    )
}

/// Witnesses for the invariant-sum theorem.
fn criterion_5() -> String {
    let p = fixtures::ab_family(&q(3), &q(7), &q(2)).unwrap();
    let (l, b) = setup(&p);
    let g = &b.generators[0];
    let w = invariant_sum_witness(&p, &l, g, DEFAULT_DEPTH).unwrap().expect("#R_T odd");
    assert_eq!(w.total, Half(g.r_set().places.len() % 2 == 1));
    let mut r = rng(517);
    let mut found = 0;
    while found < 20 {
        let (a, bb, e) = (r.gen_range(-15i64..=15), r.gen_range(-15i64..=15), r.gen_range(-15i64..=15));
        if a * bb * e == 0 || is_square_rat(&q(e)) {
            continue;
        }
        let Ok(p) = fixtures::ab_family(&q(a), &q(bb), &q(e)) else { continue };
        if !p.check_smooth().smooth {
            continue;
        }
        let (l, b) = setup(&p);
        for (g, _) in &b.candidates {
            if let Some(w) = invariant_sum_witness(&p, &l, g, 4).unwrap() {
                assert_eq!(w.total, Half(g.r_set().places.len() % 2 == 1), "({a}, {bb}, {e}), T = {}", g.t);
                found += 1;
            }
        }
    }
    format!("(3, 7, 2) and {found} random odd instances sum to #R_T/2")
}

fn main() -> ExitCode {
    // keep assertion messages in the FAIL lines only
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [(u32, fn() -> String); 5] =
        [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5)];
    let mut all = true;
    for (n, f) in criteria {
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(msg) => println!("PASS criterion {n}: {msg}"),
            Err(e) => {
                all = false;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL criterion {n}: {msg}");
            }
        }
    }
    // The sixth criterion is a declaration, not a computation: the global
    // theorems it names are replaced by the structural checks above.
    if all {
        println!("PASS criterion 6: declared out of reach; its structural replacements (criteria 1-5) pass");
    } else {
        println!("FAIL criterion 6: its structural replacements (criteria 1-5) do not all pass");
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
