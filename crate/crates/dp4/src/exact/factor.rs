//! Factorization over Q: squarefree decomposition, then Zassenhaus
//! (factor mod a good prime, Hensel lift, recombine).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::{Fp, PolyP};
use super::poly::Poly;
use super::rat::Rat;
use crate::error::{domain, Result};

/// `unit · Π factor^mult`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }
}

/// Yun's squarefree decomposition of a monic polynomial: pairs `(a_i, i)`
/// with `f = Π a_i^i`, each `a_i` monic squarefree and nonconstant.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut c = f.exact_div(&g).unwrap();
    let mut d = &df.exact_div(&g).unwrap() - &c.derivative();
    let mut i = 1;
    while c.deg() > 0 {
        let a = c.gcd(&d);
        c = c.exact_div(&a).unwrap();
        d = &d.exact_div(&a).unwrap() - &c.derivative();
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

pub fn factor(p: &Poly) -> Result<Factorization> {
    if p.is_zero() {
        return domain("factor of the zero polynomial");
    }
    let unit = p.lc();
    let mut factors = Vec::new();
    for (a, e) in squarefree_decomposition(p) {
        for g in factor_squarefree(&a) {
            factors.push((g, e));
        }
    }
    factors.sort_by(|x, y| x.0.order_key().cmp(&y.0.order_key()).then(x.1.cmp(&y.1)));
    Ok(Factorization { unit, factors })
}

/// Monic irreducible factors of a squarefree polynomial, sorted.
pub fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    let f = f.monic();
    if f.deg() <= 1 {
        return if f.deg() == 1 { vec![f] } else { vec![] };
    }
    let big = f.primitive_int();
    let mut out: Vec<Poly> = zassenhaus(&big).into_iter().map(|g| Poly::from_big(&g).monic()).collect();
    out.sort_by_key(|g| g.order_key());
    out
}

fn reduce(v: &[BigInt], p: u64) -> PolyP {
    let pb = BigInt::from(p);
    let out: PolyP = v.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    Fp::new(p).trim(out)
}

fn choose_prime(f: &[BigInt]) -> Option<(u64, Vec<PolyP>)> {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while p < 50_000 && tried < 6 {
        p += 1;
        if !(2..).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            continue;
        }
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = Fp::new(p);
        let fb = reduce(f, p);
        if !fp.is_squarefree(&fb) {
            continue;
        }
        tried += 1;
        let facs = fp.factor_squarefree(&fp.monic(&fb));
        if best.as_ref().map_or(true, |b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    best
}

fn sym_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c.iter().map(|x| x.mod_floor(m)).collect()
}

fn lift_u(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lift `t ≡ g·h (mod p)` with `g` monic to `t ≡ G·H (mod p^k)`.
fn hensel_pair(t: &[BigInt], g: &PolyP, h: &PolyP, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let fp = Fp::new(p);
    let (one, s, tt) = fp.pxgcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let _ = s;
    let pb = BigInt::from(p);
    let mut gg = lift_u(g);
    let mut hh = lift_u(h);
    let mut pj = pb.clone();
    let pk = pb.pow(k);
    for _ in 1..k {
        let prod = zmul(&gg, &hh, &pk);
        let n = t.len().max(prod.len());
        let e: Vec<BigInt> = (0..n)
            .map(|i| {
                let a = t.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default();
                let a = a.mod_floor(&pk);
                debug_assert!((&a % &pj).is_zero());
                a / &pj
            })
            .collect();
        let ep = reduce(&e, p);
        let dg = fp.prem(&fp.pmul(&tt, &ep), g);
        let dh = fp.pdivrem(&fp.psub(&ep, &fp.pmul(h, &dg)), g).0;
        for (i, c) in dg.iter().enumerate() {
            gg[i] += &pj * c;
        }
        if hh.len() < dh.len() {
            hh.resize(dh.len(), BigInt::zero());
        }
        for (i, c) in dh.iter().enumerate() {
            hh[i] += &pj * c;
        }
        pj *= &pb;
    }
    (gg, hh)
}

fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let Some((p, modf)) = choose_prime(f) else {
        panic!("no good prime found for factorization");
    };
    if modf.len() == 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    while pb.pow(k) <= bound {
        k += 1;
    }
    let pk = pb.pow(k);
    let fp = Fp::new(p);

    // multifactor lifting, peeling one factor at a time
    let lcp = (lc.mod_floor(&pb)).to_u64().unwrap();
    let mut lifted: Vec<Vec<BigInt>> = Vec::new();
    let mut target: Vec<BigInt> = f.iter().map(|c| c.mod_floor(&pk)).collect();
    for i in 0..modf.len() - 1 {
        let mut rest: PolyP = vec![lcp];
        for g in &modf[i + 1..] {
            rest = fp.pmul(&rest, g);
        }
        let (gg, hh) = hensel_pair(&target, &modf[i], &rest, p, k);
        lifted.push(gg);
        target = hh;
    }
    let lc_inv = lc.modinv(&pk).expect("lc invertible mod p^k");
    lifted.push(target.iter().map(|c| (c * &lc_inv).mod_floor(&pk)).collect());

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut poly = Poly::from_big(f);
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut hit = None;
        let cur_lc: BigInt = poly.primitive_int().last().unwrap().clone();
        for combo in combinations(remaining.len(), s) {
            let mut g: Vec<BigInt> = vec![cur_lc.mod_floor(&pk)];
            for &ix in &combo {
                g = zmul(&g, &lifted[remaining[ix]], &pk);
            }
            let g: Vec<BigInt> = g.iter().map(|c| sym_mod(c, &pk)).collect();
            let cand = Poly::from_big(&g);
            if cand.deg() == 0 {
                continue;
            }
            let cand = Poly::from_big(&cand.primitive_int());
            if let Some(q) = poly.exact_div(&cand) {
                hit = Some((combo, cand, q));
                break;
            }
        }
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand.primitive_int());
                poly = Poly::from_big(&q.primitive_int());
                remaining = remaining.iter().enumerate().filter(|(i, _)| !combo.contains(i)).map(|(_, &x)| x).collect();
            }
            None => s += 1,
        }
    }
    if poly.deg() > 0 {
        found.push(poly.primitive_int());
    }
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
