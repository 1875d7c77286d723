//! Bounded-precision p-adic helpers: unit residues, square roots and roots
//! of integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::int::split_rat;
use crate::exact::modp::Fp;
use crate::exact::Rat;

/// A nonzero element of Q_p known as `p^val · unit` with the unit known
/// modulo `p^prec` (prec ≥ 3 for p = 2, ≥ 1 otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    pub val: i64,
    pub unit: BigInt,
    pub prec: u32,
}

impl PAdic {
    pub fn from_rat(r: &Rat, p: &BigInt, prec: u32) -> PAdic {
        assert!(!r.is_zero());
        let (val, n, d) = split_rat(r, p);
        let m = p.pow(prec);
        let dinv = d.mod_floor(&m).modinv(&m).expect("unit");
        PAdic { val, unit: (n * dinv).mod_floor(&m), prec }
    }

    /// Unit residue modulo 8 (p = 2) or p (p odd).
    pub fn residue(&self, p: &BigInt) -> u64 {
        let m = if p == &BigInt::from(2) { BigInt::from(8) } else { p.clone() };
        self.unit.mod_floor(&m).to_u64().unwrap()
    }
}

/// A square root of `d` in Z_p modulo `p^prec`, for `d` a p-adic unit that
/// is a square (d ≡ 1 mod 8 when p = 2). `branch` picks one of the two
/// roots: the root whose residue mod p (mod 4 for p = 2) is the smaller one
/// for branch 0, its negative for branch 1.
pub fn sqrt_unit(d: &BigInt, p: &BigInt, prec: u32, branch: u8) -> BigInt {
    let two = BigInt::from(2);
    let m = p.pow(prec);
    let r = if p == &two {
        assert!(d.mod_floor(&BigInt::from(8)) == BigInt::one(), "not a 2-adic square unit");
        let mut r = BigInt::one();
        for k in 3..prec.max(3) {
            // invariant: r² ≡ d mod 2^k
            let mk1 = two.pow(k + 1);
            if (&r * &r - d).mod_floor(&mk1) != BigInt::zero() {
                r += two.pow(k - 1);
            }
        }
        let r = r.mod_floor(&m);
        if r.mod_floor(&BigInt::from(4)) == BigInt::one() {
            r
        } else {
            (-r).mod_floor(&m)
        }
    } else {
        let r0 = sqrt_mod_prime(&d.mod_floor(p), p).expect("not a square residue");
        let r0 = if &r0 * 2 > *p { p - r0 } else { r0 };
        let mut r = r0;
        let mut k = 1;
        while k < prec {
            k = (2 * k).min(prec);
            let mk = p.pow(k);
            let f = (&r * &r - d).mod_floor(&mk);
            let inv = (BigInt::from(2) * &r).mod_floor(&mk).modinv(&mk).unwrap();
            r = (&r - f * inv).mod_floor(&mk);
        }
        r.mod_floor(&m)
    };
    if branch == 0 {
        r
    } else {
        (-r).mod_floor(&m)
    }
}

/// Tonelli–Shanks for odd p; `None` if `a` is a non-residue.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(a);
    }
    let one = BigInt::one();
    let pm1 = p - 1u32;
    if a.modpow(&(&pm1 >> 1), p) != one {
        return None;
    }
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 >> 1), p) == one {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while t != one {
        let mut i = 0;
        let mut tt = t.clone();
        while tt != one {
            tt = (&tt * &tt).mod_floor(p);
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (t * &c).mod_floor(p);
        r = (r * b).mod_floor(p);
    }
    Some(r)
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn val_or(n: &BigInt, p: &BigInt, cap: u32) -> u32 {
    if n.is_zero() {
        return cap;
    }
    crate::exact::int::val_int(n, p).min(cap)
}

/// Roots in Z_p of a squarefree integer polynomial, each returned modulo
/// `p^prec`. Candidates are refined digit by digit and finished by Newton
/// iteration once the Hensel condition `v(f(r)) > 2 v(f'(r))` holds.
pub fn integral_roots(f: &[BigInt], p: &BigInt, prec: u32) -> Vec<BigInt> {
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let work = prec * 2 + 64;
    let mw = p.pow(work);
    let mut out = Vec::new();
    // (residue r mod p^k, k)
    let mut stack: Vec<(BigInt, u32)> = vec![(BigInt::zero(), 0)];
    let plimit = p.to_u64().unwrap_or(u64::MAX);
    while let Some((r, k)) = stack.pop() {
        let fr = eval_mod(f, &r, &mw);
        let dfr = eval_mod(&df, &r, &mw);
        let vf = val_or(&fr, p, work);
        let vd = val_or(&dfr, p, work);
        if k >= 1 && vf < k {
            continue;
        }
        if k >= 1 && k > vd && vf > 2 * vd && vd < work / 4 {
            // Newton converges to a unique root congruent to r mod p^{vf - vd}
            let mut x = r.clone();
            for _ in 0..64 {
                let fx = eval_mod(f, &x, &mw);
                if fx.is_zero() || val_or(&fx, p, work) >= work - 1 {
                    break;
                }
                let dx = eval_mod(&df, &x, &mw);
                let vdx = val_or(&dx, p, work);
                let u = &dx / p.pow(vdx);
                let uinv = u.mod_floor(&mw).modinv(&mw).unwrap();
                let step = (&fx / p.pow(vdx)) * uinv;
                x = (x - step).mod_floor(&mw);
            }
            out.push(x.mod_floor(&p.pow(prec)));
            continue;
        }
        if k >= work / 2 {
            // multiple root to working precision; cannot happen for squarefree f
            out.push(r.mod_floor(&p.pow(prec)));
            continue;
        }
        if plimit >= 1000 {
            if k == 0 && plimit < (1 << 31) {
                stack.extend(roots_mod_p(f, plimit).into_iter().map(|a| (BigInt::from(a), 1)));
            } else if k >= 1 {
                // a root that is multiple mod p of a large prime: keep it at the precision reached
                out.push(r.mod_floor(&p.pow(prec)));
            }
            continue;
        }
        let pk = p.pow(k);
        for a in 0..plimit {
            stack.push((&r + &pk * BigInt::from(a), k + 1));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Roots in F_p of an integer polynomial, from `gcd(f, x^p − x)`.
fn roots_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    let fp = Fp::new(p);
    let pb = BigInt::from(p);
    let red: Vec<u64> = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    let red = fp.trim(red);
    if red.len() <= 1 {
        return Vec::new();
    }
    let m = fp.monic(&red);
    let xp = fp.ppowmod(&[0, 1], &num_bigint::BigUint::from(p), &m);
    let g = fp.pgcd(&m, &fp.psub(&xp, &[0, 1]));
    if g.len() <= 1 {
        return Vec::new();
    }
    fp.factor_squarefree(&g).iter().map(|l| (p - l[0]) % p).collect()
}

/// Sign-aware helper: the symmetric residue of `a` modulo `m`.
pub fn sym(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if (&r * BigInt::from(2)).abs() > *m {
        r - m
    } else {
        r
    }
}
