//! Integer helpers: factorization, valuations, square classes.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;

/// Prime factorization of `|n|` for `n != 0`, primes ascending.
pub fn factor_int(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factor_int(0)");
    let m = n.magnitude();
    if let Some(small) = m.to_u64() {
        return num_prime::nt_funcs::factorize64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e as u32))
            .collect();
    }
    if let Some(mid) = m.to_u128() {
        return num_prime::nt_funcs::factorize128(mid)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e as u32))
            .collect();
    }
    num_prime::nt_funcs::factorize::<BigUint>(m.clone())
        .into_iter()
        .map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e as u32))
        .collect()
}

pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    match n.to_u64() {
        Some(s) => num_prime::nt_funcs::is_prime64(s),
        None => num_prime::nt_funcs::is_prime::<BigUint>(n.magnitude(), None).probably(),
    }
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn primes_of_rat(r: &Rat) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = factor_int(r.numer()).into_iter().map(|x| x.0).collect();
    out.extend(factor_int(r.denom()).into_iter().map(|x| x.0));
    out.sort();
    out.dedup();
    out
}

/// `v_p(n)` for `n != 0`.
pub fn val_int(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `v_p(r)` for `r != 0`.
pub fn val_rat(r: &Rat, p: &BigInt) -> i64 {
    val_int(r.numer(), p) as i64 - val_int(r.denom(), p) as i64
}

/// `r / p^{v_p(r)}` split as (valuation, unit numerator, unit denominator).
pub fn split_rat(r: &Rat, p: &BigInt) -> (i64, BigInt, BigInt) {
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    let mut v = 0i64;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    while (&d % p).is_zero() {
        d /= p;
        v -= 1;
    }
    (v, n, d)
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

pub fn is_square_rat(r: &Rat) -> bool {
    is_square_int(r.numer()) && is_square_int(r.denom())
}

/// Signed squarefree integer in the square class of `r != 0`.
pub fn squarefree_class(r: &Rat) -> BigInt {
    assert!(!r.is_zero(), "square class of 0");
    // r = n/d ~ n*d in Q^x / Q^x2
    let nd = r.numer() * r.denom();
    let mut out = BigInt::one();
    for (p, e) in factor_int(&nd) {
        if e % 2 == 1 {
            out *= p;
        }
    }
    if nd.is_negative() {
        -out
    } else {
        out
    }
}

/// Legendre symbol `(a/p)` in {-1, 0, 1} for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigInt) -> BigInt {
    let mut c = n + 1u32;
    if c <= BigInt::from(2) {
        return BigInt::from(2);
    }
    if c.is_even() {
        c += 1u32;
    }
    while !is_prime(&c) {
        c += 2u32;
    }
    c
}

/// A quadratic non-residue modulo the odd prime `p` (the smallest one).
pub fn non_residue(p: &BigInt) -> BigInt {
    let mut a = BigInt::from(2);
    while legendre(&a, p) != -1 {
        a += 1u32;
    }
    a
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
