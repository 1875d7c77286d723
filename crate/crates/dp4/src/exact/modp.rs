//! Polynomials over a prime field `F_p` (word-size `p`), enough for
//! Cantor–Zassenhaus factorization and Hensel lifting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;

/// The prime field `F_p`, `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

pub type PolyP = Vec<u64>;

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!(p >= 2 && p < (1 << 31));
        Fp { p }
    }

    pub fn reduce_i(&self, a: i128) -> u64 {
        a.rem_euclid(self.p as i128) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero mod p");
        self.pow(a, self.p - 2)
    }

    pub fn trim(&self, mut a: PolyP) -> PolyP {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn padd(&self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        self.trim(v)
    }

    pub fn psub(&self, a: &[u64], b: &[u64]) -> PolyP {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        self.trim(v)
    }

    pub fn pmul(&self, a: &[u64], b: &[u64]) -> PolyP {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % self.p;
            }
        }
        self.trim(c)
    }

    pub fn pscale(&self, a: &[u64], s: u64) -> PolyP {
        self.trim(a.iter().map(|&x| x * (s % self.p) % self.p).collect())
    }

    pub fn pdivrem(&self, a: &[u64], d: &[u64]) -> (PolyP, PolyP) {
        assert!(!d.is_empty(), "division by zero polynomial mod p");
        let dd = d.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= dd {
            return (vec![], self.trim(r));
        }
        let inv = self.inverse(d[dd]);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd] * inv % self.p;
            if c != 0 {
                for (j, &b) in d.iter().enumerate() {
                    r[k + j] = (r[k + j] + self.p - c * b % self.p) % self.p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (self.trim(q), self.trim(r))
    }

    pub fn prem(&self, a: &[u64], d: &[u64]) -> PolyP {
        self.pdivrem(a, d).1
    }

    pub fn monic(&self, a: &[u64]) -> PolyP {
        match a.last() {
            None => vec![],
            Some(&l) => self.pscale(a, self.inverse(l)),
        }
    }

    pub fn pgcd(&self, a: &[u64], b: &[u64]) -> PolyP {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.prem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns (g, s, t) with s·a + t·b = g monic.
    pub fn pxgcd(&self, a: &[u64], b: &[u64]) -> (PolyP, PolyP, PolyP) {
        let (mut r0, mut r1) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        let (mut s0, mut s1): (PolyP, PolyP) = (vec![1], vec![]);
        let (mut t0, mut t1): (PolyP, PolyP) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(&r0, &r1);
            let s = self.psub(&s0, &self.pmul(&q, &s1));
            let t = self.psub(&t0, &self.pmul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inverse(*r0.last().expect("nonzero gcd"));
        (self.pscale(&r0, inv), self.pscale(&s0, inv), self.pscale(&t0, inv))
    }

    pub fn pderiv(&self, a: &[u64]) -> PolyP {
        self.trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % self.p) * c % self.p).collect())
    }

    /// `b^e mod m` with a big exponent given as little-endian u64 limbs.
    pub fn ppowmod(&self, b: &[u64], e: &num_bigint::BigUint, m: &[u64]) -> PolyP {
        let mut acc: PolyP = self.prem(&[1], m);
        let base = self.prem(b, m);
        for i in (0..e.bits()).rev() {
            acc = self.prem(&self.pmul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.prem(&self.pmul(&acc, &base), m);
            }
        }
        acc
    }

    pub fn peval(&self, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| (acc * x + c) % self.p)
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        let d = self.pderiv(a);
        !d.is_empty() && self.pgcd(a, &d).len() == 1
    }

    /// Monic irreducible factors of a monic squarefree polynomial, `p` odd.
    /// Deterministic: the equal-degree splitting uses a fixed-seed generator.
    pub fn factor_squarefree(&self, f: &[u64]) -> Vec<PolyP> {
        assert!(self.p % 2 == 1, "Cantor–Zassenhaus needs odd p");
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x: PolyP = vec![0, 1];
        let mut h = x.clone();
        let mut d = 0u32;
        let pbig = num_bigint::BigUint::from(self.p);
        while rest.len() > 1 {
            d += 1;
            if 2 * d as usize > rest.len() - 1 {
                out.push(rest.clone());
                break;
            }
            h = self.ppowmod(&h, &pbig, &rest);
            let g = self.pgcd(&rest, &self.psub(&h, &x));
            if g.len() > 1 {
                out.extend(self.equal_degree(&g, d as usize));
                rest = self.pdivrem(&rest, &g).0;
                h = self.prem(&h, &rest);
            }
        }
        out.sort();
        out
    }

    fn equal_degree(&self, f: &[u64], d: usize) -> Vec<PolyP> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.p ^ (n as u64) << 32);
        let e = (num_bigint::BigUint::from(self.p).pow(d as u32) - 1u32) >> 1;
        loop {
            let a: PolyP = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.psub(&self.ppowmod(&a, &e, f), &[1]);
            let g = self.pgcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let other = self.pdivrem(f, &g).0;
                let mut v = self.equal_degree(&g, d);
                v.extend(self.equal_degree(&self.monic(&other), d));
                return v;
            }
        }
    }
}

impl Field for Fp {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        self.inverse(*a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}
