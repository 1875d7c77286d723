#![allow(dead_code)]

pub mod oracles;

use dp4::exact::Rat;
use dp4::pencil::{Pencil, QuadraticForm5};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random pencil with small integer coefficients; `sparse` zeroes most
/// cross terms so that 𝒮 often has rational points.
pub fn random_pencil(r: &mut ChaCha8Rng, sparse: bool) -> Option<Pencil> {
    let form = |r: &mut ChaCha8Rng| {
        let c: Vec<i64> = (0..15)
            .map(|i| {
                let diag = [0, 5, 9, 12, 14].contains(&i);
                if sparse && !diag && r.gen_bool(0.8) {
                    0
                } else {
                    r.gen_range(-5..=5)
                }
            })
            .collect();
        QuadraticForm5::from_ints(&c)
    };
    let q0 = form(r);
    let qi = form(r);
    Pencil::from_qinf(&q0, &qi).ok()
}

/// Random pencils satisfying (†).
pub fn smooth_pencils(seed: u64, count: usize, sparse: bool) -> Vec<Pencil> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        if let Some(p) = random_pencil(&mut r, sparse) {
            if p.check_smooth().smooth {
                out.push(p);
            }
        }
    }
    out
}

/// Diagonal pencil with Q₀ = Σ aᵢxᵢ², Q_∞ = Σ bᵢxᵢ².
pub fn diagonal(a: [i64; 5], b: [i64; 5]) -> Pencil {
    let mut c0 = vec![0i64; 15];
    let mut c1 = vec![0i64; 15];
    for i in 0..5 {
        c0[dp4::pencil::monomial_index(i, i)] = a[i];
        c1[dp4::pencil::monomial_index(i, i)] = b[i];
    }
    Pencil::from_qinf(&QuadraticForm5::from_ints(&c0), &QuadraticForm5::from_ints(&c1)).unwrap()
}

pub fn q(n: i64) -> Rat {
    dp4::exact::rat(n)
}

/// Pencils `Q = B ⊕ ⟨a₂, a₃, a₄⟩` with a random binary block `B`, so that
/// `f` often has an irreducible quadratic factor; (†) holds for all.
pub fn block_pencils(seed: u64, count: usize) -> Vec<Pencil> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut c0 = vec![0i64; 15];
        let mut c1 = vec![0i64; 15];
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            c0[dp4::pencil::monomial_index(i, j)] = r.gen_range(-6..=6);
            c1[dp4::pencil::monomial_index(i, j)] = r.gen_range(-6..=6);
        }
        for i in 2..5 {
            c0[dp4::pencil::monomial_index(i, i)] = r.gen_range(-9..=9);
            c1[dp4::pencil::monomial_index(i, i)] = r.gen_range(-9..=9);
        }
        if let Ok(p) = Pencil::from_qinf(&QuadraticForm5::from_ints(&c0), &QuadraticForm5::from_ints(&c1)) {
            if p.check_smooth().smooth {
                out.push(p);
            }
        }
    }
    out
}

/// 200 sparse random pencils and 300 diagonal ones, all satisfying (†).
pub fn sweep_pencils() -> Vec<Pencil> {
    let mut out = smooth_pencils(41, 200, true);
    let mut r = rng(42);
    while out.len() < 500 {
        let a: [i64; 5] = std::array::from_fn(|_| r.gen_range(-9..=9));
        let b: [i64; 5] = std::array::from_fn(|_| r.gen_range(-9..=9));
        if b.contains(&0) {
            continue;
        }
        let p = diagonal(a, b);
        if p.check_smooth().smooth {
            out.push(p);
        }
    }
    out
}
