//! Dense linear algebra over any [`Field`].

use super::field::Field;

pub type Matrix<E> = Vec<Vec<E>>;

/// Row echelon form in place; returns pivot columns.
fn echelon<F: Field>(k: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !k.is_zero(&m[i][c])).min_by_key(|&i| k.height(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = k.inv(&m[r][c]);
        for j in c..cols {
            m[r][j] = k.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = k.mul(&f, &m[r][j]);
                    m[i][j] = k.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(k: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    echelon(k, &mut a).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let piv = echelon(k, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); cols];
            v[f] = k.one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = k.neg(&a[r][f]);
            }
            v
        })
        .collect()
}

pub fn det<F: Field>(k: &F, m: &Matrix<F::Elem>) -> F::Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut d = k.one();
    for c in 0..n {
        let Some(p) = (c..n).filter(|&i| !k.is_zero(&a[i][c])).min_by_key(|&i| k.height(&a[i][c])) else {
            return k.zero();
        };
        if p != c {
            a.swap(p, c);
            d = k.neg(&d);
        }
        d = k.mul(&d, &a[c][c]);
        let inv = k.inv(&a[c][c]);
        for i in c + 1..n {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            for j in c..n {
                let t = k.mul(&f, &a[c][j]);
                a[i][j] = k.sub(&a[i][j], &t);
            }
        }
    }
    d
}

pub fn mat_vec<F: Field>(k: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b))))
        .collect()
}

/// `xᵀ M y`.
pub fn bilinear<F: Field>(k: &F, m: &Matrix<F::Elem>, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let my = mat_vec(k, m, y);
    x.iter().zip(&my).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
}

/// Gram matrix of `m` in the basis given by the rows of `b`: `B M Bᵀ`.
pub fn congruence<F: Field>(k: &F, m: &Matrix<F::Elem>, b: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    b.iter().map(|x| b.iter().map(|y| bilinear(k, m, x, y)).collect()).collect()
}

/// Diagonal entries of a congruence-diagonalization of the symmetric matrix
/// `m` (characteristic ≠ 2). Zero entries account for the radical.
/// With `fix_first`, the first basis vector is kept as the first pivot
/// (its value must be nonzero), so the remaining entries diagonalize its
/// orthogonal complement.
pub fn diagonalize<F: Field>(k: &F, m: &Matrix<F::Elem>, fix_first: bool) -> Vec<F::Elem> {
    let n = m.len();
    let mut a = m.clone();
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let pick = if fix_first && s == 0 {
            assert!(!k.is_zero(&a[0][0]), "fixed pivot is isotropic");
            Some(0)
        } else {
            (s..n).filter(|&i| !k.is_zero(&a[i][i])).min_by_key(|&i| k.height(&a[i][i]))
        };
        let p = match pick {
            Some(p) => p,
            None => {
                // all remaining diagonal entries vanish: use e_i + e_j
                let found = (s..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !k.is_zero(&a[i][j]));
                let Some((i, j)) = found else {
                    out.extend((s..n).map(|_| k.zero()));
                    return out;
                };
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] = k.add(&a[r][i], &t);
                }
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] = k.add(&a[i][c], &t);
                }
                i
            }
        };
        if p != s {
            a.swap(p, s);
            for row in a.iter_mut() {
                row.swap(p, s);
            }
        }
        let piv = a[s][s].clone();
        let inv = k.inv(&piv);
        for i in s + 1..n {
            if k.is_zero(&a[i][s]) {
                continue;
            }
            let f = k.mul(&a[i][s], &inv);
            for j in s..n {
                let t = k.mul(&f, &a[s][j]);
                a[i][j] = k.sub(&a[i][j], &t);
            }
            for r in s..n {
                let t = k.mul(&f, &a[r][s]);
                a[r][i] = k.sub(&a[r][i], &t);
            }
        }
        out.push(piv);
    }
    out
}
