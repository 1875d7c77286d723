use super::{Half, LocalField};

/// Whether the diagonal form `⟨a1, …, an⟩` (entries nonzero) represents 0
/// nontrivially over the completion.
pub fn isotropy<L: LocalField>(diag: &[L::Elem], w: &L) -> bool {
    let n = diag.len();
    if n < 2 {
        return false;
    }
    match w.archimedean() {
        Some(false) => true,
        Some(true) => {
            let pos = diag.iter().filter(|a| w.is_square(a)).count();
            pos > 0 && pos < n
        }
        None => {
            if n >= 5 {
                return true;
            }
            let d = diag.iter().skip(1).fold(diag[0].clone(), |acc, a| w.mul(&acc, a));
            if n == 2 {
                return w.is_square(&w.neg(&d));
            }
            let mut eps = Half::ZERO;
            for i in 0..n {
                for j in i + 1..n {
                    eps += w.hilbert(&diag[i], &diag[j]);
                }
            }
            let m1 = w.neg(&w.one());
            if n == 3 {
                eps == w.hilbert(&m1, &w.neg(&d))
            } else if !w.is_square(&d) {
                true
            } else {
                eps == w.hilbert(&m1, &m1)
            }
        }
    }
}
