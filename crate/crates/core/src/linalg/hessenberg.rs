use alloc::vec::Vec;

use super::{norm2, Matrix, C64};
use crate::error::Result;

/// Householder reduction to upper Hessenberg form.
///
/// Returns `(H, Q)` with `Q` unitary and `Q H Q^H = m`. Columns that are
/// already in Hessenberg form are skipped, so a matrix that is already
/// Hessenberg comes back unchanged with `Q = I`.
pub fn hessenberg(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = m.dim();
    let mut h = m.clone();
    h.set_symmetric_unchecked(false);
    let mut q = Matrix::identity(n);
    if n < 3 {
        return Ok((h, q));
    }
    let zero = C64::new(0.0, 0.0);
    let mut v: Vec<C64> = Vec::with_capacity(n);

    for k in 0..n - 2 {
        let x: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let tail = norm2(&x[1..]);
        if tail == 0.0 {
            continue;
        }
        let xnorm = norm2(&x);
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        v.clear();
        v.extend_from_slice(&x);
        v[0] -= alpha;
        let vn = norm2(&v);
        for z in v.iter_mut() {
            *z /= vn;
        }

        // H <- P H with P = I - 2 v v^H acting on rows k+1..n
        for j in 0..n {
            let mut s = zero;
            for (t, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + t, j)];
            }
            let s2 = s * 2.0;
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * s2;
            }
        }
        // H <- H P, Q <- Q P acting on columns k+1..n
        for target in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = zero;
                for (t, vi) in v.iter().enumerate() {
                    s += target[(i, k + 1 + t)] * vi;
                }
                let s2 = s * 2.0;
                for (t, vi) in v.iter().enumerate() {
                    target[(i, k + 1 + t)] -= s2 * vi.conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = zero;
        }
    }
    Ok((h, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reconstruct(h: &Matrix, q: &Matrix) -> Matrix {
        q.matmul(h).unwrap().matmul(&q.conj_transpose()).unwrap()
    }

    #[test]
    fn diagonal_is_untouched() {
        let m = Matrix::diag(&[c(1.0, 0.0), c(2.0, -1.0), c(-3.0, 0.5)]).unwrap();
        let (h, q) = hessenberg(&m).unwrap();
        assert_eq!(h.max_abs_diff(&m), 0.0);
        assert_eq!(q.max_abs_diff(&Matrix::identity(3)), 0.0);
    }

    #[test]
    fn scalar_case() {
        let m = Matrix::new(1, 1, alloc::vec![c(2.0, 1.0)]).unwrap();
        let (h, q) = hessenberg(&m).unwrap();
        assert_eq!(h[(0, 0)], c(2.0, 1.0));
        assert_eq!(q[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn random_reconstruction_and_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 6, 11] {
            let m = Matrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .unwrap();
            let (h, q) = hessenberg(&m).unwrap();
            for i in 0..n {
                for j in 0..i.saturating_sub(1) {
                    assert_eq!(h[(i, j)], c(0.0, 0.0));
                }
            }
            let err = reconstruct(&h, &q).sub(&m).unwrap().frobenius_norm();
            assert!(err <= 1e-12 * m.frobenius_norm(), "n={n} err={err:e}");
            let qq = q.conj_transpose().matmul(&q).unwrap();
            assert!(qq.max_abs_diff(&Matrix::identity(n)) < 1e-13);
        }
    }
}
