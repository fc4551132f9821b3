#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use super::{hdot, norm2, Matrix, C64, EPS};

/// Singular value decomposition `A = U diag(sigma) V^H`, singular values
/// in descending order. Columns of `u` belonging to zero singular values
/// are left as zero vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Vec<Vec<C64>>,
    pub sigma: Vec<f64>,
    pub v: Vec<Vec<C64>>,
}

impl Svd {
    /// Minimum-norm least-squares solution of `A x = b`, discarding singular
    /// values at or below `cutoff`.
    pub fn solve_min_norm(&self, b: &[C64], cutoff: f64) -> Vec<C64> {
        let n = self.v.len();
        let mut x = vec![C64::new(0.0, 0.0); n];
        for ((uj, vj), &s) in self.u.iter().zip(&self.v).zip(&self.sigma) {
            if s <= cutoff {
                continue;
            }
            let coef = hdot(uj, b) / s;
            for (xi, vi) in x.iter_mut().zip(vj) {
                *xi += coef * vi;
            }
        }
        x
    }
}

/// One-sided (Hestenes) Jacobi SVD of a square complex matrix.
pub fn svd(a: &Matrix) -> Svd {
    let n = a.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = hdot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                // remove the phase of column q so the cross term is real
                for z in cols[q].iter_mut() {
                    *z *= phase.conj();
                }
                for z in v[q].iter_mut() {
                    *z *= phase.conj();
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for target in [&mut cols, &mut v] {
                    let (lo, hi) = target.split_at_mut(q);
                    let (cp, cq) = (&mut lo[p], &mut hi[0]);
                    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                        let a0 = *x;
                        let b0 = *y;
                        *x = a0 * cs - b0 * sn;
                        *y = a0 * sn + b0 * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = cols.iter().map(|col| norm2(col)).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap_or(core::cmp::Ordering::Equal));
    let mut u = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut vv = Vec::with_capacity(n);
    for &j in &order {
        let s = sig[j];
        let col = if s > 0.0 {
            cols[j].iter().map(|z| z / s).collect()
        } else {
            vec![C64::new(0.0, 0.0); n]
        };
        u.push(col);
        sigma.push(s);
        vv.push(v[j].clone());
    }
    Svd { u, sigma, v: vv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..8 {
            let a = Matrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .unwrap();
            let s = svd(&a);
            for w in s.sigma.windows(2) {
                assert!(w[0] >= w[1]);
            }
            let rec = Matrix::from_fn(n, |i, j| {
                (0..n).map(|k| s.u[k][i] * s.sigma[k] * s.v[k][j].conj()).sum()
            })
            .unwrap();
            assert!(rec.max_abs_diff(&a) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn jordan_block_singular_values() {
        let a = Matrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let s = svd(&a);
        assert!((s.sigma[0] - 1.0).abs() < 1e-15 && s.sigma[1] == 0.0);
        let x = s.solve_min_norm(&[c(1.0, 0.0), c(0.0, 0.0)], 1e-12);
        assert!((x[0]).norm() < 1e-15 && (x[1] - c(1.0, 0.0)).norm() < 1e-15);
    }
}
