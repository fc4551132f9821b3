use alloc::vec::Vec;

use super::{Matrix, C64, EPS};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Fails with [`Error::Singular`] when a pivot is negligible against the
    /// matrix scale.
    pub fn new(a: &Matrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        lu.set_symmetric_unchecked(false);
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.frobenius_norm();
        let tiny = EPS * EPS * scale.max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny {
                return Err(Error::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.dim();
        if b.len() != n {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        if !super::all_finite(&x) {
            return Err(Error::Singular);
        }
        Ok(x)
    }
}

/// Solves `a x = b`.
pub fn solve(a: &Matrix, b: &[C64]) -> Result<Vec<C64>> {
    Lu::new(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, norm2};
    use alloc::vec;

    #[test]
    fn solves_and_detects_singular() {
        let a = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(2.0, 1.0), c(1.0, 0.0)],
            vec![c(1.0, -1.0), c(0.0, 0.0), c(3.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        let b = vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5)];
        let x = solve(&a, &b).unwrap();
        let r: Vec<C64> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(norm2(&r) < 1e-14);

        let s = Matrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]])
            .unwrap();
        assert!(matches!(solve(&s, &[c(1.0, 0.0), c(0.0, 0.0)]), Err(Error::Singular)));
    }
}
