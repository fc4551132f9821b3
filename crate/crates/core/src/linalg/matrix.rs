use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use super::{all_finite, C64};
use crate::error::{Error, Result};

/// Entrywise tolerance certified by the complex-symmetric flag.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense square complex matrix, row-major.
///
/// Entries are finite on construction. The `symmetric` flag certifies
/// `M = M^T` (complex symmetric, not Hermitian) to within [`SYMMETRY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<C64>,
    symmetric: bool,
}

impl Matrix {
    /// Builds from `rows` x `cols` row-major data. Fails unless square,
    /// non-empty, and finite.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows != cols {
            return Err(Error::Dimension(format!("matrix is {rows}x{cols}, not square")));
        }
        if rows == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("matrix entry".into()));
        }
        Ok(Self { n: rows, data, symmetric: false })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Self::new(n, n, data)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, n, data)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "empty matrix");
        Self { n, data: vec![C64::new(0.0, 0.0); n * n], symmetric: false }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(d: &[C64]) -> Result<Self> {
        let n = d.len();
        if n == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if !all_finite(d) {
            return Err(Error::NonFinite("diagonal entry".into()));
        }
        let mut m = Self::zeros(n);
        for (i, v) in d.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m.symmetric = true;
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Largest entrywise deviation from `M = M^T`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }

    /// Sets the complex-symmetric flag after verifying it.
    pub fn certify_symmetric(mut self) -> Result<Self> {
        let d = self.symmetry_defect();
        if d > SYMMETRY_TOL {
            return Err(Error::Contract(format!("matrix is not complex symmetric (defect {d:e})")));
        }
        self.symmetric = true;
        Ok(self)
    }

    /// Drops the symmetric flag, forcing general code paths.
    pub fn without_symmetric_flag(mut self) -> Self {
        self.symmetric = false;
        self
    }

    pub(crate) fn set_symmetric_unchecked(&mut self, flag: bool) {
        self.symmetric = flag;
    }

    pub fn frobenius_norm(&self) -> f64 {
        super::norm2(&self.data)
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = self.transpose();
        for z in t.data.iter_mut() {
            *z = z.conj();
        }
        t.symmetric = false;
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        let n = self.n;
        if other.n != n {
            return Err(Error::Dimension(format!("{n}x{n} times {}x{}", other.n, other.n)));
        }
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Matrix::new(n, n, out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "vector length");
        (0..self.n).map(|i| super::cdot(self.row(i), v)).collect()
    }

    /// Row vector times matrix: `(u M)_j = sum_i u_i M_ij`.
    pub fn vec_mul(&self, u: &[C64]) -> Vec<C64> {
        assert_eq!(u.len(), self.n, "vector length");
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                out[j] += u[i] * self.data[i * n + j];
            }
        }
        out
    }

    /// `self - z I`.
    pub fn shifted(&self, z: C64) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] -= z;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if other.n != self.n {
            return Err(Error::Dimension("matrix sizes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        let mut m = Matrix::new(self.n, self.n, data)?;
        m.symmetric = self.symmetric && other.symmetric;
        Ok(m)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if other.n != self.n {
            return Err(Error::Dimension("matrix sizes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        let mut m = Matrix::new(self.n, self.n, data)?;
        m.symmetric = self.symmetric && other.symmetric;
        Ok(m)
    }

    pub fn scaled(&self, s: C64) -> Matrix {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z *= s;
        }
        out
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Every finite? Used after in-place arithmetic that bypasses `new`.
    pub fn is_finite(&self) -> bool {
        all_finite(&self.data)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

/// Writes bypass the finiteness and symmetry checks; crate code that
/// mutates in place is responsible for both.
impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}
