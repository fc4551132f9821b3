use alloc::format;
use alloc::vec::Vec;

use super::{hdot, norm2, svd, Matrix, C64};
use crate::error::{Error, Result};

/// Tolerances for [`jordan_chain_with`].
#[derive(Clone, Copy, Debug)]
pub struct JordanOptions {
    /// Singular values at or below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Accept only if `defect_residual <= defect_tol * ||m||_F`.
    pub defect_tol: f64,
}

impl Default for JordanOptions {
    fn default() -> Self {
        Self { rank_tol: 1e-6, defect_tol: 1e-8 }
    }
}

/// Eigenvector and associated vector at a coalesced eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanSolve {
    pub eigenvalue: C64,
    /// Unit null vector of `m - eps0`, largest component real positive.
    pub eigenvector: Vec<C64>,
    /// Solves `(m - eps0) x = eigenvector`, orthogonal to `eigenvector`.
    pub associated: Vec<C64>,
    /// `||(m - eps0) eigenvector||_2`.
    pub null_residual: f64,
    /// `||(m - eps0) associated - eigenvector||_2`.
    pub defect_residual: f64,
}

pub fn jordan_chain(m: &Matrix, eps0: C64) -> Result<JordanSolve> {
    jordan_chain_with(m, eps0, &JordanOptions::default())
}

/// Jordan relations `(m - eps0) phi = 0`, `(m - eps0) phi_a = phi`.
///
/// The null vector comes from the SVD of the shifted matrix; the associated
/// vector is the minimum-norm least-squares solution with its component
/// along the eigenvector projected out. A shifted matrix whose numerical
/// rank is not `n - 1`, or whose chain equation is not solvable (a simple,
/// non-defective eigenvalue), is rejected with [`Error::NotAnEp`].
pub fn jordan_chain_with(m: &Matrix, eps0: C64, opts: &JordanOptions) -> Result<JordanSolve> {
    let n = m.dim();
    let a = m.shifted(eps0);
    let s = svd(&a);
    let smax = s.sigma[0];
    let cutoff = opts.rank_tol * smax.max(f64::MIN_POSITIVE);
    let deficiency = s.sigma.iter().filter(|&&x| x <= cutoff).count();
    if deficiency != 1 {
        return Err(Error::NotAnEp(format!(
            "rank deficiency {deficiency} of the shifted matrix (need 1 for a second-order EP); n = {n}"
        )));
    }
    let mut phi = s.v[n - 1].clone();
    let k = super::argmax_modulus(&phi);
    let ph = phi[k] / phi[k].norm();
    for z in phi.iter_mut() {
        *z /= ph;
    }
    let mut assoc = s.solve_min_norm(&phi, cutoff);
    let along = hdot(&phi, &assoc);
    for (x, p) in assoc.iter_mut().zip(&phi) {
        *x -= along * p;
    }
    let null_residual = norm2(&a.mul_vec(&phi));
    let ax = a.mul_vec(&assoc);
    let diff: Vec<C64> = ax.iter().zip(&phi).map(|(p, q)| p - q).collect();
    let defect_residual = norm2(&diff);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    if defect_residual > opts.defect_tol * scale {
        return Err(Error::NotAnEp(format!(
            "chain equation not solvable (defect residual {defect_residual:e}); eigenvalue is semisimple"
        )));
    }
    Ok(JordanSolve { eigenvalue: eps0, eigenvector: phi, associated: assoc, null_residual, defect_residual })
}
