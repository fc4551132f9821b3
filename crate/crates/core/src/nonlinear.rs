//! Cubic source-term Schrodinger equation `(H0 - e) phi = <phi|W|phi> D(phi) phi`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, cdot, eig, hdot, norm2, Matrix, C64};
use crate::spectra::ModeSet;

/// Bracket used for the matrix elements of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Bracket {
    /// `<a|W|b> = a^H W b`.
    #[default]
    Hermitian,
    /// `a^T W b`, the c-product.
    CProduct,
}

/// Reading of the `|phi|^2` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Cubic {
    /// `diag(|phi_i|^2)`.
    #[default]
    Componentwise,
    /// `||phi||^2` times the identity.
    NormSquared,
}

fn bracket(kind: Bracket, a: &[C64], wb: &[C64]) -> C64 {
    match kind {
        Bracket::Hermitian => hdot(a, wb),
        Bracket::CProduct => cdot(a, wb),
    }
}

/// `sum_k <phi_k|W|phi> (A_k phi_k + sum_{l != k} B_k^l phi_l)`.
pub fn source_term(phi: &[C64], w: &Matrix, modes: &ModeSet, kind: Bracket) -> Result<Vec<C64>> {
    let n = modes.len();
    if phi.len() != n || w.dim() != n {
        return Err(Error::Dimension("source term needs matching dimensions".into()));
    }
    let wphi = w.mul_vec(phi);
    let mut out = alloc::vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let bra = match kind {
            Bracket::Hermitian => &modes.modes[k].right,
            Bracket::CProduct => &modes.modes[k].left,
        };
        let wk = bracket(kind, bra, &wphi);
        if wk == C64::new(0.0, 0.0) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(&modes.modes[k].right) {
            *o += wk * modes.a_k[k] * x;
        }
        for l in 0..n {
            if l == k {
                continue;
            }
            let b = modes.b_kl[k][l];
            for (o, x) in out.iter_mut().zip(&modes.modes[l].right) {
                *o += wk * b * x;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct NonlinearOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub bracket: Bracket,
    pub cubic: Cubic,
}

impl Default for NonlinearOptions {
    fn default() -> Self {
        NonlinearOptions { damping: 0.5, tol: 1e-10, max_iters: 500, bracket: Bracket::Hermitian, cubic: Cubic::Componentwise }
    }
}

#[derive(Clone, Debug)]
pub struct NonlinearSolve {
    pub state: Vec<C64>,
    pub eigenvalue: C64,
    pub iterations: usize,
    /// `||(H0 - e) phi - s D(phi) phi||`, recomputed at the returned state.
    pub residual: f64,
    pub converged: bool,
    pub history: Vec<f64>,
}

/// Effective linear operator `H0 - s D(phi)` at the current state.
fn frozen(h0: &Matrix, w: &Matrix, phi: &[C64], opts: &NonlinearOptions) -> Matrix {
    let s = bracket(opts.bracket, phi, &w.mul_vec(phi));
    let n = h0.dim();
    let mut m = h0.clone().without_symmetric_flag();
    let nsq: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    for i in 0..n {
        let d = match opts.cubic {
            Cubic::Componentwise => phi[i].norm_sqr(),
            Cubic::NormSquared => nsq,
        };
        m[(i, i)] -= s * d;
    }
    m
}

/// Eigenvalue estimate `phi^H M phi` and residual `||M phi - e phi||` (unit `phi`).
fn residual_of(h0: &Matrix, w: &Matrix, phi: &[C64], opts: &NonlinearOptions) -> (C64, f64) {
    let m = frozen(h0, w, phi, opts);
    let mp = m.mul_vec(phi);
    let e = hdot(phi, &mp);
    let r: Vec<C64> = mp.iter().zip(phi).map(|(a, b)| a - e * b).collect();
    (e, norm2(&r))
}

fn unit(mut v: Vec<C64>) -> Vec<C64> {
    let nv = norm2(&v);
    for z in v.iter_mut() {
        *z /= nv;
    }
    v
}

/// Damped fixed-point iteration seeded with mode `seed` of `H0` (modes
/// ordered by `Re z`).
///
/// Each step freezes `s` and `D` at the current state, diagonalizes the
/// frozen operator, takes the eigenvector with the largest overlap, and
/// mixes it in with the damping factor. The damping is halved whenever the
/// residual grows. Non-convergence is reported in the result.
pub fn solve_nonlinear(h0: &Matrix, w: &Matrix, seed: usize, opts: &NonlinearOptions) -> Result<NonlinearSolve> {
    if h0.dim() != w.dim() {
        return Err(Error::Dimension("H0 and W differ in size".into()));
    }
    let mut seeds = eig(h0)?;
    seeds.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    let start = seeds
        .get(seed)
        .ok_or_else(|| Error::Config(alloc::format!("seed mode {seed} out of range")))?;
    let mut phi = unit(start.right.clone());
    let (_, mut res) = residual_of(h0, w, &phi, opts);
    let mut history = alloc::vec![res];
    let mut eta = opts.damping;
    let mut iterations = 1;
    while res > opts.tol && iterations < opts.max_iters {
        iterations += 1;
        let m = frozen(h0, w, &phi, opts);
        let pairs = eig_lenient(&m)?;
        let best = pairs
            .iter()
            .max_by(|a, b| hdot(&phi, &a.right).norm().total_cmp(&hdot(&phi, &b.right).norm()))
            .ok_or(Error::Singular)?;
        let ov = hdot(&best.right, &phi);
        let align = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1.0, 0.0) };
        let psi: Vec<C64> = unit(best.right.iter().map(|z| z * align).collect());
        loop {
            let trial = unit(phi.iter().zip(&psi).map(|(a, b)| a * (1.0 - eta) + b * eta).collect());
            let (_, r) = residual_of(h0, w, &trial, opts);
            if r <= res || eta < 1e-6 {
                phi = trial;
                res = r;
                break;
            }
            eta *= 0.5;
        }
        history.push(res);
    }
    let (eigenvalue, residual) = residual_of(h0, w, &phi, opts);
    Ok(NonlinearSolve { state: phi, eigenvalue, iterations, residual, converged: residual <= opts.tol, history })
}

fn eig_lenient(m: &Matrix) -> Result<Vec<crate::linalg::EigenPair>> {
    let opts = crate::linalg::EigOptions { eig_tol: 1e-6, max_qr_iters: None };
    crate::linalg::eig_with(m, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ModelSpec, Overrides, TwoLevelSpec};
    use crate::spectra::solve_modes;

    fn herm3() -> Matrix {
        Matrix::from_rows(&[
            alloc::vec![c(-1.0, 0.0), c(0.2, 0.0), c(0.0, 0.0)],
            alloc::vec![c(0.2, 0.0), c(0.0, 0.0), c(0.1, 0.0)],
            alloc::vec![c(0.0, 0.0), c(0.1, 0.0), c(1.2, 0.0)],
        ])
        .unwrap()
        .certify_symmetric()
        .unwrap()
    }

    #[test]
    fn zero_w_returns_seed() {
        let h0 = herm3();
        let r = solve_nonlinear(&h0, &Matrix::zeros(3), 1, &NonlinearOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        let ms = solve_modes(&h0).unwrap();
        assert!((r.eigenvalue - ms.modes[1].value).norm() < 1e-12);
        let ms = solve_modes(&h0).unwrap();
        assert!(source_term(&r.state, &Matrix::zeros(3), &ms, Bracket::Hermitian).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn first_order_perturbation() {
        let h0 = herm3();
        let ms = solve_modes(&h0).unwrap();
        for &scale in &[1e-3, 5e-4] {
            let w = Matrix::from_fn(3, |i, j| c(scale * (1.0 + (i + j) as f64) / 3.0, 0.0)).unwrap();
            let r = solve_nonlinear(&h0, &w, 0, &NonlinearOptions::default()).unwrap();
            assert!(r.converged, "{:?}", r.history);
            let phi = &ms.modes[0].right;
            let s0 = hdot(phi, &w.mul_vec(phi));
            let q: f64 = phi.iter().map(|z| z.norm_sqr().powi(2)).sum();
            let first = ms.modes[0].value - s0 * q;
            assert!((r.eigenvalue - first).norm() < 10.0 * scale * scale, "{}", (r.eigenvalue - first).norm());
        }
    }

    #[test]
    fn hermitian_limit_source_is_projection() {
        let h0 = herm3();
        let ms = solve_modes(&h0).unwrap();
        let w = Matrix::from_fn(3, |i, j| c(0.1 * (i as f64 - j as f64).abs(), 0.0)).unwrap();
        let phi = ms.modes[1].right.clone();
        let src = source_term(&phi, &w, &ms, Bracket::Hermitian).unwrap();
        let wp = w.mul_vec(&phi);
        for (a, b) in src.iter().zip(&wp) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn near_ep_never_silent() {
        let d = 0.5;
        let h0 = ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, d), eps2: c(0.0, -d), omega: c(d + 1e-3, 0.0) })
            .build(&Overrides::new())
            .unwrap();
        let w = Matrix::identity(2).scaled(c(0.05, 0.0));
        let r = solve_nonlinear(&h0, &w, 0, &NonlinearOptions::default()).unwrap();
        let (_, again) = residual_of(&h0, &w, &r.state, &NonlinearOptions::default());
        assert_eq!(again, r.residual);
        assert_eq!(r.converged, r.residual <= 1e-10);
    }
}
