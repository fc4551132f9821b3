//! Dense complex linear algebra.
//!
//! Everything here works on [`Matrix`], a square matrix of `Complex<f64>`
//! stored row-major. The c-product used throughout is the bilinear form
//! `<a*|b> = sum_i a_i b_i` (no conjugation); the Hermitian product
//! `<a|b> = sum_i conj(a_i) b_i` is [`hdot`].

mod cnorm;
mod eigen;
mod hessenberg;
mod jordan;
mod lu;
mod matrix;
mod svd;

pub use cnorm::{c_normalize, c_normalize_pair, fix_phase_gauge};
pub use eigen::{eig, eig_with, schur, EigOptions, EigenPair, Schur};
pub use hessenberg::hessenberg;
pub use jordan::{jordan_chain, jordan_chain_with, JordanOptions, JordanSolve};
pub use lu::{solve, Lu};
pub use matrix::{Matrix, SYMMETRY_TOL};
pub use svd::{svd, Svd};

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex;

pub type C64 = Complex<f64>;

pub(crate) const EPS: f64 = f64::EPSILON;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Bilinear c-product `sum a_i b_i`.
pub fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hermitian product `sum conj(a_i) b_i`.
pub fn hdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm with scaling against overflow.
pub fn norm2(v: &[C64]) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

pub fn scale_in_place(v: &mut [C64], s: C64) {
    for x in v.iter_mut() {
        *x *= s;
    }
}

pub fn all_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Index of the first component of maximal modulus.
pub fn argmax_modulus(v: &[C64]) -> usize {
    let mut best = 0;
    let mut best_val = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_val {
            best_val = m;
            best = i;
        }
    }
    best
}
