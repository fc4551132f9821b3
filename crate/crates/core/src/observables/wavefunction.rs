//! Internal scattering wavefunction and its phase rigidity.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, cdot, norm2, Lu, Matrix, C64};
use crate::spectra::ModeSet;

/// Mode expansion `sum_k (phi_k . gamma_c) / (E - z_k) phi_k`.
///
/// The c-product is divided by `left_k . right_k`, which is `1` for
/// c-normalized modes.
pub fn internal_wavefunction(modes: &ModeSet, gamma_c: &[C64], e: f64) -> Result<Vec<C64>> {
    let n = modes.len();
    if gamma_c.len() != n {
        return Err(Error::Dimension(format!("coupling has {} entries for {n} modes", gamma_c.len())));
    }
    let scale = modes.modes.iter().map(|m| m.value.norm()).fold(1.0, f64::max);
    let mut psi = vec![C64::new(0.0, 0.0); n];
    for m in &modes.modes {
        let d = c(e, 0.0) - m.value;
        if d.norm() < 1e-12 * scale {
            return Err(Error::Pole { energy: e });
        }
        let w = cdot(&m.left, gamma_c) / (cdot(&m.left, &m.right) * d);
        for (p, r) in psi.iter_mut().zip(&m.right) {
            *p += w * r;
        }
    }
    Ok(psi)
}

/// Direct solve `(E - H)^{-1} gamma_c`.
pub fn resolvent_solve(h: &Matrix, gamma_c: &[C64], e: f64) -> Result<Vec<C64>> {
    let a = h.shifted(c(e, 0.0)).scaled(c(-1.0, 0.0));
    Lu::new(&a).map_err(|_| Error::Pole { energy: e })?.solve(gamma_c)
}

/// Rotation `e^{i theta}` that makes `sum psi'^2` real and nonnegative,
/// which zeroes the cross term `sum Re psi' Im psi'`.
pub fn rigidity_rotation(psi: &[C64]) -> C64 {
    let s: C64 = psi.iter().map(|z| z * z).sum();
    let theta = -0.5 * s.arg();
    C64::from_polar(1.0, theta)
}

/// `(sum (Re psi')^2 - sum (Im psi')^2) / sum |psi'|^2` after
/// [`rigidity_rotation`].
pub fn rho_phase_rigidity(psi: &[C64]) -> Result<f64> {
    let nv = norm2(psi);
    if !(nv > 0.0) || !nv.is_finite() {
        return Err(Error::Domain("phase rigidity of a zero or non-finite vector".into()));
    }
    let u = rigidity_rotation(psi);
    let (mut re2, mut im2) = (0.0, 0.0);
    for z in psi {
        let w = u * z / nv;
        re2 += w.re * w.re;
        im2 += w.im * w.im;
    }
    Ok(((re2 - im2) / (re2 + im2)).clamp(0.0, 1.0))
}
