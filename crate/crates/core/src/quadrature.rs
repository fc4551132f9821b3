//! Adaptive Gauss-Kronrod quadrature and Cauchy principal values.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: `(estimate, |K15 - G7|)`.
pub fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let s = f(center - dx) + f(center + dx);
        kron += w * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Globally adaptive bisection driven by the largest panel error.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, panels: 0 });
    }
    let (v0, e0) = gk15(&mut f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v0, e0)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::NonFinite("integrand".into()));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature { value, error, panels: panels.len() });
        }
        if panels.len() >= max_panels {
            return Err(Error::Domain(format!(
                "quadrature did not reach tolerance: error {error:e} after {max_panels} panels"
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (vl, el) = gk15(&mut f, lo, mid);
        let (vr, er) = gk15(&mut f, mid, hi);
        panels.push((lo, mid, vl, el));
        panels.push((mid, hi, vr, er));
    }
}

/// Cauchy principal value of `int_lo^hi f(x) / (pole - x) dx`.
///
/// The interval is split into a window symmetric about the pole, where the
/// two sides are folded together into the regular integrand
/// `(f(pole - t) - f(pole + t)) / t`, and a one-sided remainder with no
/// singularity. Both pieces go through [`integrate`].
pub fn principal_value(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    pole: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(lo < pole && pole < hi) {
        return Err(Error::Domain(format!("pole {pole} not strictly inside ({lo}, {hi})")));
    }
    let d = (pole - lo).min(hi - pole);
    let sym = integrate(|t| (f(pole - t) - f(pole + t)) / t, 0.0, d, 0.5 * abs_tol, 1e-13, 4000)?;
    let rest = if pole - lo > d {
        integrate(|x| f(x) / (pole - x), lo, pole - d, 0.5 * abs_tol, 1e-13, 4000)?
    } else if hi - pole > d {
        integrate(|x| f(x) / (pole - x), pole + d, hi, 0.5 * abs_tol, 1e-13, 4000)?
    } else {
        Quadrature { value: 0.0, error: 0.0, panels: 0 }
    };
    Ok(sym.value + rest.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let (v, _) = gk15(&mut |x| x.powi(6) - 2.0 * x, 0.0, 2.0);
        assert!((v - (128.0 / 7.0 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let q = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 1e-12, 2000).unwrap();
        let exact = 2.0 * (1.0 / 1e-4_f64).sqrt() * (1.0 / 1e-2_f64).atan();
        assert!((q.value - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn pv_of_constant_is_log() {
        let v = principal_value(|_| 1.0, 0.0, 2.0, 1.5, 1e-9).unwrap();
        assert!((v - 3.0_f64.ln()).abs() < 1e-9);
        assert!(principal_value(|_| 1.0, 0.0, 2.0, 1.0, 1e-9).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pv_of_linear_profile() {
        // PV int_0^1 x / (e - x) dx = -1 + e ln(e / (1 - e))
        let e = 0.3;
        let v = principal_value(|x| x, 0.0, 1.0, e, 1e-10).unwrap();
        let exact = -1.0 + e * (e / (1.0 - e)).ln();
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn pole_outside_is_domain_error() {
        assert!(matches!(principal_value(|_| 1.0, 0.0, 1.0, 1.0, 1e-9), Err(Error::Domain(_))));
    }
}
