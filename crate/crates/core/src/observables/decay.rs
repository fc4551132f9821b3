//! Time-dependent decay rate of a superposition of resonance states.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, cdot, C64};
use crate::spectra::ModeSet;

#[derive(Clone, Debug)]
pub struct DecaySeries {
    pub times: Vec<f64>,
    pub population: Vec<f64>,
    pub rate: Vec<f64>,
    /// Weights `|c_k|^2` entering both sums.
    pub weights: Vec<f64>,
}

/// Weights `c_k = (phi_k . gamma_c) / (E_ref - z_k)` of the mode expansion.
pub fn expansion_weights(modes: &ModeSet, gamma_c: &[C64], e_ref: f64) -> Vec<C64> {
    modes
        .modes
        .iter()
        .map(|m| cdot(&m.left, gamma_c) / (cdot(&m.left, &m.right) * (c(e_ref, 0.0) - m.value)))
        .collect()
}

/// `k(t) = sum G_k |c_k|^2 e^{-G_k t} / sum |c_k|^2 e^{-G_k t}`.
///
/// Widths within `1e-12 max G` below zero are clamped to zero; the
/// rate is evaluated as `G_min` plus the excess over it, with exponentials
/// shifted by `G_min`, so it stays finite and monotone at any `t`.
pub fn decay_rate(widths: &[f64], c_k: &[C64], times: &[f64]) -> Result<DecaySeries> {
    if widths.len() != c_k.len() {
        return Err(Error::Dimension("one weight per width required".into()));
    }
    let gmax = widths.iter().copied().fold(0.0, f64::max);
    let mut g = Vec::with_capacity(widths.len());
    for &w in widths {
        if !w.is_finite() {
            return Err(Error::NonFinite("width".into()));
        }
        if w < -1e-12 * gmax.max(1e-300) {
            return Err(Error::Domain(alloc::format!("negative width {w}")));
        }
        g.push(w.max(0.0));
    }
    let weights: Vec<f64> = c_k.iter().map(|z| z.norm_sqr()).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite("weight".into()));
    }
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::Domain("all decay weights are zero".into()));
    }
    let gmin = g
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&x, _)| x)
        .fold(f64::INFINITY, f64::min);
    let mut population = Vec::with_capacity(times.len());
    let mut rate = Vec::with_capacity(times.len());
    for &t in times {
        let (mut num, mut den, mut pop) = (0.0, 0.0, 0.0);
        for (&gk, &wk) in g.iter().zip(&weights) {
            if wk == 0.0 {
                continue;
            }
            let e = (-(gk - gmin) * t).exp();
            num += (gk - gmin) * wk * e;
            den += wk * e;
            pop += wk * (-gk * t).exp();
        }
        rate.push(gmin + num / den);
        population.push(pop);
    }
    Ok(DecaySeries { times: times.to_vec(), population, rate, weights })
}
