//! Breaking of the real spectrum of a balanced gain/loss pair.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use super::{Bundle, Params};
use crate::error::{Error, Result};
use crate::linalg::{eig, EPS};
use crate::models::{ModelSpec, Overrides, PtSpec};
use crate::series::Series;
use crate::sweeps::linspace;

pub(super) const DEFAULTS: &[(&str, f64)] =
    &[("e", 0.0), ("omega", 0.5), ("gamma_min", 0.0), ("gamma_max", 2.0), ("samples", 201.0)];

pub(super) fn run(p: &Params, b: &mut Bundle) -> Result<()> {
    let omega = p.get("omega");
    let samples = p.count("samples", 3)?;
    let (g0, g1) = (p.get("gamma_min"), p.get("gamma_max"));
    if !(g0 >= 0.0 && g1 > g0) {
        return Err(Error::Config("need 0 <= gamma_min < gamma_max".into()));
    }
    let gammas = linspace(g0, g1, samples);
    let step = gammas[1] - gammas[0];
    let threshold = 2.0 * omega.abs();
    let mut max_im = Vec::new();
    let mut re_gap = Vec::new();
    let mut real = Vec::new();
    for &g in &gammas {
        let m = ModelSpec::Pt(PtSpec { e: p.get("e"), gamma: g, omega }).build(&Overrides::new())?;
        let tol = EPS.sqrt() * m.frobenius_norm().max(1.0);
        let ev = eig(&m)?;
        let im = ev.iter().map(|x| x.value.im.abs()).fold(0.0, f64::max);
        max_im.push(im);
        re_gap.push((ev[1].value.re - ev[0].value.re).abs());
        real.push(im <= tol);
    }
    b.push(Series::new("max_abs_imag", "gamma", "energy", gammas.clone(), max_im)?);
    b.push(Series::new("real_gap", "gamma", "energy", gammas.clone(), re_gap)?);
    b.push(Series::new("real_spectrum", "gamma", "indicator", gammas.clone(), real.iter().map(|&r| if r { 1.0 } else { 0.0 }).collect())?);

    // away from the threshold sample the classification must be exact
    let bad = gammas
        .iter()
        .zip(&real)
        .filter(|(g, _)| (*g - threshold).abs() > step)
        .filter(|(g, r)| **r != (**g <= threshold))
        .count();
    b.assert("real spectrum iff gamma <= 2|omega|", bad == 0, format!("{bad} misclassified samples"));
    let first_broken = real.iter().position(|r| !r);
    match first_broken {
        Some(k) if k > 0 => {
            let located = 0.5 * (gammas[k - 1] + gammas[k]);
            b.report("threshold_estimate", located);
            b.assert(
                "threshold within one grid step of 2|omega|",
                (located - threshold).abs() <= step,
                format!("estimate {located}, exact {threshold}, step {step}"),
            );
        }
        _ => b.assert("threshold within one grid step of 2|omega|", false, "grid does not straddle the threshold"),
    }
    Ok(())
}
