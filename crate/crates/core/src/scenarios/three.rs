//! Delay times of three overlapping resonances as the coupling grows.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use super::{strictly_decreasing, strictly_increasing, Bundle, Params};
use crate::error::{Error, Result};
use crate::linalg::eig;
use crate::models::{ModelSpec, Overrides, ToyChainSpec};
use crate::observables::{time_delay, ScatteringModel};
use crate::series::Series;
use crate::sweeps::linspace;

pub(super) const DEFAULTS: &[(&str, f64)] = &[
    ("half_width", 0.5),
    ("alpha_min", 1.0),
    ("alpha_max", 8.0),
    ("alpha_count", 6.0),
    ("e_lo", -1.5),
    ("e_hi", 1.5),
];

pub(super) fn run(p: &Params, b: &mut Bundle) -> Result<()> {
    let count = p.count("alpha_count", 2)?;
    let (a0, a1) = (p.positive("alpha_min")?, p.positive("alpha_max")?);
    if !(a1 > a0) {
        return Err(Error::Config("alpha_max must exceed alpha_min".into()));
    }
    let (e_lo, e_hi) = (p.get("e_lo"), p.get("e_hi"));
    if !(e_hi > e_lo) {
        return Err(Error::Config("e_hi must exceed e_lo".into()));
    }
    // geometric spacing of the couplings
    let alphas: Vec<f64> = (0..count).map(|k| a0 * (a1 / a0).powf(k as f64 / (count - 1) as f64)).collect();
    let base = ToyChainSpec::equally_spaced(3, p.positive("half_width")?, 1.0);

    let mut broad_peak = Vec::new();
    let mut broad_width = Vec::new();
    let mut trapped_peaks: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut trapped_widths: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for (ai, &alpha) in alphas.iter().enumerate() {
        let mut spec = base.clone();
        spec.alpha = alpha;
        let model = ModelSpec::ToyChain(spec);
        let sm = ScatteringModel::from_spec(&model, &Overrides::new(), true)?;
        let mut poles: Vec<(f64, f64)> =
            eig(&model.build(&Overrides::new())?)?.iter().map(|m| (m.energy(), m.width())).collect();
        poles.sort_by(|x, y| y.1.total_cmp(&x.1));
        let gmin = poles.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let h = (gmin / 8.0).min(2e-3);
        let steps = ((e_hi - e_lo) / h).ceil() as usize + 1;
        let es = linspace(e_lo, e_hi, steps);
        let td = time_delay(&sm, &es)?;
        b.push(
            Series::new(&format!("time_delay_alpha_{ai}"), "energy", "time (hbar = 1)", es.clone(), td.tau.clone())?
                .with_meta("alpha", format!("{alpha}")),
        );
        // search window: half a width, but never reaching halfway to another pole
        let peak_near = |e0: f64, g: f64| {
            let sep = poles.iter().map(|q| (q.0 - e0).abs()).filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min);
            let half = (0.5 * g).min(0.5 * sep).max(h);
            es.iter()
                .zip(&td.tau)
                .filter(|(e, _)| (*e - e0).abs() <= half)
                .map(|(_, t)| *t)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let (eb, gb) = poles[0];
        broad_peak.push(peak_near(eb, gb));
        broad_width.push(gb);
        let mut trapped = [poles[1], poles[2]];
        trapped.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (j, &(e0, g)) in trapped.iter().enumerate() {
            trapped_peaks[j].push(peak_near(e0, g));
            trapped_widths[j].push(g);
        }
    }
    b.push(Series::new("broad_peak_delay", "alpha", "time (hbar = 1)", alphas.clone(), broad_peak.clone())?);
    b.push(Series::new("broad_width", "alpha", "width", alphas.clone(), broad_width.clone())?);
    for j in 0..2 {
        b.push(Series::new(&format!("trapped_{j}_peak_delay"), "alpha", "time (hbar = 1)", alphas.clone(), trapped_peaks[j].clone())?);
        b.push(Series::new(&format!("trapped_{j}_width"), "alpha", "width", alphas.clone(), trapped_widths[j].clone())?);
    }
    for j in 0..2 {
        b.assert(
            &format!("trapped branch {j} width decreasing"),
            strictly_decreasing(&trapped_widths[j]),
            format!("{:?}", trapped_widths[j]),
        );
        b.assert(
            &format!("trapped branch {j} delay peak growing"),
            strictly_increasing(&trapped_peaks[j]),
            format!("{:?}", trapped_peaks[j]),
        );
    }
    b.assert("broad branch delay peak flattening", strictly_decreasing(&broad_peak), format!("{broad_peak:?}"));
    Ok(())
}
