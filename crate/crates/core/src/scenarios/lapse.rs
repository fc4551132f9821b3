//! Transmission phase lapses in the trapped regime of a chain.

use alloc::format;
use alloc::vec::Vec;

use super::{Bundle, Params};
use crate::error::{Error, Result};
use crate::models::{ModelSpec, Overrides, ToyChainSpec};
use crate::observables::{phase_lapse_scan, scattering_series, transmission_peaks, ScatteringModel};
use crate::series::Series;
use crate::sweeps::linspace;

pub(super) const DEFAULTS: &[(&str, f64)] = &[
    ("n", 4.0),
    ("half_width", 1.0),
    ("alpha", 8.0),
    ("e_lo", -1.5),
    ("e_hi", 1.5),
    ("samples", 30001.0),
    ("lapse_tol", 0.1),
];

pub(super) fn run(p: &Params, b: &mut Bundle) -> Result<()> {
    let n = p.count("n", 2)?;
    let samples = p.count("samples", 3)?;
    let (e_lo, e_hi) = (p.get("e_lo"), p.get("e_hi"));
    if !(e_hi > e_lo) {
        return Err(Error::Config("e_hi must exceed e_lo".into()));
    }
    let spec = ModelSpec::ToyChain(ToyChainSpec::equally_spaced(n, p.positive("half_width")?, p.positive("alpha")?));
    let sm = ScatteringModel::from_spec(&spec, &Overrides::new(), true)?;
    let es = linspace(e_lo, e_hi, samples);
    let s = scattering_series(&sm, &es, (0, 0))?;
    let lapses = phase_lapse_scan(&s, p.positive("lapse_tol")?);
    let peaks = transmission_peaks(&s);

    b.push(Series::new("transmission_abs", "energy", "dimensionless", es.clone(), s.transmission.iter().map(|t| t.norm()).collect())?);
    b.push(Series::new("transmission_phase", "energy", "rad", es.clone(), s.beta.clone())?);
    let zeros: Vec<f64> = lapses.iter().map(|l| l.zero_energy).collect();
    b.report("peaks", peaks.len());
    b.report("lapses", lapses.len());
    b.report("lapse_energies", format!("{zeros:?}"));
    b.report("max_unitarity_defect", s.max_unitarity_defect);

    let valleys = peaks.len().saturating_sub(1);
    b.assert(
        "one lapse per inter-peak valley",
        valleys >= n - 2 && lapses.len() == valleys,
        format!("{} peaks, {} lapses", peaks.len(), lapses.len()),
    );
    let worst = lapses.iter().map(|l| l.min_abs_t).fold(0.0, f64::max);
    b.assert("transmission vanishes at each lapse", worst < 0.05, format!("largest |T| at a lapse {worst:e}"));
    Ok(())
}
