//! A third level watching a coalescing pair: exchange symmetry of the
//! cross overlaps `B_3^1`, `B_3^2`.

use alloc::format;
use alloc::vec::Vec;

use super::{Bundle, Params};
use crate::error::Result;
use crate::linalg::c;
use crate::models::{ModelSpec, Overrides, ThreeLevelSpec, TwoLevelSpec};
use crate::series::Series;
use crate::spectra::solve_modes;
use crate::sweeps::linspace;

pub(super) const DEFAULTS: &[(&str, f64)] = &[
    ("e", 0.0),
    ("delta", 0.5),
    ("loss", 1.0),
    ("e3", 0.3),
    ("w13", 0.1),
    ("w23", 0.1),
    ("asym", 0.05),
    ("omega_min", 0.05),
    ("omega_max", 0.4),
    ("samples", 36.0),
];

/// `(|B_3^1|, |B_3^2|)` along the omega sweep.
fn overlaps(p: &Params, w13: f64, w23: f64, omegas: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (e, d, loss) = (p.get("e"), p.get("delta"), p.get("loss"));
    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    for &w in omegas {
        let spec = ModelSpec::ThreeLevel(ThreeLevelSpec {
            two_level: TwoLevelSpec { eps1: c(e, d - loss), eps2: c(e, -d - loss), omega: c(w, 0.0) },
            eps3: c(p.get("e3"), -loss),
            w13: c(w13, 0.0),
            w23: c(w23, 0.0),
        });
        let ms = solve_modes(&spec.build(&Overrides::new())?)?;
        // the observer is the mode living mostly on the third basis state
        let k3 = (0..3)
            .max_by(|&a, &b| ms.modes[a].right[2].norm().total_cmp(&ms.modes[b].right[2].norm()))
            .unwrap_or(2);
        let others: Vec<usize> = (0..3).filter(|&k| k != k3).collect();
        b1.push(ms.b_kl[k3][others[0]].norm());
        b2.push(ms.b_kl[k3][others[1]].norm());
    }
    Ok((b1, b2))
}

pub(super) fn run(p: &Params, b: &mut Bundle) -> Result<()> {
    let omegas = linspace(p.get("omega_min"), p.get("omega_max"), p.count("samples", 2)?);
    let (w13, w23) = (p.get("w13"), p.get("w23"));
    let (b1, b2) = overlaps(p, w13, w23, &omegas)?;
    let delta_sym = b1.iter().zip(&b2).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let (c1, c2) = overlaps(p, w13, w13 + p.get("asym"), &omegas)?;
    let asym: Vec<f64> = c1.iter().zip(&c2).map(|(x, y)| (x - y).abs()).collect();
    let delta_asym = asym.iter().copied().fold(0.0, f64::max);

    b.push(Series::new("b31_abs", "omega", "dimensionless", omegas.clone(), b1.clone())?);
    b.push(Series::new("b32_abs", "omega", "dimensionless", omegas.clone(), b2.clone())?);
    b.push(Series::new("asymmetric_b_difference", "omega", "dimensionless", omegas.clone(), asym)?);
    b.report("delta", delta_sym);
    b.report("delta_asymmetric_reference", delta_asym);

    if (w13 - w23).abs() == 0.0 {
        b.assert("symmetric coupling keeps |B_3^1| = |B_3^2|", delta_sym <= 1e-10, format!("delta = {delta_sym:e}"));
    } else {
        b.assert("asymmetric coupling breaks |B_3^1| = |B_3^2|", delta_sym > 1e-6, format!("delta = {delta_sym:e}"));
    }
    b.assert(
        "asymmetric reference gives nonzero delta",
        delta_asym > 1e-6,
        format!("delta = {delta_asym:e}"),
    );
    Ok(())
}
