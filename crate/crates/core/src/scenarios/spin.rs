//! Phase diagram of the swap frequency versus anisotropic relaxation.

use alloc::format;
use alloc::vec::Vec;

use super::{Bundle, Params};
use crate::error::Result;
use crate::models::spin_swap_frequency;
use crate::series::Series;
use crate::sweeps::linspace;

pub(super) const DEFAULTS: &[(&str, f64)] = &[
    ("b_min", 0.1),
    ("b_max", 1.0),
    ("b_count", 10.0),
    ("ratio_max", 2.0),
    ("ratio_count", 41.0),
    ("k_aniso", 1.0),
];

pub(super) fn run(p: &Params, b: &mut Bundle) -> Result<()> {
    let bs = linspace(p.positive("b_min")?, p.positive("b_max")?, p.count("b_count", 1)?);
    let ratios = linspace(0.0, p.positive("ratio_max")?, p.count("ratio_count", 2)?);
    let k = p.positive("k_aniso")?.min(1.0);
    let mut violations = 0usize;
    let mut boundary = Vec::new();
    for (bi, &bf) in bs.iter().enumerate() {
        let mut re = Vec::new();
        let mut im = Vec::new();
        let mut first_frozen = None;
        for &x in &ratios {
            // k / tau = x, with tau = k / x (x = 0 means no relaxation)
            let w = if x == 0.0 { spin_swap_frequency(bf, 0.0, 1.0) } else { spin_swap_frequency(bf, k, k / x) };
            re.push(w.re);
            im.push(w.im);
            let frozen = w.im > 0.0;
            let expected = x > bf * (1.0 + 1e-12);
            if frozen != expected && (x - bf).abs() > 1e-12 * bf {
                violations += 1;
            }
            if frozen && first_frozen.is_none() {
                first_frozen = Some(x);
            }
        }
        boundary.push(first_frozen.unwrap_or(f64::NAN));
        b.push(Series::new(&format!("swap_frequency_re_b_{bi}"), "k/tau", "frequency", ratios.clone(), re)?
            .with_meta("b", format!("{bf}")));
        b.push(Series::new(&format!("swap_frequency_im_b_{bi}"), "k/tau", "frequency", ratios.clone(), im)?
            .with_meta("b", format!("{bf}")));
    }
    b.push(Series::new("first_frozen_ratio", "b", "frequency", bs.clone(), boundary)?);
    b.assert(
        "real below k/tau = b, imaginary above",
        violations == 0,
        format!("{violations} misclassified points"),
    );
    Ok(())
}
