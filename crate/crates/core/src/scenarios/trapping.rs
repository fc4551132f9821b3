//! Width bifurcation of a one-channel chain as the coupling grows.

use alloc::format;
use alloc::vec::Vec;

use super::{strictly_decreasing, strictly_increasing, Bundle, Params};
use crate::error::Result;
use crate::models::{ModelSpec, ToyChainSpec};
use crate::observables::{average_rate_vs_alpha, order_parameter, OrderParameterOptions};
use crate::series::Series;
use crate::sweeps::{linspace, sweep, SweepGrid, SweepOptions};

pub(super) const DEFAULTS: &[(&str, f64)] =
    &[("n", 10.0), ("half_width", 1.0), ("alpha_min", 0.0), ("alpha_max", 2.0), ("samples", 401.0)];

pub(super) fn run(p: &Params, b: &mut Bundle) -> Result<()> {
    let n = p.count("n", 2)?;
    let samples = p.count("samples", 5)?;
    let spec = ToyChainSpec::equally_spaced(n, p.positive("half_width")?, 0.0);
    let vn = spec.v_norm_sqr();
    let alphas = linspace(p.get("alpha_min"), p.get("alpha_max"), samples);
    let grid = SweepGrid::real(ModelSpec::ToyChain(spec), "alpha", &alphas)?;
    let sw = sweep(&grid, &SweepOptions::default())?;
    let op = order_parameter(&sw, &OrderParameterOptions::default());
    let av = average_rate_vs_alpha(&sw);

    let widths: Vec<Vec<f64>> = sw.branches.iter().map(|br| br.widths()).collect();
    let broad = av.broad_branch;
    let trapped_sum: Vec<f64> = (0..samples)
        .map(|k| (0..n).filter(|&j| j != broad).map(|j| widths[j][k]).sum())
        .collect();
    let sum_rule = (0..samples)
        .map(|k| (widths.iter().map(|w| w[k]).sum::<f64>() - alphas[k] * vn).abs() / (1.0 + alphas[k] * vn))
        .fold(0.0, f64::max);

    b.push(Series::new("gamma0_over_n", "alpha", "width / state", alphas.clone(), op.gamma0_over_n.clone())?);
    b.push(Series::new("order_parameter_derivative", "alpha", "dimensionless", alphas.clone(), op.derivative.clone())?);
    b.push(Series::new("broad_width", "alpha", "width", alphas.clone(), widths[broad].clone())?);
    b.push(Series::new("trapped_width_sum", "alpha", "width", alphas.clone(), trapped_sum.clone())?);
    b.push(Series::new("average_trapped_width", "alpha", "width", alphas.clone(), av.gamma_av.clone())?);
    for (j, w) in widths.iter().enumerate() {
        b.push(Series::new(&format!("width_branch_{j}"), "alpha", "width", alphas.clone(), w.clone())?);
    }

    b.report("jump_tol", op.jump_tol);
    b.report("jump_clusters", op.jump_clusters);
    if let Some(a) = op.alpha_cr {
        b.report("alpha_cr", a);
    }
    if let Some(f) = op.post_critical_fit {
        b.report("post_critical_slope", f.slope);
        b.report("post_critical_r2", f.r2);
    }
    if let Some(a) = av.saturation_onset {
        b.report("saturation_onset", a);
    }
    b.report("broad_branch", broad);

    b.assert(
        "single derivative jump",
        op.alpha_cr.is_some() && op.jump_clusters == 1,
        format!("alpha_cr = {:?}, clusters = {}", op.alpha_cr, op.jump_clusters),
    );
    b.assert(
        "linear order parameter beyond alpha_cr",
        op.linear,
        format!("r2 = {:?}", op.post_critical_fit.map(|f| f.r2)),
    );
    let start = op.alpha_cr.map_or(samples, |a| alphas.partition_point(|&x| x < a));
    let tail = start.min(samples);
    b.assert(
        "broad width strictly increasing beyond alpha_cr",
        tail + 2 <= samples && strictly_increasing(&widths[broad][tail..]),
        format!("from sample {tail}"),
    );
    b.assert(
        "trapped width sum strictly decreasing beyond alpha_cr",
        tail + 2 <= samples && strictly_decreasing(&trapped_sum[tail..]),
        format!("from sample {tail}"),
    );
    b.assert("width sum rule", sum_rule <= 1e-10, format!("max relative error {sum_rule:e}"));
    Ok(())
}
