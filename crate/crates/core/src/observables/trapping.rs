//! Width redistribution along a coupling sweep: average rate and the
//! order parameter `Gamma_0 / N`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use super::scattering::derivative;
use crate::sweeps::SweepResult;

fn widths_at(sweep: &SweepResult, k: usize) -> Vec<f64> {
    sweep.branches.iter().map(|b| -2.0 * b.z[k].im).collect()
}

/// Mean width of the trapped branches per sample.
#[derive(Clone, Debug)]
pub struct AverageRate {
    pub alphas: Vec<f64>,
    pub gamma_av: Vec<f64>,
    /// Branch with the largest width at the last sample; excluded throughout.
    pub broad_branch: usize,
    /// First sample after which `Gamma_av` never increases again.
    pub saturation_index: Option<usize>,
    pub saturation_onset: Option<f64>,
}

pub fn average_rate_vs_alpha(sweep: &SweepResult) -> AverageRate {
    let alphas: Vec<f64> = sweep.params.iter().map(|p| p.re).collect();
    let n = alphas.len();
    let last = widths_at(sweep, n - 1);
    let broad_branch = (0..last.len()).max_by(|&a, &b| last[a].total_cmp(&last[b])).unwrap_or(0);
    let gamma_av: Vec<f64> = (0..n)
        .map(|k| {
            let w = widths_at(sweep, k);
            let (s, m) = w
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != broad_branch)
                .fold((0.0, 0usize), |(s, m), (_, &x)| (s + x, m + 1));
            if m == 0 {
                0.0
            } else {
                s / m as f64
            }
        })
        .collect();
    let mut saturation_index = None;
    for i in (0..n.saturating_sub(1)).rev() {
        if gamma_av[i + 1] - gamma_av[i] <= 0.0 {
            saturation_index = Some(i);
        } else {
            break;
        }
    }
    AverageRate {
        saturation_onset: saturation_index.map(|i| alphas[i]),
        alphas,
        gamma_av,
        broad_branch,
        saturation_index,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(LinearFit { slope, intercept, r2 })
}

#[derive(Clone, Debug)]
pub struct OrderParameterSeries {
    pub alphas: Vec<f64>,
    pub gamma0_over_n: Vec<f64>,
    pub derivative: Vec<f64>,
    /// `|d_{k+1} - d_k|` between neighbouring derivative samples.
    pub jumps: Vec<f64>,
    pub jump_tol: f64,
    /// Number of separate runs of jumps above `jump_tol`.
    pub jump_clusters: usize,
    pub alpha_cr: Option<f64>,
    pub post_critical_fit: Option<LinearFit>,
    /// Post-critical fit reaches `r2 >= 0.999`.
    pub linear: bool,
    /// Too few samples on either side of the jump to judge.
    pub inconclusive: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct OrderParameterOptions {
    /// Multiple of the median successive derivative difference.
    pub jump_factor: f64,
    /// Jumps must also exceed this fraction of the largest `|derivative|`.
    pub jump_floor: f64,
    pub min_r2: f64,
}

impl Default for OrderParameterOptions {
    fn default() -> Self {
        OrderParameterOptions { jump_factor: 3.0, jump_floor: 1e-2, min_r2: 0.999 }
    }
}

pub fn order_parameter(sweep: &SweepResult, opts: &OrderParameterOptions) -> OrderParameterSeries {
    let alphas: Vec<f64> = sweep.params.iter().map(|p| p.re).collect();
    let n_states = sweep.branches.len().max(1) as f64;
    let gamma0_over_n: Vec<f64> = (0..alphas.len())
        .map(|k| widths_at(sweep, k).into_iter().fold(0.0, f64::max) / n_states)
        .collect();
    let d = derivative(&alphas, &gamma0_over_n);
    let jumps: Vec<f64> = d.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut sorted = jumps.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.is_empty() {
        0.0
    } else if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let dmax = d.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let jump_tol = (opts.jump_factor * median).max(opts.jump_floor * dmax);
    let mut jump_clusters = 0;
    let mut inside = false;
    for &j in &jumps {
        if j > jump_tol {
            if !inside {
                jump_clusters += 1;
            }
            inside = true;
        } else {
            inside = false;
        }
    }
    let best = (0..jumps.len()).filter(|&k| jumps[k] > jump_tol).max_by(|&a, &b| jumps[a].total_cmp(&jumps[b]));
    let alpha_cr = best.map(|k| 0.5 * (alphas[k] + alphas[k + 1]));
    let (post_critical_fit, inconclusive) = match alpha_cr {
        Some(a) => {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                alphas.iter().zip(&gamma0_over_n).filter(|(x, _)| **x >= a).map(|(x, y)| (*x, *y)).unzip();
            let fit = linear_fit(&xs, &ys);
            (fit, fit.is_none())
        }
        None => (None, alphas.len() < 5),
    };
    let linear = post_critical_fit.map_or(false, |f| f.r2 >= opts.min_r2);
    OrderParameterSeries {
        alphas,
        gamma0_over_n,
        derivative: d,
        jumps,
        jump_tol,
        jump_clusters,
        alpha_cr,
        post_critical_fit,
        linear,
        inconclusive,
    }
}
