//! Exceptional-point search and encircling.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{gauge_factor, matching, ParamPlane, SweepOptions};
use crate::error::{Error, Result};
use crate::linalg::{c, eig_with, jordan_chain_with, JordanOptions, JordanSolve, Matrix, C64};
use crate::models::{ModelSpec, Overrides, TwoLevelSpec};
use crate::spectra::{solve_modes_with, SpectraOptions};

/// Derivative-free simplex minimization in two dimensions.
///
/// Returns `(best point, best value, evaluations)`. Stops when the simplex
/// diameter drops below `xtol * (1 + |x|)` or after `max_evals`.
pub fn nelder_mead(
    mut f: impl FnMut([f64; 2]) -> f64,
    x0: [f64; 2],
    step: f64,
    max_evals: usize,
    xtol: f64,
) -> ([f64; 2], f64, usize) {
    let mut pts = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];
    let mut evals = 3;
    let lin = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    while evals < max_evals {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];
        let diam = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt())
            .fold(0.0, f64::max);
        let size = 1.0 + (pts[0][0].powi(2) + pts[0][1].powi(2)).sqrt();
        if diam <= xtol * size || vals[0] == 0.0 {
            break;
        }
        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let xr = lin(centroid, pts[2], -1.0);
        let fr = f(xr);
        evals += 1;
        if fr < vals[0] {
            let xe = lin(centroid, pts[2], -2.0);
            let fe = f(xe);
            evals += 1;
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let x = lin(centroid, pts[2], -0.5);
                (x, f(x))
            } else {
                let x = lin(centroid, pts[2], 0.5);
                (x, f(x))
            };
            evals += 1;
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    pts[k] = lin(pts[0], pts[k], 0.5);
                    vals[k] = f(pts[k]);
                }
                evals += 2;
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    (pts[best], vals[best], evals)
}

#[derive(Clone, Copy, Debug)]
pub struct EpOptions {
    /// Initial simplex edge; default `0.05 * max(1, |guess|)`.
    pub initial_step: Option<f64>,
    pub max_evals: usize,
    /// Accept when the gap is at most `ep_gap_tol * ||H||_F`.
    pub ep_gap_tol: f64,
    pub spectra: SpectraOptions,
    pub jordan: JordanOptions,
}

impl Default for EpOptions {
    fn default() -> Self {
        EpOptions {
            initial_step: None,
            max_evals: 4000,
            ep_gap_tol: 1e-8,
            spectra: SpectraOptions::default(),
            jordan: JordanOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EpCandidate {
    /// Point in the search plane (see [`ParamPlane`]).
    pub param: C64,
    pub gap: f64,
    /// `||H||_F` at the optimum; the gap tolerance is relative to it.
    pub scale: f64,
    pub eigenvalue: C64,
    pub pair: (usize, usize),
    /// Smallest phase rigidity a short distance away from the optimum.
    pub min_rigidity_nearby: f64,
    pub jordan: Option<JordanSolve>,
    pub evaluations: usize,
}

/// Both EPs `omega = -+ i (eps1 - eps2) / 2` of a two-level model in the
/// complex coupling plane.
pub fn analytic_ep_omega(spec: &TwoLevelSpec) -> [C64; 2] {
    let d = spec.eps1 - spec.eps2;
    let i = c(0.0, 1.0);
    [-i * d / 2.0, i * d / 2.0]
}

/// Factors `f+- = (m00 - m11) +- 2i sqrt(m01 m10)` of the 2x2 discriminant,
/// smaller modulus first. `|z1 - z2| = sqrt(|f+| |f-|)`.
fn discriminant_factors(m: &Matrix) -> (C64, C64) {
    let a = m[(0, 0)] - m[(1, 1)];
    // the square root of a square loses the last bits; skip it when possible
    let s = if m[(0, 1)] == m[(1, 0)] { m[(0, 1)] } else { (m[(0, 1)] * m[(1, 0)]).sqrt() };
    let i2 = c(0.0, 2.0);
    let (p, q) = (a + i2 * s, a - i2 * s);
    if p.norm() <= q.norm() {
        (p, q)
    } else {
        (q, p)
    }
}

fn min_gap(m: &Matrix, opts: &SpectraOptions) -> Option<(f64, (usize, usize), C64)> {
    if m.dim() == 2 {
        let (f, g) = discriminant_factors(m);
        return Some(((f.norm() * g.norm()).sqrt(), (0, 1), m.trace() / 2.0));
    }
    // loose residual check: the eigenvalues near an EP are only defined to sqrt(eps)
    let mut eo = opts.eig;
    eo.eig_tol = eo.eig_tol.max(1e-6);
    let pairs = eig_with(m, &eo).ok()?;
    let mut best: Option<(f64, (usize, usize), C64)> = None;
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let g = (pairs[i].value - pairs[j].value).norm();
            if best.map_or(true, |b| g < b.0) {
                best = Some((g, (i, j), (pairs[i].value + pairs[j].value) / 2.0));
            }
        }
    }
    best
}

/// Minimizes the smallest pairwise eigenvalue gap over `plane`.
///
/// Simplex descent from `guess`; for 2x2 models the optimum is polished by
/// Newton iteration on the vanishing factor of the discriminant. Accepted
/// points must also admit a Jordan chain, which excludes diabolic points.
pub fn locate_ep(
    model: &ModelSpec,
    base: &Overrides,
    plane: &ParamPlane,
    guess: C64,
    opts: &EpOptions,
) -> Result<EpCandidate> {
    let build = |p: C64| -> Result<Matrix> {
        let mut ov = base.clone();
        ov.extend(&plane.overrides(p));
        model.build(&ov)
    };
    let objective = |x: [f64; 2]| -> f64 {
        match build(c(x[0], x[1])) {
            Ok(m) => min_gap(&m, &opts.spectra).map_or(f64::INFINITY, |g| g.0),
            Err(_) => f64::INFINITY,
        }
    };
    let step = opts.initial_step.unwrap_or(0.05 * guess.norm().max(1.0));
    let (x, _, mut evals) = nelder_mead(objective, [guess.re, guess.im], step, opts.max_evals, 1e-15);
    let mut p = c(x[0], x[1]);
    // the simplex may stop early on the cusp; restart once from the best point
    let (x, _, e2) = nelder_mead(objective, [p.re, p.im], step * 1e-3, opts.max_evals, 1e-16);
    evals += e2;
    p = c(x[0], x[1]);

    if model.dim() == 2 {
        p = newton_polish(&build, p, &mut evals)?;
    }
    let m = build(p)?;
    let (gap, pair, eps0) = min_gap(&m, &opts.spectra).ok_or(Error::NoEpFound { best: (p.re, p.im), gap: f64::NAN })?;
    let scale = {
        let s = m.frobenius_norm();
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    if !(gap <= opts.ep_gap_tol * scale) {
        return Err(Error::NoEpFound { best: (p.re, p.im), gap });
    }
    let jordan = match jordan_chain_with(&m, eps0, &opts.jordan) {
        Ok(j) => j,
        Err(Error::NotAnEp(_)) => return Err(Error::NoEpFound { best: (p.re, p.im), gap }),
        Err(e) => return Err(e),
    };
    let offset = 1e-6 * p.norm().max(1.0);
    let min_rigidity_nearby = build(p + offset)
        .and_then(|mm| solve_modes_with(&mm, &opts.spectra))
        .map(|ms| ms.min_rigidity())
        .unwrap_or(f64::NAN);
    Ok(EpCandidate {
        param: p,
        gap,
        scale,
        eigenvalue: eps0,
        pair,
        min_rigidity_nearby,
        jordan: Some(jordan),
        evaluations: evals,
    })
}

fn newton_polish(build: &impl Fn(C64) -> Result<Matrix>, start: C64, evals: &mut usize) -> Result<C64> {
    let f = |p: C64| -> Option<C64> { build(p).ok().map(|m| discriminant_factors(&m).0) };
    let mut p = start;
    let mut fp = match f(p) {
        Some(v) => v,
        None => return Ok(p),
    };
    for _ in 0..60 {
        if fp.norm() == 0.0 {
            break;
        }
        let h = 1e-6 * p.norm().max(1.0);
        let (Some(fx1), Some(fx0), Some(fy1), Some(fy0)) =
            (f(p + c(h, 0.0)), f(p - c(h, 0.0)), f(p + c(0.0, h)), f(p - c(0.0, h)))
        else {
            break;
        };
        *evals += 4;
        let dx = (fx1 - fx0) / (2.0 * h);
        let dy = (fy1 - fy0) / (2.0 * h);
        // real 2x2 system [dx dy] [u v]^T = -f
        let det = dx.re * dy.im - dy.re * dx.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let u = (-fp.re * dy.im + fp.im * dy.re) / det;
        let v = (-dx.re * fp.im + dx.im * fp.re) / det;
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let q = p + c(t * u, t * v);
            if let Some(fq) = f(q) {
                *evals += 1;
                if fq.norm() < fp.norm() {
                    p = q;
                    fp = fq;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    // last bits by pattern search over neighbouring floats
    for _ in 0..200 {
        if fp.norm() == 0.0 {
            break;
        }
        let mut moved = false;
        'search: for k in [1i64, 2, 4, 8, 16] {
            for (dr, di) in [(k, 0), (-k, 0), (0, k), (0, -k), (k, k), (-k, -k), (k, -k), (-k, k)] {
                let q = c(nudge(p.re, dr), nudge(p.im, di));
                if let Some(fq) = f(q) {
                    *evals += 1;
                    if fq.norm() < fp.norm() {
                        p = q;
                        fp = fq;
                        moved = true;
                        break 'search;
                    }
                }
            }
        }
        if !moved {
            break;
        }
    }
    Ok(p)
}

/// `x` moved by `k` representable doubles (toward `+inf` for positive `k`).
fn nudge(x: f64, k: i64) -> f64 {
    if k == 0 || !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return k as f64 * f64::from_bits(1);
    }
    let b = x.to_bits() as i64;
    let nb = if x > 0.0 { b + k } else { b - k };
    let y = f64::from_bits(nb as u64);
    // crossing zero flips the sign bit; fall back to the smallest step
    if y.signum() != x.signum() { x + k as f64 * f64::EPSILON * x.abs() } else { y }
}

#[derive(Clone, Copy, Debug)]
pub struct CycleOptions {
    pub steps: usize,
    pub loops: usize,
    pub clockwise: bool,
    pub phase_tol: f64,
    pub sweep: SweepOptions,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions { steps: 400, loops: 4, clockwise: false, phase_tol: 1e-3, sweep: SweepOptions::default() }
    }
}

/// Outcome of continuing all modes around a closed circle.
#[derive(Clone, Debug)]
pub struct CycleReport {
    pub center: C64,
    pub radius: f64,
    pub steps: usize,
    pub clockwise: bool,
    /// `permutations[k][b]`: start-mode index that branch `b` sits on after
    /// `k + 1` loops.
    pub permutations: Vec<Vec<usize>>,
    /// Phase of `start[perm] . current` per branch after each loop, in `(-pi, pi]`.
    pub phases: Vec<Vec<f64>>,
    pub loops_to_restore_values: Option<usize>,
    pub loops_to_restore_vectors: Option<usize>,
    /// Eigenvalue of each branch at every step (including the start).
    pub trajectory: Vec<Vec<C64>>,
    /// Smallest matched overlap over the whole continuation.
    pub min_overlap: f64,
}

impl CycleReport {
    /// Permutation of a single loop.
    pub fn per_loop_permutation(&self) -> Option<&[usize]> {
        self.permutations.first().map(|p| p.as_slice())
    }
}

fn wrap(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Encircles the candidate's location; see [`encircle_point`].
pub fn encircle_ep(
    model: &ModelSpec,
    base: &Overrides,
    plane: &ParamPlane,
    ep: &EpCandidate,
    radius: f64,
    opts: &CycleOptions,
) -> Result<CycleReport> {
    encircle_point(model, base, plane, ep.param, radius, opts)
}

/// Continues every mode around `center + radius e^{+-i t}` for the
/// requested number of loops, with the sweep matching and gauge rules.
pub fn encircle_point(
    model: &ModelSpec,
    base: &Overrides,
    plane: &ParamPlane,
    center: C64,
    radius: f64,
    opts: &CycleOptions,
) -> Result<CycleReport> {
    if opts.steps < 100 {
        return Err(Error::Config("encircling needs at least 100 steps per loop".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::Config("encircling radius must be positive".into()));
    }
    let dir = if opts.clockwise { -1.0 } else { 1.0 };
    let point = |s: usize| {
        let t = dir * 2.0 * PI * (s % opts.steps) as f64 / opts.steps as f64;
        center + c(radius * t.cos(), radius * t.sin())
    };
    let modes_at = |s: usize| {
        let mut ov = base.clone();
        ov.extend(&plane.overrides(point(s)));
        model.build(&ov).and_then(|m| solve_modes_with(&m, &opts.sweep.spectra))
    };
    let start = modes_at(0)?;
    let n = start.len();
    let start_l: Vec<Vec<C64>> = start.modes.iter().map(|m| m.left.clone()).collect();
    let start_r: Vec<Vec<C64>> = start.modes.iter().map(|m| m.right.clone()).collect();
    let mut cur_l = start_l.clone();
    let mut cur_r = start_r.clone();
    let mut trajectory: Vec<Vec<C64>> = start.modes.iter().map(|m| vec![m.value]).collect();
    let mut permutations = Vec::new();
    let mut phases = Vec::new();
    let mut min_overlap = f64::INFINITY;
    for s in 1..=opts.steps * opts.loops {
        let set = modes_at(s)?;
        let ln: Vec<Vec<C64>> = set.modes.iter().map(|m| m.left.clone()).collect();
        let rn: Vec<Vec<C64>> = set.modes.iter().map(|m| m.right.clone()).collect();
        let o = matching::overlap_matrix(&cur_l, &cur_r, &ln, &rn);
        let assign = matching::assign(&o, opts.sweep.overlap_floor);
        let worst = (0..n).map(|i| o[i][assign[i]]).fold(f64::INFINITY, f64::min);
        min_overlap = min_overlap.min(worst);
        if worst < opts.sweep.overlap_floor {
            return Err(Error::StepSize { step: s, overlap: worst });
        }
        for b in 0..n {
            let j = assign[b];
            let g = gauge_factor(&cur_l[b], &rn[j], set.normalized[j]);
            cur_r[b] = rn[j].iter().map(|x| x * g).collect();
            cur_l[b] = ln[j].iter().map(|x| x / g).collect();
            trajectory[b].push(set.modes[j].value);
        }
        if s % opts.steps == 0 {
            let o = matching::overlap_matrix(&start_l, &start_r, &cur_l, &cur_r);
            let perm: Vec<usize> = (0..n)
                .map(|b| (0..n).max_by(|&x, &y| o[x][b].total_cmp(&o[y][b])).unwrap_or(b))
                .collect();
            let ph: Vec<f64> = (0..n)
                .map(|b| wrap(crate::linalg::cdot(&start_l[perm[b]], &cur_r[b]).arg()))
                .collect();
            permutations.push(perm);
            phases.push(ph);
        }
    }
    let identity = |p: &Vec<usize>| p.iter().enumerate().all(|(i, &j)| i == j);
    let loops_to_restore_values = permutations.iter().position(identity).map(|k| k + 1);
    let loops_to_restore_vectors = permutations
        .iter()
        .zip(&phases)
        .position(|(p, ph)| identity(p) && ph.iter().all(|x| x.abs() <= opts.phase_tol))
        .map(|k| k + 1);
    Ok(CycleReport {
        center,
        radius,
        steps: opts.steps,
        clockwise: opts.clockwise,
        permutations,
        phases,
        loops_to_restore_values,
        loops_to_restore_vectors,
        trajectory,
        min_overlap,
    })
}
