//! The invariant suite behind `eptrap selftest`.
//!
//! Every check is deterministic (fixed seeds) and reports a one-line detail
//! with the worst observed error next to its tolerance.

use std::f64::consts::PI;
use std::time::Instant;

use eptrap_core::linalg::{c, eig, Matrix};
use eptrap_core::models::{
    pv_self_energy, pv_self_energy_quadrature, BandModelSpec, PtSpec, ToyChainSpec, TwoLevelSpec,
};
use eptrap_core::observables::{
    decay_rate, expansion_weights, internal_wavefunction, order_parameter, resolvent_solve, scattering_series,
    time_delay, OrderParameterOptions, ScatteringModel,
};
use eptrap_core::scenarios::{run_scenario, SCENARIOS};
use eptrap_core::sweeps::{
    analytic_ep_omega, encircle_point, linspace, locate_ep, CycleOptions, EpOptions, ParamPlane, SweepGrid,
    SweepOptions,
};
use eptrap_core::{solve_modes, Error, ModelSpec, Overrides, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Check {
    let t = Instant::now();
    let (passed, detail) = f();
    Check { name, passed, detail, seconds: t.elapsed().as_secs_f64() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cnum(r: &mut impl Rng) -> C64 {
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

fn random_matrix(r: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |_, _| cnum(r)).expect("square")
}

/// Eigenvalues of 2x2 matrices against `(a+d)/2 +- sqrt(((a-d)/2)^2 + bc)`.
pub fn two_by_two_oracle(cases: usize) -> (bool, String) {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let m = random_matrix(&mut r, 2);
        let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let half = ((a - d) * (a - d) / 4.0 + b * cc).sqrt();
        let want = [(a + d) / 2.0 + half, (a + d) / 2.0 - half];
        let got = match eig(&m) {
            Ok(p) => [p[0].value, p[1].value],
            Err(e) => return (false, format!("eig failed: {e}")),
        };
        let straight = (got[0] - want[0]).norm().max((got[1] - want[1]).norm());
        let crossed = (got[0] - want[1]).norm().max((got[1] - want[0]).norm());
        worst = worst.max(straight.min(crossed));
    }
    (worst <= 1e-12, format!("{cases} matrices, max error {worst:.2e} (tol 1e-12)"))
}

/// EP search in the complex coupling plane of random two-level models.
pub fn ep_two_level(cases: usize) -> (bool, String) {
    let mut r = rng(2);
    let plane = ParamPlane::Complex("omega".into());
    let (mut worst_p, mut worst_gap, mut found) = (0.0f64, 0.0f64, 0);
    for _ in 0..cases {
        let spec = TwoLevelSpec { eps1: cnum(&mut r), eps2: cnum(&mut r), omega: c(0.0, 0.0) };
        let target = analytic_ep_omega(&spec);
        let size = target[0].norm().max(0.1);
        let guess = target[0] + c(r.gen_range(-0.1..0.1), r.gen_range(-0.1..0.1)) * size;
        match locate_ep(&ModelSpec::TwoLevel(spec.clone()), &Overrides::new(), &plane, guess, &EpOptions::default()) {
            Ok(ep) => {
                let dp = target.iter().map(|t| (ep.param - t).norm()).fold(f64::INFINITY, f64::min);
                // (eps1 - eps2) / (2 omega) must be +-i
                let z = (spec.eps1 - spec.eps2) / (ep.param * 2.0);
                let zerr = (z - c(0.0, z.im.signum())).norm();
                worst_p = worst_p.max(dp);
                worst_gap = worst_gap.max(ep.gap / ep.scale);
                if dp <= 1e-6 && ep.gap <= 1e-8 * ep.scale && zerr <= 1e-5 {
                    found += 1;
                }
            }
            Err(_) => {}
        }
    }
    (
        found == cases,
        format!("{found}/{cases} recovered; max parameter error {worst_p:.2e} (tol 1e-6), max gap {worst_gap:.2e} ||H|| (tol 1e-8)"),
    )
}

fn phase_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Four loops around the two-level EP, and the same at doubled resolution.
pub fn encircling() -> (bool, String) {
    let delta = 0.5;
    let model = ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, delta), eps2: c(0.0, -delta), omega: c(0.3, 0.0) });
    let plane = ParamPlane::Complex("omega".into());
    let ep = match locate_ep(&model, &Overrides::new(), &plane, c(0.45, 0.02), &EpOptions::default()) {
        Ok(ep) => ep,
        Err(e) => return (false, format!("EP not found: {e}")),
    };
    let run = |steps| {
        let opts = CycleOptions { steps, loops: 4, ..Default::default() };
        encircle_point(&model, &Overrides::new(), &plane, ep.param, 0.1, &opts)
    };
    let (a, b) = match (run(400), run(800)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return (false, format!("continuation failed: {e}")),
    };
    let swap = a.permutations[0] == vec![1, 0];
    let two = a.permutations[1] == vec![0, 1] && a.phases[1].iter().all(|&p| phase_dist(p, PI) <= 1e-3);
    let four = a.permutations[3] == vec![0, 1] && a.loops_to_restore_vectors == Some(4);
    let drift = a
        .phases
        .iter()
        .flatten()
        .zip(b.phases.iter().flatten())
        .map(|(x, y)| phase_dist(*x, *y))
        .fold(0.0, f64::max);
    let same_perm = a.permutations == b.permutations;
    (
        swap && two && four && same_perm && drift < 1e-3,
        format!(
            "1 loop swap {swap}, 2 loops identity with sign -1 {two}, restored after {:?} loops, step doubling drift {drift:.2e} rad (tol 1e-3)",
            a.loops_to_restore_vectors
        ),
    )
}

/// `sum z_k = tr H` on random matrices up to n = 64, and the toy width sum.
pub fn trace_sum_rule(cases: usize) -> (bool, String) {
    let worst = (0..cases as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(1000 + i);
            let n = r.gen_range(1..=64);
            let m = random_matrix(&mut r, n);
            let f = m.frobenius_norm();
            match eig(&m) {
                Ok(p) => {
                    let s: C64 = p.iter().map(|p| p.value).sum();
                    let res = p.iter().map(|p| p.residual).fold(0.0, f64::max);
                    ((s - m.trace()).norm() / f, res / f)
                }
                Err(_) => (f64::INFINITY, f64::INFINITY),
            }
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let spec = ToyChainSpec::equally_spaced(10, 1.0, 0.0);
    let vv = spec.v_norm_sqr();
    let alphas = linspace(0.0, 5.0, 201);
    let mut toy: f64 = 0.0;
    match SweepGrid::real(ModelSpec::ToyChain(spec), "alpha", &alphas)
        .and_then(|g| crate::parallel::sweep(&g, &SweepOptions::default()))
    {
        Ok(res) => {
            for (k, a) in alphas.iter().enumerate() {
                let s: f64 = res.branches.iter().map(|b| b.widths()[k]).sum();
                toy = toy.max((s - a * vv).abs() / (a * vv).max(1.0));
            }
        }
        Err(e) => return (false, format!("toy sweep failed: {e}")),
    }
    (
        worst.0 <= 1e-10 && worst.1 <= 1e-10 && toy <= 1e-10,
        format!(
            "{cases} matrices: trace error {:.2e}, residual {:.2e} ||H|| (tol 1e-10); toy width sum error {toy:.2e}",
            worst.0, worst.1
        ),
    )
}

/// N = 10 toy chain: one linearly growing width, nine trapped, one jump.
pub fn trapping() -> (bool, String) {
    let alphas = linspace(0.0, 4.0, 801);
    let g = match SweepGrid::real(ModelSpec::ToyChain(ToyChainSpec::equally_spaced(10, 1.0, 0.0)), "alpha", &alphas) {
        Ok(g) => g,
        Err(e) => return (false, e.to_string()),
    };
    let r = match crate::parallel::sweep(&g, &SweepOptions::default()) {
        Ok(r) => r,
        Err(e) => return (false, format!("sweep failed: {e}")),
    };
    let op = order_parameter(&r, &OrderParameterOptions::default());
    let last = alphas.len() - 1;
    let broad = (0..r.branches.len())
        .max_by(|&a, &b| r.branches[a].widths()[last].total_cmp(&r.branches[b].widths()[last]))
        .unwrap_or(0);
    // trapped widths decrease over the last quarter of the grid
    let tail = alphas.len() * 3 / 4;
    let trapped_down = r
        .branches
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != broad)
        .filter(|(_, b)| b.widths()[tail..].windows(2).all(|w| w[1] < w[0]))
        .count();
    let r2 = op.post_critical_fit.map_or(f64::NAN, |f| f.r2);
    (
        op.jump_clusters == 1 && op.alpha_cr.is_some() && op.linear && trapped_down == 9,
        format!(
            "alpha_cr {:?}, {} jump cluster(s), broad-branch fit r2 {r2:.6} (min 0.999), {trapped_down}/9 trapped widths decreasing",
            op.alpha_cr, op.jump_clusters
        ),
    )
}

/// Hermitian rigidity 1, collapse on the approach to an EP, `r a = 1`.
pub fn phase_rigidity() -> (bool, String) {
    let mut r = rng(6);
    let mut herm: f64 = 0.0;
    let mut ra: f64 = 0.0;
    for n in 1..=16 {
        let a = random_matrix(&mut r, n);
        let h = Matrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5).expect("square");
        match solve_modes(&h) {
            Ok(ms) => {
                herm = herm.max(ms.r_k.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max));
            }
            Err(e) => return (false, format!("Hermitian solve failed: {e}")),
        }
        let s = Matrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)]) * 0.5).expect("square");
        if let Ok(ms) = solve_modes(&s) {
            for k in 0..n {
                if ms.normalized[k] {
                    ra = ra.max((ms.r_k[k] * ms.a_k[k] - 1.0).abs());
                }
            }
        }
    }
    let delta = 0.4;
    let mut below = None;
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for k in 1..=7 {
        let d = 10f64.powi(-k);
        let m = ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, delta), eps2: c(0.0, -delta), omega: c(delta + d, 0.0) })
            .build(&Overrides::new())
            .expect("valid model");
        let rr = solve_modes(&m).map(|ms| ms.min_rigidity()).unwrap_or(f64::NAN);
        monotone &= rr < prev;
        prev = rr;
        if below.is_none() && rr < 0.1 {
            below = Some(d);
        }
    }
    let near = below.is_some_and(|d| d >= 1e-3);
    (
        herm <= 1e-12 && ra <= 1e-12 && near && monotone,
        format!(
            "Hermitian |r - 1| {herm:.2e} (tol 1e-12), |r a - 1| {ra:.2e}, min r < 0.1 from distance {below:?} (need <= 1e-3 onward), monotone {monotone}"
        ),
    )
}

/// Box-profile shift: closed form against adaptive principal-value quadrature.
pub fn pv_box(cases: usize) -> (bool, String) {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let lo = r.gen_range(-3.0..0.0);
        let hi = lo + r.gen_range(0.5..4.0);
        let spec = BandModelSpec {
            e_b: vec![0.0],
            gamma0: vec![vec![r.gen_range(0.1..1.5)]],
            bands: vec![(lo, hi)],
            energy: lo + (hi - lo) * r.gen_range(0.02..0.98),
        };
        match (pv_self_energy(&spec, 0, 0), pv_self_energy_quadrature(&spec, 0, 0)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).abs() / a.abs().max(1e-300)),
            _ => return (false, "shift evaluation failed".into()),
        }
    }
    let spec = BandModelSpec { e_b: vec![0.0], gamma0: vec![vec![1.0]], bands: vec![(0.0, 2.0)], energy: 1.5 };
    let anchor = pv_self_energy(&spec, 0, 0).unwrap_or(f64::NAN);
    let anchor_ok = (anchor - 3f64.ln() / (2.0 * PI)).abs() < 1e-14 && (anchor - 0.17484).abs() < 2e-5;
    (
        worst <= 1e-6 && anchor_ok,
        format!("{cases} configurations, max relative error {worst:.2e} (tol 1e-6); band [0,2] at E = 1.5 gives {anchor:.6}"),
    )
}

/// Wide-band single resonance: unitarity, delay peak, coarse-grid rejection.
pub fn s_matrix_time_delay() -> (bool, String) {
    let gamma: f64 = 0.2;
    let spec = BandModelSpec { e_b: vec![0.0], gamma0: vec![vec![gamma.sqrt()]], bands: vec![(-10.0, 10.0)], energy: 0.0 };
    let m = match ScatteringModel::band(spec, true) {
        Ok(m) => m,
        Err(e) => return (false, e.to_string()),
    };
    let es = linspace(-1.0, 1.0, 10_000);
    let unit = match scattering_series(&m, &es, (0, 0)) {
        Ok(s) => s.max_unitarity_defect,
        Err(e) => return (false, e.to_string()),
    };
    let peak = match time_delay(&m, &es) {
        Ok(td) => td.tau.iter().copied().fold(0.0, f64::max),
        Err(e) => return (false, e.to_string()),
    };
    let rel = (peak - 4.0 / gamma).abs() / (4.0 / gamma);
    let coarse = matches!(time_delay(&m, &linspace(-1.0, 1.0, 8)), Err(Error::GridTooCoarse { .. }));
    (
        unit <= 1e-8 && rel <= 0.01 && coarse,
        format!("unitarity defect {unit:.2e} (tol 1e-8), peak delay {peak:.4} vs 4/G = {:.4} (rel {rel:.2e}, tol 1e-2), coarse grid rejected {coarse}", 4.0 / gamma),
    )
}

/// Decay-rate bounds, monotonicity and smoothness through a near-EP path.
pub fn decay() -> (bool, String) {
    let t = linspace(0.0, 400.0, 801);
    let single = decay_rate(&[0.3], &[c(0.4, -0.7)], &t).map(|d| d.rate.iter().all(|&k| k == 0.3)).unwrap_or(false);
    let (g1, g2) = (0.1, 0.5);
    let two = match decay_rate(&[g1, g2], &[c(1.0, 0.0), c(0.0, 0.8)], &t) {
        Ok(d) => d,
        Err(e) => return (false, e.to_string()),
    };
    let bounded = two.rate.iter().all(|&k| (g1..=g2).contains(&k));
    let mono = two.rate.windows(2).all(|w| w[1] <= w[0]);
    let limit = (two.rate[two.rate.len() - 1] - g1).abs();
    let delta = 0.5;
    let g = vec![c(1.0, 0.0), c(0.3, 0.0)];
    let mut finite = true;
    for om in linspace(delta - 0.01, delta + 0.01, 41) {
        let h = ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, 0.0), eps2: c(0.0, -2.0 * delta), omega: c(om + 1e-9, 0.0) })
            .build(&Overrides::new())
            .expect("valid model");
        finite &= solve_modes(&h)
            .and_then(|ms| decay_rate(&ms.widths(), &expansion_weights(&ms, &g, 0.0), &t))
            .map(|d| d.rate.iter().all(|k| k.is_finite()))
            .unwrap_or(false);
    }
    (
        single && bounded && mono && limit <= 1e-6 && finite,
        format!("single mode constant {single}, two modes bounded {bounded}, non-increasing {mono}, |k(t_max) - G_min| {limit:.2e} (tol 1e-6), finite near EP {finite}"),
    )
}

/// Real spectrum exactly when `gamma <= 2 |omega|`, located to one grid step.
pub fn pt_threshold() -> (bool, String) {
    let mut worst_off: f64 = 0.0;
    let mut ok = true;
    for &omega in &[0.25f64, -0.5, 0.8] {
        let gammas = linspace(0.0, 4.0 * omega.abs(), 200);
        let real: Vec<bool> = gammas
            .iter()
            .map(|&gamma| {
                let m = ModelSpec::Pt(PtSpec { e: 0.2, gamma, omega }).build(&Overrides::new()).expect("valid");
                let scale = m.frobenius_norm().max(1.0);
                solve_modes(&m).map(|ms| ms.modes.iter().all(|p| p.value.im.abs() <= 1e-7 * scale)).unwrap_or(false)
            })
            .collect();
        let k = real.iter().position(|r| !r).unwrap_or(real.len());
        let iff = real.iter().zip(&gammas).all(|(r, g)| *r == (*g <= 2.0 * omega.abs() + 1e-6));
        let h = gammas[1] - gammas[0];
        let bracketed = k > 0 && k < gammas.len() && gammas[k - 1] <= 2.0 * omega.abs() && 2.0 * omega.abs() <= gammas[k];
        if k > 0 && k < gammas.len() {
            worst_off = worst_off.max(((gammas[k - 1] + gammas[k]) / 2.0 - 2.0 * omega.abs()).abs() / h);
        }
        ok &= iff && bracketed;
    }
    (ok, format!("threshold bracketed by one grid step for 3 couplings; midpoint offset {worst_off:.2} steps"))
}

/// Mode expansion of the internal wavefunction against a direct solve.
pub fn resolvent_identity(cases: usize) -> (bool, String) {
    let mut r = rng(11);
    let (mut worst, mut done, mut tries) = (0.0f64, 0, 0);
    while done < cases && tries < 10 * cases {
        tries += 1;
        let n = r.gen_range(2..7);
        let ch = r.gen_range(1..3);
        let spec = BandModelSpec {
            e_b: (0..n).map(|_| r.gen_range(-1.0..1.0)).collect(),
            gamma0: (0..n).map(|_| (0..ch).map(|_| r.gen_range(-0.8..0.8)).collect()).collect(),
            bands: (0..ch).map(|_| (r.gen_range(-4.0..-2.0), r.gen_range(2.0..4.0))).collect(),
            energy: r.gen_range(-1.0..1.0),
        };
        let e = r.gen_range(-1.5..1.5);
        let model = ModelSpec::Band(spec);
        let Ok(h) = model.build(&Overrides::new()) else { return (false, "band model rejected".into()) };
        // exact degeneracies need the Jordan basis; skip them
        let ms = match solve_modes(&h) {
            Ok(ms) if ms.ep_pairs.is_empty() => ms,
            _ => continue,
        };
        let vertex = model.channel_vertex(&Overrides::new()).expect("band vertex");
        let g: Vec<C64> = vertex.iter().map(|row| row[0]).collect();
        match (internal_wavefunction(&ms, &g, e), resolvent_solve(&h, &g, e)) {
            (Ok(a), Ok(b)) => {
                let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
                worst = worst.max(a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale);
            }
            _ => return (false, "wavefunction evaluation failed".into()),
        }
        done += 1;
    }
    (done == cases && worst <= 1e-10, format!("{done} band models, max deviation {worst:.2e} (tol 1e-10)"))
}

/// Every registered scenario with its defaults.
pub fn scenarios() -> (bool, String) {
    let results: Vec<(String, bool)> = SCENARIOS
        .par_iter()
        .map(|name| match run_scenario(name, &[]) {
            Ok(b) => (name.to_string(), b.passed()),
            Err(e) => (format!("{name} ({})", e.reason()), false),
        })
        .collect();
    let failed: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    (failed.is_empty(), if failed.is_empty() { format!("{} scenarios pass", results.len()) } else { format!("failed: {}", failed.join(", ")) })
}

pub fn run_all() -> Vec<Check> {
    type Job = (&'static str, fn() -> (bool, String));
    let jobs: Vec<Job> = vec![
        ("eig-2x2-closed-form", || two_by_two_oracle(1000)),
        ("ep-two-level", || ep_two_level(50)),
        ("ep-encircling", encircling),
        ("trace-sum-rule", || trace_sum_rule(10_000)),
        ("resonance-trapping", trapping),
        ("phase-rigidity", phase_rigidity),
        ("pv-box-shift", || pv_box(100)),
        ("s-matrix-time-delay", s_matrix_time_delay),
        ("decay-rate", decay),
        ("pt-threshold", pt_threshold),
        ("resolvent-identity", || resolvent_identity(100)),
        ("scenarios", scenarios),
    ];
    jobs.into_par_iter().map(|(name, f)| timed(name, f)).collect()
}
