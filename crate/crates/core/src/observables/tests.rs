use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::error::Error;
use crate::linalg::{c, Matrix, C64};
use crate::models::{BandModelSpec, ModelSpec, Overrides, ToyChainSpec};
use crate::spectra::solve_modes;
use crate::sweeps::{linspace, sweep, SweepGrid, SweepOptions};

fn single(e1: f64, g: f64) -> ScatteringModel {
    let spec = BandModelSpec { e_b: vec![e1], gamma0: vec![vec![g.sqrt()]], bands: vec![(-10.0, 10.0)], energy: 0.0 };
    ScatteringModel::band(spec, true).unwrap()
}

fn toy(n: usize, alpha: f64) -> ModelSpec {
    ModelSpec::ToyChain(ToyChainSpec::equally_spaced(n, 1.0, alpha))
}

#[test]
fn zero_coupling_is_identity() {
    let m = ScatteringModel::new(Matrix::diag(&[c(0.3, 0.0)]).unwrap(), vec![vec![c(0.0, 0.0)]]).unwrap();
    let s = m.s_matrix(0.1).unwrap();
    assert_eq!(s[0][0], c(1.0, 0.0));
    let td = time_delay(&m, &linspace(-1.0, 1.0, 50)).unwrap();
    assert!(td.tau.iter().all(|t| t.abs() < 1e-15));
}

#[test]
fn single_resonance_breit_wigner() {
    let g = 0.2;
    let m = single(0.1, g);
    for &e in &[-0.5, 0.0, 0.1, 0.37] {
        let s = m.s_matrix(e).unwrap()[0][0];
        let expect = c(1.0, 0.0) - c(0.0, g) / c(e - 0.1, g / 2.0);
        assert!((s - expect).norm() < 1e-14);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn delay_peak_is_four_over_gamma() {
    let g = 0.2;
    let m = single(0.0, g);
    let es = linspace(-1.0, 1.0, 10_001);
    let td = time_delay(&m, &es).unwrap();
    let peak = td.tau.iter().copied().fold(0.0, f64::max);
    assert!((peak - 4.0 / g).abs() < 0.01 * 4.0 / g, "{peak}");
    for (e, t) in es.iter().zip(&td.tau).step_by(97) {
        let bw = g / (e * e + g * g / 4.0);
        assert!((t - bw).abs() < 1e-3 * bw.max(1.0));
    }
}

#[test]
fn coarse_grid_is_rejected() {
    let m = single(0.0, 0.01);
    let r = time_delay(&m, &linspace(-1.0, 1.0, 21));
    assert!(matches!(r, Err(Error::GridTooCoarse { .. })), "{r:?}");
}

#[test]
fn overlapping_pair_is_unitary() {
    let spec = BandModelSpec {
        e_b: vec![-0.1, 0.1],
        gamma0: vec![vec![0.5], vec![0.4]],
        bands: vec![(-5.0, 5.0)],
        energy: 0.0,
    };
    for wide in [true, false] {
        let m = ScatteringModel::band(spec.clone(), wide).unwrap();
        let s = scattering_series(&m, &linspace(-1.0, 1.0, 400), (0, 0)).unwrap();
        assert!(s.max_unitarity_defect < 1e-8, "{}", s.max_unitarity_defect);
    }
}

#[test]
fn lapses() {
    let one = single(0.0, 0.1);
    let s = scattering_series(&one, &linspace(-1.0, 1.0, 2001), (0, 0)).unwrap();
    assert!(phase_lapse_scan(&s, 0.1).is_empty());

    let spec = toy(2, 0.5);
    let m = ScatteringModel::from_spec(&spec, &Overrides::new(), true).unwrap();
    let s = scattering_series(&m, &linspace(-2.0, 2.0, 4000), (0, 0)).unwrap();
    let l = phase_lapse_scan(&s, 0.1);
    assert_eq!(l.len(), 1, "{l:?}");
    assert!(l[0].zero_energy.abs() < 2e-3);
    assert!(l[0].left_peak < 0.0 && l[0].right_peak > 0.0);
}

#[test]
fn rho_examples() {
    assert!((rho_phase_rigidity(&[c(1.0, 0.0), c(-2.0, 0.0)]).unwrap() - 1.0).abs() < 1e-15);
    assert!(rho_phase_rigidity(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap() < 1e-15);
    // a global phase does not matter
    let r = rho_phase_rigidity(&[c(0.6, 0.8), c(-1.2, -1.6)]).unwrap();
    assert!((r - 1.0).abs() < 1e-14);
    assert!(matches!(rho_phase_rigidity(&[c(0.0, 0.0)]), Err(Error::Domain(_))));
}

#[test]
fn weak_coupling_wavefunction_is_rigid() {
    let spec = toy(5, 0.01);
    let h = spec.build(&Overrides::new()).unwrap();
    let ms = solve_modes(&h).unwrap();
    let g: Vec<C64> = spec.channel_vertex(&Overrides::new()).unwrap().iter().map(|r| r[0]).collect();
    let psi = internal_wavefunction(&ms, &g, 0.13).unwrap();
    assert!(rho_phase_rigidity(&psi).unwrap() >= 0.99);
}

#[test]
fn resolvent_identity() {
    let spec = toy(4, 1.3);
    let h = spec.build(&Overrides::new()).unwrap();
    let ms = solve_modes(&h).unwrap();
    let g: Vec<C64> = spec.channel_vertex(&Overrides::new()).unwrap().iter().map(|r| r[0]).collect();
    for &e in &[-1.1, -0.2, 0.45, 2.0] {
        let a = internal_wavefunction(&ms, &g, e).unwrap();
        let b = resolvent_solve(&h, &g, e).unwrap();
        let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-10, "{d}");
    }
}

#[test]
fn decay_examples() {
    let t = linspace(0.0, 200.0, 201);
    let one = decay_rate(&[0.1], &[c(0.7, 0.2)], &t).unwrap();
    assert!(one.rate.iter().all(|&k| k == 0.1));
    let eq = decay_rate(&[0.2, 0.2], &[c(1.0, 0.0), c(0.3, 0.0)], &t).unwrap();
    assert!(eq.rate.iter().all(|&k| (k - 0.2).abs() < 1e-15));
    let two = decay_rate(&[0.1, 0.3], &[c(1.0, 0.0), c(1.0, 0.0)], &t).unwrap();
    assert!((two.rate[0] - 0.2).abs() < 1e-15);
    assert!(two.rate.windows(2).all(|w| w[1] <= w[0]));
    assert!((two.rate[200] - 0.1).abs() < 1e-6);
    assert!(two.population.windows(2).all(|w| w[1] <= w[0]));
    let far = decay_rate(&[0.1, 0.3], &[c(1.0, 0.0), c(1.0, 0.0)], &[1e6]).unwrap();
    assert!((far.rate[0] - 0.1).abs() < 1e-12);
    assert!(matches!(decay_rate(&[0.1], &[c(0.0, 0.0)], &t), Err(Error::Domain(_))));
}

#[test]
fn average_rate_two_level_turnover() {
    let spec = ModelSpec::ToyChain(ToyChainSpec { h0_diag: vec![-1.0, 1.0], v: vec![c(1.0, 0.0); 2], alpha: 0.0 });
    let alphas = linspace(0.0, 6.0, 121);
    let g = SweepGrid::real(spec, "alpha", &alphas).unwrap();
    let r = sweep(&g, &SweepOptions::default()).unwrap();
    let av = average_rate_vs_alpha(&r);
    for (a, gav) in alphas.iter().zip(&av.gamma_av) {
        let closed = if *a <= 2.0 { *a } else { a - (a * a - 4.0).sqrt() };
        assert!((gav - closed).abs() < 1e-6, "alpha {a}: {gav} vs {closed}");
    }
    assert!((av.saturation_onset.unwrap() - 2.0).abs() < 0.051);
}

#[test]
fn order_parameter_detects_one_jump() {
    let alphas = linspace(0.0, 2.0, 401);
    let g = SweepGrid::real(toy(10, 0.0), "alpha", &alphas).unwrap();
    let r = sweep(&g, &SweepOptions::default()).unwrap();
    let op = order_parameter(&r, &OrderParameterOptions::default());
    assert_eq!(op.jump_clusters, 1, "{:?}", op.jumps);
    let a = op.alpha_cr.unwrap();
    assert!(a > 0.05 && a < 0.5, "{a}");
    assert!(op.linear, "{:?}", op.post_critical_fit);

    let low = SweepGrid::real(toy(10, 0.0), "alpha", &linspace(0.0, 0.05, 51)).unwrap();
    let op = order_parameter(&sweep(&low, &SweepOptions::default()).unwrap(), &OrderParameterOptions::default());
    assert!(op.alpha_cr.is_none(), "{:?} tol {}", op.jumps, op.jump_tol);
}
