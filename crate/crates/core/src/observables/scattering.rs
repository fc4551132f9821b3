//! S matrix, transmission phase, Wigner-Smith delay and phase lapses.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{c, eig, Lu, Matrix, C64};
use crate::models::{build_heff_band, build_heff_wide_band, BandModelSpec, ModelSpec, Overrides};

#[derive(Clone, Debug)]
enum Heff {
    Fixed(Matrix),
    Band { spec: BandModelSpec, wide: bool },
}

/// Effective Hamiltonian together with the channel vertex `gamma[k][c]`.
#[derive(Clone, Debug)]
pub struct ScatteringModel {
    heff: Heff,
    gamma: Vec<Vec<C64>>,
}

impl ScatteringModel {
    /// Energy-independent `heff` with an explicit vertex.
    pub fn new(heff: Matrix, gamma: Vec<Vec<C64>>) -> Result<Self> {
        check_vertex(heff.dim(), &gamma)?;
        Ok(ScatteringModel { heff: Heff::Fixed(heff), gamma })
    }

    /// Band model evaluated at each requested energy; `wide` drops the
    /// principal-value shifts.
    pub fn band(spec: BandModelSpec, wide: bool) -> Result<Self> {
        spec.validate()?;
        let gamma = spec.gamma0.iter().map(|row| row.iter().map(|&g| c(g, 0.0)).collect()).collect();
        Ok(ScatteringModel { heff: Heff::Band { spec, wide }, gamma })
    }

    /// Toy chain (vertex `sqrt(alpha) v`) or band model from a spec.
    pub fn from_spec(model: &ModelSpec, overrides: &Overrides, wide_band: bool) -> Result<Self> {
        match model {
            ModelSpec::Band(_) => ScatteringModel::band(model.resolved_band(overrides)?, wide_band),
            ModelSpec::ToyChain(_) => {
                let m = model.build(overrides)?;
                let g = model.channel_vertex(overrides)?;
                ScatteringModel::new(m, g)
            }
            other => Err(Error::Contract(format!("{} model has no scattering channels", other.kind()))),
        }
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn channels(&self) -> usize {
        self.gamma.first().map_or(0, |r| r.len())
    }

    pub fn vertex(&self) -> &[Vec<C64>] {
        &self.gamma
    }

    pub fn channel_column(&self, ch: usize) -> Vec<C64> {
        self.gamma.iter().map(|row| row[ch]).collect()
    }

    pub fn heff_at(&self, e: f64) -> Result<Matrix> {
        match &self.heff {
            Heff::Fixed(m) => Ok(m.clone()),
            Heff::Band { spec, wide } => {
                let mut s = spec.clone();
                s.energy = e;
                if *wide {
                    build_heff_wide_band(&s)
                } else {
                    build_heff_band(&s)
                }
            }
        }
    }

    /// `(E - H_eff)^{-1} gamma_c` for every channel column.
    pub fn propagated(&self, e: f64) -> Result<Vec<Vec<C64>>> {
        let h = self.heff_at(e)?;
        let a = h.shifted(c(e, 0.0)).scaled(c(-1.0, 0.0));
        let lu = Lu::new(&a).map_err(|_| Error::Pole { energy: e })?;
        (0..self.channels()).map(|ch| lu.solve(&self.channel_column(ch))).collect()
    }

    /// `S(E) = I - i gamma^T (E - H_eff)^{-1} gamma`.
    pub fn s_matrix(&self, e: f64) -> Result<Vec<Vec<C64>>> {
        let x = self.propagated(e)?;
        let cc = self.channels();
        let mut s = vec![vec![C64::new(0.0, 0.0); cc]; cc];
        for a in 0..cc {
            for b in 0..cc {
                let t: C64 = (0..self.dim()).map(|k| self.gamma[k][a] * x[b][k]).sum();
                s[a][b] = if a == b { c(1.0, 0.0) } else { C64::new(0.0, 0.0) } - c(0.0, 1.0) * t;
            }
        }
        if s.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Pole { energy: e });
        }
        Ok(s)
    }

    /// `T_ab = -i gamma_a^T (E - H_eff)^{-1} gamma_b`.
    pub fn transmission(&self, e: f64, a: usize, b: usize) -> Result<C64> {
        let x = self.propagated(e)?;
        let t: C64 = (0..self.dim()).map(|k| self.gamma[k][a] * x[b][k]).sum();
        Ok(-c(0.0, 1.0) * t)
    }
}

fn check_vertex(n: usize, gamma: &[Vec<C64>]) -> Result<()> {
    if gamma.len() != n {
        return Err(Error::Dimension(format!("vertex has {} rows for {n} states", gamma.len())));
    }
    let cc = gamma.first().map_or(0, |r| r.len());
    if cc == 0 || gamma.iter().any(|r| r.len() != cc) {
        return Err(Error::Dimension("vertex rows must share a positive channel count".into()));
    }
    Ok(())
}

/// Largest entry of `S^H S - I`.
pub fn unitarity_defect(s: &[Vec<C64>]) -> f64 {
    let n = s.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let mut acc: C64 = (0..n).map(|k| s[k][a].conj() * s[k][b]).sum();
            if a == b {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// Determinant by LU (small matrices).
pub fn det(s: &[Vec<C64>]) -> C64 {
    let n = s.len();
    let mut a: Vec<Vec<C64>> = s.to_vec();
    let mut d = c(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap_or(k);
        if a[p][k].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in (k + 1)..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    d
}

/// Principal value of an angle in `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Sampled S matrix and designated-pair transmission.
#[derive(Clone, Debug)]
pub struct ScatteringSeries {
    pub energies: Vec<f64>,
    pub s_matrix: Vec<Vec<Vec<C64>>>,
    pub pair: (usize, usize),
    pub transmission: Vec<C64>,
    /// `arg T`, continued across smooth steps, keeping the +-pi jumps at zeros.
    pub beta: Vec<f64>,
    pub max_unitarity_defect: f64,
}

pub fn scattering_series(model: &ScatteringModel, energies: &[f64], pair: (usize, usize)) -> Result<ScatteringSeries> {
    let cc = model.channels();
    if pair.0 >= cc || pair.1 >= cc {
        return Err(Error::Config(format!("channel pair {pair:?} out of range for {cc} channels")));
    }
    let mut s_matrix = Vec::with_capacity(energies.len());
    let mut transmission = Vec::with_capacity(energies.len());
    let mut worst: f64 = 0.0;
    for &e in energies {
        let s = model.s_matrix(e)?;
        worst = worst.max(unitarity_defect(&s));
        let mut t = s[pair.0][pair.1];
        if pair.0 == pair.1 {
            t -= 1.0;
        }
        transmission.push(t);
        s_matrix.push(s);
    }
    let beta = continued_phase(&transmission);
    Ok(ScatteringSeries {
        energies: energies.to_vec(),
        s_matrix,
        pair,
        transmission,
        beta,
        max_unitarity_defect: worst,
    })
}

/// Adds principal steps of `arg(z_{k+1} / z_k)`; zero samples repeat the
/// previous phase.
fn continued_phase(z: &[C64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(z.len());
    let mut last: Option<C64> = None;
    let mut acc = 0.0;
    for &v in z {
        if v.norm() == 0.0 {
            out.push(acc);
            continue;
        }
        match last {
            None => acc = v.arg(),
            Some(p) => acc += wrap_angle((v / p).arg()),
        }
        last = Some(v);
        out.push(acc);
    }
    out
}

/// Unwrapped total phase and its energy derivative.
#[derive(Clone, Debug)]
pub struct TimeDelay {
    pub energies: Vec<f64>,
    pub phase: Vec<f64>,
    pub tau: Vec<f64>,
}

/// Largest accepted raw phase step between neighbouring samples.
pub const MAX_PHASE_STEP: f64 = PI / 2.0;

/// Wigner-Smith delay `d arg det S / dE` by central differences.
///
/// Each step of the phase must be below [`MAX_PHASE_STEP`] and is
/// confirmed at the midpoint; every resonance pole inside the grid must be
/// resolved by a local spacing of at most half its width. Violations give
/// [`Error::GridTooCoarse`].
pub fn time_delay(model: &ScatteringModel, energies: &[f64]) -> Result<TimeDelay> {
    let n = energies.len();
    if n < 2 {
        return Err(Error::Config("time delay needs at least 2 energies".into()));
    }
    if energies.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("energy grid must be strictly increasing".into()));
    }
    let dets: Vec<C64> = energies.iter().map(|&e| model.s_matrix(e).map(|s| det(&s))).collect::<Result<_>>()?;
    check_pole_resolution(model, energies)?;
    let mut phase = Vec::with_capacity(n);
    phase.push(dets[0].arg());
    for k in 0..n - 1 {
        let step = wrap_angle((dets[k + 1] / dets[k]).arg());
        if step.abs() > MAX_PHASE_STEP {
            return Err(Error::GridTooCoarse { index: k, step });
        }
        let mid = 0.5 * (energies[k] + energies[k + 1]);
        let dm = det(&model.s_matrix(mid)?);
        let h1 = wrap_angle((dm / dets[k]).arg());
        let h2 = wrap_angle((dets[k + 1] / dm).arg());
        if (h1 + h2 - step).abs() > 1e-6 {
            return Err(Error::GridTooCoarse { index: k, step: h1 + h2 });
        }
        phase.push(phase[k] + step);
    }
    let tau = derivative(energies, &phase);
    Ok(TimeDelay { energies: energies.to_vec(), phase, tau })
}

fn check_pole_resolution(model: &ScatteringModel, energies: &[f64]) -> Result<()> {
    let (lo, hi) = (energies[0], energies[energies.len() - 1]);
    let mid = 0.5 * (lo + hi);
    let h = model.heff_at(mid)?;
    let scale = h.frobenius_norm().max(1.0);
    for p in eig(&h)? {
        let (e, g) = (p.value.re, -2.0 * p.value.im);
        if !(lo < e && e < hi) || g <= 1e-12 * scale {
            continue;
        }
        let k = energies.partition_point(|&x| x < e).clamp(1, energies.len() - 1);
        let spacing = energies[k] - energies[k - 1];
        if spacing > 0.5 * g {
            return Err(Error::GridTooCoarse { index: k - 1, step: spacing });
        }
    }
    Ok(())
}

/// Central differences with one-sided endpoints.
pub fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|k| {
            let (a, b) = if k == 0 {
                (0, 1)
            } else if k + 1 == n {
                (n - 2, n - 1)
            } else {
                (k - 1, k + 1)
            };
            (y[b] - y[a]) / (x[b] - x[a])
        })
        .collect()
}

/// One downward pi jump of the transmission phase between two peaks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseLapse {
    pub left_peak: f64,
    pub right_peak: f64,
    /// Grid energy of the smallest `|T|` in the valley.
    pub zero_energy: f64,
    pub min_abs_t: f64,
    pub jump: f64,
}

/// Interior local maxima of `|T|`.
pub fn transmission_peaks(series: &ScatteringSeries) -> Vec<usize> {
    let a: Vec<f64> = series.transmission.iter().map(|t| t.norm()).collect();
    (1..a.len().saturating_sub(1)).filter(|&k| a[k] > a[k - 1] && a[k] >= a[k + 1]).collect()
}

/// Phase steps of magnitude `pi` (within `lapse_tol`) between successive
/// transmission peaks. Each valley contributes at most one event.
pub fn phase_lapse_scan(series: &ScatteringSeries, lapse_tol: f64) -> Vec<PhaseLapse> {
    let peaks = transmission_peaks(series);
    let t = &series.transmission;
    let e = &series.energies;
    let mut out = Vec::new();
    let is_pi = |a: usize, b: usize| {
        t[a].norm() > 0.0 && t[b].norm() > 0.0 && (wrap_angle((t[b] / t[a]).arg()).abs() - PI).abs() <= lapse_tol
    };
    for w in peaks.windows(2) {
        let (p, q) = (w[0], w[1]);
        let kmin = (p..=q).min_by(|&a, &b| t[a].norm().total_cmp(&t[b].norm())).unwrap_or(p);
        // a sample landing on the zero itself splits the jump in two; step over it too
        let across = kmin > p && kmin < q && is_pi(kmin - 1, kmin + 1);
        let found = across || (p..q).any(|k| is_pi(k, k + 1));
        if found {
            out.push(PhaseLapse {
                left_peak: e[p],
                right_peak: e[q],
                zero_energy: e[kmin],
                min_abs_t: t[kmin].norm(),
                jump: -PI,
            });
        }
    }
    out
}
