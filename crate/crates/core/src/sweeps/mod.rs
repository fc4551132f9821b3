//! Parameter sweeps with branch continuation, EP search and encircling.

mod ep;
pub mod matching;

pub use ep::{
    analytic_ep_omega, encircle_ep, encircle_point, locate_ep, nelder_mead, CycleOptions, CycleReport, EpCandidate, EpOptions,
};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, cdot, C64};
use crate::models::{ModelSpec, Overrides};
use crate::spectra::{solve_modes_with, ModeSet, SpectraOptions};

/// The control parameter(s) a sweep or EP search moves.
///
/// `Complex(name)` sets one parameter to the complex point; `Pair(a, b)`
/// sets `a = Re p` and `b = Im p` as two real values.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamPlane {
    Complex(String),
    Pair(String, String),
}

impl ParamPlane {
    pub fn overrides(&self, p: C64) -> Overrides {
        match self {
            ParamPlane::Complex(name) => Overrides::new().with(name.clone(), p),
            ParamPlane::Pair(a, b) => Overrides::new().with(a.clone(), c(p.re, 0.0)).with(b.clone(), c(p.im, 0.0)),
        }
    }

    /// Current position of the base model in this plane.
    pub fn base_point(&self, model: &ModelSpec, base: &Overrides) -> Result<C64> {
        let get = |key: &str| -> Result<f64> {
            let (name, part) = match key.rsplit_once('.') {
                Some((n, "re")) => (n, 0),
                Some((n, "im")) => (n, 1),
                _ => (key, 0),
            };
            let v = model.param(name, base)?;
            Ok(if part == 0 { v.re } else { v.im })
        };
        match self {
            ParamPlane::Complex(name) => model.param(name, base),
            ParamPlane::Pair(a, b) => Ok(c(get(a)?, get(b)?)),
        }
    }
}

/// Samples of one control parameter over a model.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub param: String,
    pub samples: Vec<C64>,
    pub model: ModelSpec,
    pub base: Overrides,
}

impl SweepGrid {
    /// Real-valued grid; must hold at least two strictly monotone samples.
    pub fn real(model: ModelSpec, param: impl Into<String>, values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config("sweep grid needs at least 2 samples".into()));
        }
        let inc = values.windows(2).all(|w| w[0] < w[1]);
        let dec = values.windows(2).all(|w| w[0] > w[1]);
        if !(inc || dec) {
            return Err(Error::Config("real sweep grid must be strictly monotone".into()));
        }
        Ok(SweepGrid {
            param: param.into(),
            samples: values.iter().map(|&x| c(x, 0.0)).collect(),
            model,
            base: Overrides::new(),
        })
    }

    pub fn complex(model: ModelSpec, param: impl Into<String>, values: Vec<C64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config("sweep grid needs at least 2 samples".into()));
        }
        Ok(SweepGrid { param: param.into(), samples: values, model, base: Overrides::new() })
    }

    pub fn with_base(mut self, base: Overrides) -> Self {
        self.base = base;
        self
    }

    pub fn overrides_at(&self, k: usize) -> Overrides {
        let mut ov = self.base.clone();
        ov.set(self.param.clone(), self.samples[k]);
        ov
    }

    /// Mode set at sample `k`; build failures name the sample.
    pub fn modes_at(&self, k: usize, opts: &SpectraOptions) -> Result<ModeSet> {
        let m = self.model.build(&self.overrides_at(k)).map_err(|e| annotate(e, self, k))?;
        solve_modes_with(&m, opts).map_err(|e| annotate(e, self, k))
    }
}

fn annotate(e: Error, grid: &SweepGrid, k: usize) -> Error {
    let at = format!("at sample {k} ({} = {})", grid.param, grid.samples[k]);
    match e {
        Error::Config(m) => Error::Config(format!("{m} {at}")),
        Error::Domain(m) => Error::Domain(format!("{m} {at}")),
        Error::NonFinite(m) => Error::NonFinite(format!("{m} {at}")),
        Error::Dimension(m) => Error::Dimension(format!("{m} {at}")),
        other => other,
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub spectra: SpectraOptions,
    pub overlap_floor: f64,
    pub ambiguity_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { spectra: SpectraOptions::default(), overlap_floor: 0.5, ambiguity_tol: 1e-6 }
    }
}

/// One continuity-matched trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub label: usize,
    pub z: Vec<C64>,
    pub right: Vec<Vec<C64>>,
    pub left: Vec<Vec<C64>>,
    pub r_k: Vec<f64>,
    pub a_k: Vec<f64>,
    /// Overlap with the previous sample; `1` at the first sample.
    pub overlap: Vec<f64>,
}

impl Branch {
    pub fn widths(&self) -> Vec<f64> {
        self.z.iter().map(|z| -2.0 * z.im).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.z.iter().map(|z| z.re).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub params: Vec<C64>,
    pub branches: Vec<Branch>,
    /// Steps `k` (matching sample `k-1` to `k`) with a near-tie assignment.
    pub ambiguous: Vec<usize>,
    /// Steps where some matched overlap fell below the floor.
    pub low_overlap: Vec<usize>,
    /// `(sample, mode)` entries that could not be c-normalized.
    pub unnormalized: Vec<(usize, usize)>,
}

/// Computes every sample, then matches branches sequentially.
pub fn sweep(grid: &SweepGrid, opts: &SweepOptions) -> Result<SweepResult> {
    let sets = (0..grid.samples.len())
        .map(|k| grid.modes_at(k, &opts.spectra))
        .collect::<Result<Vec<_>>>()?;
    match_modesets(&grid.samples, &sets, opts)
}

/// Sign (c-normalized) or phase (otherwise) that makes `Re(l_prev . r) > 0`.
pub(crate) fn gauge_factor(l_prev: &[C64], r_next: &[C64], normalized: bool) -> C64 {
    let d = cdot(l_prev, r_next);
    if normalized {
        if d.re < 0.0 {
            c(-1.0, 0.0)
        } else {
            c(1.0, 0.0)
        }
    } else if d.norm() > 0.0 {
        d.conj() / d.norm()
    } else {
        c(1.0, 0.0)
    }
}

/// Continuity matching over precomputed mode sets.
pub fn match_modesets(params: &[C64], sets: &[ModeSet], opts: &SweepOptions) -> Result<SweepResult> {
    if sets.is_empty() || sets.len() != params.len() {
        return Err(Error::Dimension("one mode set per sample required".into()));
    }
    let n = sets[0].len();
    if sets.iter().any(|s| s.len() != n) {
        return Err(Error::Dimension("mode count changes along the sweep".into()));
    }
    let mut unnormalized = Vec::new();
    for (s, set) in sets.iter().enumerate() {
        for k in 0..n {
            if !set.normalized[k] {
                unnormalized.push((s, k));
            }
        }
    }
    let mut branches: Vec<Branch> = (0..n)
        .map(|k| {
            let m = &sets[0].modes[k];
            Branch {
                label: k,
                z: alloc::vec![m.value],
                right: alloc::vec![m.right.clone()],
                left: alloc::vec![m.left.clone()],
                r_k: alloc::vec![sets[0].r_k[k]],
                a_k: alloc::vec![sets[0].a_k[k]],
                overlap: alloc::vec![1.0],
            }
        })
        .collect();
    let mut ambiguous = Vec::new();
    let mut low_overlap = Vec::new();
    for (s, set) in sets.iter().enumerate().skip(1) {
        let lp: Vec<Vec<C64>> = branches.iter().map(|b| b.left[s - 1].clone()).collect();
        let rp: Vec<Vec<C64>> = branches.iter().map(|b| b.right[s - 1].clone()).collect();
        let ln: Vec<Vec<C64>> = set.modes.iter().map(|m| m.left.clone()).collect();
        let rn: Vec<Vec<C64>> = set.modes.iter().map(|m| m.right.clone()).collect();
        let o = matching::overlap_matrix(&lp, &rp, &ln, &rn);
        let assign = matching::assign(&o, opts.overlap_floor);
        if matching::is_ambiguous(&o, &assign, opts.ambiguity_tol) {
            ambiguous.push(s);
        }
        if assign.iter().enumerate().any(|(i, &j)| o[i][j] < opts.overlap_floor) {
            low_overlap.push(s);
        }
        for (i, b) in branches.iter_mut().enumerate() {
            let j = assign[i];
            let m = &set.modes[j];
            let g = gauge_factor(&lp[i], &m.right, set.normalized[j]);
            b.z.push(m.value);
            b.right.push(m.right.iter().map(|x| x * g).collect());
            b.left.push(m.left.iter().map(|x| x / g).collect());
            b.r_k.push(set.r_k[j]);
            b.a_k.push(set.a_k[j]);
            b.overlap.push(o[i][j]);
        }
    }
    Ok(SweepResult { params: params.to_vec(), branches, ambiguous, low_overlap, unnormalized })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    /// Energies stay apart (`|Re dz| >= |Im dz|` at the minimum).
    EnergyRepulsion,
    /// Energies meet while the widths split.
    WidthBifurcation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AvoidedCrossing {
    pub pair: (usize, usize),
    pub index: usize,
    pub param: C64,
    pub gap: f64,
    pub kind: CrossingKind,
}

/// Local minima of `|z_i - z_j|` below `threshold`, over every pair.
pub fn detect_avoided_crossings(result: &SweepResult, threshold: f64) -> Vec<AvoidedCrossing> {
    let bs = &result.branches;
    let mut out = Vec::new();
    for i in 0..bs.len() {
        for j in (i + 1)..bs.len() {
            let gaps: Vec<f64> = bs[i].z.iter().zip(&bs[j].z).map(|(a, b)| (a - b).norm()).collect();
            let n = gaps.len();
            for k in 0..n {
                let left_ok = k == 0 || gaps[k] < gaps[k - 1];
                let right_ok = k + 1 == n || gaps[k] <= gaps[k + 1];
                // endpoints only count as minima when the gap is still falling
                let interior = k > 0 && k + 1 < n;
                if left_ok && right_ok && interior && gaps[k] < threshold {
                    let dz = bs[i].z[k] - bs[j].z[k];
                    let kind = if dz.re.abs() >= dz.im.abs() {
                        CrossingKind::EnergyRepulsion
                    } else {
                        CrossingKind::WidthBifurcation
                    };
                    out.push(AvoidedCrossing { pair: (i, j), index: k, param: result.params[k], gap: gaps[k], kind });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ToyChainSpec, TwoLevelSpec};

    fn two_level(w: f64) -> ModelSpec {
        ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, 0.0), eps2: c(0.0, 0.0), omega: c(w, 0.0) })
    }

    #[test]
    fn uncoupled_branches_are_straight() {
        let g = SweepGrid::real(two_level(0.0), "eps1", &linspace(-1.0, 1.0, 41)).unwrap();
        let r = sweep(&g, &SweepOptions::default()).unwrap();
        // the moving level keeps its label across the crossing
        let moving = r.branches.iter().find(|b| (b.z[0].re + 1.0).abs() < 1e-12).unwrap();
        for (k, z) in moving.z.iter().enumerate() {
            assert!((z - r.params[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn avoided_crossing_gap_two_omega() {
        let g = SweepGrid::real(two_level(0.1), "eps1", &linspace(-1.0, 1.0, 201)).unwrap();
        let r = sweep(&g, &SweepOptions::default()).unwrap();
        let x = detect_avoided_crossings(&r, 1.0);
        assert_eq!(x.len(), 1);
        assert!((x[0].gap - 0.2).abs() < 1e-12);
        assert!(x[0].param.re.abs() < 1e-12);
        assert_eq!(x[0].kind, CrossingKind::EnergyRepulsion);
        // branches do not cross: lower stays lower
        let lo = &r.branches[0];
        let hi = &r.branches[1];
        assert!(lo.z.iter().zip(&hi.z).all(|(a, b)| a.re < b.re));
    }

    #[test]
    fn width_bifurcation_type() {
        let m = ModelSpec::TwoLevel(TwoLevelSpec { eps1: c(0.0, -0.5), eps2: c(0.0, -0.05), omega: c(0.1, 0.0) });
        let g = SweepGrid::real(m, "eps1.re", &linspace(-1.0, 1.0, 201)).unwrap();
        let r = sweep(&g, &SweepOptions::default()).unwrap();
        let x = detect_avoided_crossings(&r, 2.0);
        assert_eq!(x.len(), 1);
        assert_eq!(x[0].kind, CrossingKind::WidthBifurcation);
    }

    #[test]
    fn single_branch_has_no_crossings() {
        let r = SweepResult {
            params: alloc::vec![c(0.0, 0.0); 3],
            branches: alloc::vec![Branch {
                label: 0,
                z: alloc::vec![c(0.0, 0.0); 3],
                right: alloc::vec![],
                left: alloc::vec![],
                r_k: alloc::vec![],
                a_k: alloc::vec![],
                overlap: alloc::vec![],
            }],
            ambiguous: alloc::vec![],
            low_overlap: alloc::vec![],
            unnormalized: alloc::vec![],
        };
        assert!(detect_avoided_crossings(&r, 1.0).is_empty());
    }

    #[test]
    fn toy_chain_width_sum_rule() {
        let spec = ToyChainSpec::equally_spaced(6, 1.0, 0.0);
        let vn = spec.v_norm_sqr();
        let g = SweepGrid::real(ModelSpec::ToyChain(spec), "alpha", &linspace(0.0, 5.0, 60)).unwrap();
        let r = sweep(&g, &SweepOptions::default()).unwrap();
        for k in 0..r.params.len() {
            let s: f64 = r.branches.iter().map(|b| -2.0 * b.z[k].im).sum();
            assert!((s - r.params[k].re * vn).abs() < 1e-10 * (1.0 + s.abs()));
        }
    }
}
