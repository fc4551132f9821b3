//! Model Hamiltonians built from declarative specs.
//!
//! Every family exposes a flat list of named complex parameters. Overrides
//! address them by plain name (full complex value) or by `name.re` /
//! `name.im`; indexed parameters use `h0[3]`, `gamma0[1,0]` and so on.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{c, Matrix, C64};
use crate::quadrature;

/// Two coupled complex levels `[[eps1, omega], [omega, eps2]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevelSpec {
    pub eps1: C64,
    pub eps2: C64,
    pub omega: C64,
}

/// `diag(h0) - (i/2) alpha v v^T`: N states coupled to one channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ToyChainSpec {
    pub h0_diag: Vec<f64>,
    pub v: Vec<C64>,
    pub alpha: f64,
}

impl ToyChainSpec {
    /// `n` equally spaced levels on `[-half_width, half_width]`, unit couplings.
    pub fn equally_spaced(n: usize, half_width: f64, alpha: f64) -> Self {
        let h0_diag = (0..n)
            .map(|k| {
                if n == 1 {
                    0.0
                } else {
                    -half_width + 2.0 * half_width * k as f64 / (n - 1) as f64
                }
            })
            .collect();
        ToyChainSpec { h0_diag, v: alloc::vec![c(1.0, 0.0); n], alpha }
    }

    pub fn n(&self) -> usize {
        self.h0_diag.len()
    }

    /// `||v||^2`, the total width at coupling `alpha = 1`.
    pub fn v_norm_sqr(&self) -> f64 {
        self.v.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Basis states coupled to `C` channels with box-shaped energy windows.
#[derive(Clone, Debug, PartialEq)]
pub struct BandModelSpec {
    pub e_b: Vec<f64>,
    /// `gamma0[k][c]`, one row per state.
    pub gamma0: Vec<Vec<f64>>,
    pub bands: Vec<(f64, f64)>,
    pub energy: f64,
}

impl BandModelSpec {
    pub fn n(&self) -> usize {
        self.e_b.len()
    }

    pub fn channels(&self) -> usize {
        self.bands.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Config("band model needs at least one state".into()));
        }
        if self.gamma0.len() != n {
            return Err(Error::Config(format!(
                "gamma0 has {} rows for {} states",
                self.gamma0.len(),
                n
            )));
        }
        for (k, row) in self.gamma0.iter().enumerate() {
            if row.len() != self.channels() {
                return Err(Error::Config(format!(
                    "gamma0 row {k} has {} entries for {} channels",
                    row.len(),
                    self.channels()
                )));
            }
            if row.iter().any(|g| !g.is_finite()) {
                return Err(Error::NonFinite(format!("gamma0 row {k}")));
            }
        }
        for (ch, &(lo, hi)) in self.bands.iter().enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Config(format!("band {ch} is not an interval: [{lo}, {hi}]")));
            }
        }
        if !self.energy.is_finite() || self.e_b.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("band model energies".into()));
        }
        Ok(())
    }
}

/// Balanced gain/loss pair `[[e + i gamma/2, omega], [omega, e - i gamma/2]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PtSpec {
    pub e: f64,
    pub gamma: f64,
    pub omega: f64,
}

/// A two-level pair plus a third state coupled directly to both levels.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeLevelSpec {
    pub two_level: TwoLevelSpec,
    pub eps3: C64,
    pub w13: C64,
    pub w23: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    TwoLevel(TwoLevelSpec),
    ToyChain(ToyChainSpec),
    Band(BandModelSpec),
    Pt(PtSpec),
    ThreeLevel(ThreeLevelSpec),
}

/// Ordered list of parameter overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides(pub Vec<(String, C64)>);

impl Overrides {
    pub fn new() -> Self {
        Overrides(Vec::new())
    }

    pub fn set(&mut self, key: impl Into<String>, value: C64) -> &mut Self {
        self.0.push((key.into(), value));
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: C64) -> Self {
        self.set(key, value);
        self
    }

    pub fn extend(&mut self, other: &Overrides) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn re(x: f64) -> C64 {
    c(x, 0.0)
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::TwoLevel(_) => "two_level",
            ModelSpec::ToyChain(_) => "toy_chain",
            ModelSpec::Band(_) => "band",
            ModelSpec::Pt(_) => "pt",
            ModelSpec::ThreeLevel(_) => "three_level",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::TwoLevel(_) | ModelSpec::Pt(_) => 2,
            ModelSpec::ThreeLevel(_) => 3,
            ModelSpec::ToyChain(t) => t.n(),
            ModelSpec::Band(b) => b.n(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |zs: &[C64]| zs.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        match self {
            ModelSpec::TwoLevel(s) => {
                if !finite(&[s.eps1, s.eps2, s.omega]) {
                    return Err(Error::NonFinite("two-level parameters".into()));
                }
            }
            ModelSpec::ThreeLevel(s) => {
                let t = &s.two_level;
                if !finite(&[t.eps1, t.eps2, t.omega, s.eps3, s.w13, s.w23]) {
                    return Err(Error::NonFinite("three-level parameters".into()));
                }
            }
            ModelSpec::Pt(s) => {
                if !(s.e.is_finite() && s.gamma.is_finite() && s.omega.is_finite()) {
                    return Err(Error::NonFinite("PT parameters".into()));
                }
                if s.gamma < 0.0 {
                    return Err(Error::Config(format!("PT gamma must be >= 0, got {}", s.gamma)));
                }
            }
            ModelSpec::ToyChain(s) => {
                if s.n() < 2 {
                    return Err(Error::Config(format!("toy chain needs n >= 2, got {}", s.n())));
                }
                if s.v.len() != s.n() {
                    return Err(Error::Config(format!(
                        "toy chain v has {} entries for {} states",
                        s.v.len(),
                        s.n()
                    )));
                }
                if !(s.alpha >= 0.0) || !s.alpha.is_finite() {
                    return Err(Error::Config(format!("toy chain alpha must be >= 0, got {}", s.alpha)));
                }
                if s.h0_diag.iter().any(|x| !x.is_finite()) || !finite(&s.v) {
                    return Err(Error::NonFinite("toy chain parameters".into()));
                }
            }
            ModelSpec::Band(b) => b.validate()?,
        }
        Ok(())
    }

    /// Names and base values of every free parameter, in assembly order.
    pub fn params(&self) -> Vec<(String, C64)> {
        let mut out = Vec::new();
        match self {
            ModelSpec::TwoLevel(s) => {
                out.push(("eps1".to_string(), s.eps1));
                out.push(("eps2".to_string(), s.eps2));
                out.push(("omega".to_string(), s.omega));
            }
            ModelSpec::ThreeLevel(s) => {
                out.push(("eps1".to_string(), s.two_level.eps1));
                out.push(("eps2".to_string(), s.two_level.eps2));
                out.push(("omega".to_string(), s.two_level.omega));
                out.push(("eps3".to_string(), s.eps3));
                out.push(("w13".to_string(), s.w13));
                out.push(("w23".to_string(), s.w23));
            }
            ModelSpec::Pt(s) => {
                out.push(("e".to_string(), re(s.e)));
                out.push(("gamma".to_string(), re(s.gamma)));
                out.push(("omega".to_string(), re(s.omega)));
            }
            ModelSpec::ToyChain(s) => {
                out.push(("alpha".to_string(), re(s.alpha)));
                for (i, &h) in s.h0_diag.iter().enumerate() {
                    out.push((format!("h0[{i}]"), re(h)));
                }
                for (i, &v) in s.v.iter().enumerate() {
                    out.push((format!("v[{i}]"), v));
                }
            }
            ModelSpec::Band(b) => {
                out.push(("energy".to_string(), re(b.energy)));
                for (i, &e) in b.e_b.iter().enumerate() {
                    out.push((format!("e_b[{i}]"), re(e)));
                }
                for (i, row) in b.gamma0.iter().enumerate() {
                    for (ch, &g) in row.iter().enumerate() {
                        out.push((format!("gamma0[{i},{ch}]"), re(g)));
                    }
                }
                for (ch, &(lo, _)) in b.bands.iter().enumerate() {
                    out.push((format!("band_lo[{ch}]"), re(lo)));
                }
                for (ch, &(_, hi)) in b.bands.iter().enumerate() {
                    out.push((format!("band_hi[{ch}]"), re(hi)));
                }
            }
        }
        out
    }

    /// Band models only accept real parameter values; the other families
    /// continue real parameters analytically into the complex plane.
    fn real_only(&self) -> bool {
        matches!(self, ModelSpec::Band(_))
    }

    /// Base parameter values with `overrides` applied.
    pub fn resolve(&self, overrides: &Overrides) -> Result<Vec<C64>> {
        let params = self.params();
        let mut vals: Vec<C64> = params.iter().map(|p| p.1).collect();
        for (key, value) in &overrides.0 {
            let (name, part) = match key.rsplit_once('.') {
                Some((n, "re")) => (n, Some(false)),
                Some((n, "im")) => (n, Some(true)),
                _ => (key.as_str(), None),
            };
            let idx = params.iter().position(|p| p.0 == name).ok_or_else(|| {
                Error::Config(format!("unknown parameter `{key}` for {} model", self.kind()))
            })?;
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonFinite(format!("override `{key}`")));
            }
            match part {
                None => vals[idx] = *value,
                Some(im) => {
                    if value.im != 0.0 {
                        return Err(Error::Config(format!("`{key}` takes a real value")));
                    }
                    if im {
                        vals[idx].im = value.re;
                    } else {
                        vals[idx].re = value.re;
                    }
                }
            }
            if self.real_only() && vals[idx].im != 0.0 {
                return Err(Error::Config(format!("band model parameter `{name}` must be real")));
            }
        }
        Ok(vals)
    }

    /// Look up one resolved parameter by plain name.
    pub fn param(&self, name: &str, overrides: &Overrides) -> Result<C64> {
        let idx = self
            .params()
            .iter()
            .position(|p| p.0 == name)
            .ok_or_else(|| Error::Config(format!("unknown parameter `{name}` for {} model", self.kind())))?;
        Ok(self.resolve(overrides)?[idx])
    }

    /// Assemble the model matrix.
    pub fn build(&self, overrides: &Overrides) -> Result<Matrix> {
        self.validate()?;
        let v = self.resolve(overrides)?;
        let half_i = c(0.0, 0.5);
        let m = match self {
            ModelSpec::TwoLevel(_) => Matrix::from_rows(&[alloc::vec![v[0], v[2]], alloc::vec![v[2], v[1]]])?,
            ModelSpec::ThreeLevel(_) => Matrix::from_rows(&[
                alloc::vec![v[0], v[2], v[4]],
                alloc::vec![v[2], v[1], v[5]],
                alloc::vec![v[4], v[5], v[3]],
            ])?,
            ModelSpec::Pt(_) => {
                let (e, g, w) = (v[0], v[1], v[2]);
                Matrix::from_rows(&[alloc::vec![e + half_i * g, w], alloc::vec![w, e - half_i * g]])?
            }
            ModelSpec::ToyChain(s) => {
                let n = s.n();
                let alpha = v[0];
                let h0 = &v[1..1 + n];
                let vv = &v[1 + n..1 + 2 * n];
                Matrix::from_fn(n, |i, j| {
                    let d = if i == j { h0[i] } else { C64::new(0.0, 0.0) };
                    d - half_i * alpha * vv[i] * vv[j]
                })?
            }
            ModelSpec::Band(b) => {
                let resolved = band_from_values(b, &v);
                resolved.validate()?;
                return build_heff_band(&resolved);
            }
        };
        m.certify_symmetric()
    }

    /// The band spec with overrides applied.
    pub fn resolved_band(&self, overrides: &Overrides) -> Result<BandModelSpec> {
        match self {
            ModelSpec::Band(b) => Ok(band_from_values(b, &self.resolve(overrides)?)),
            other => Err(Error::Contract(format!("{} model is not a band model", other.kind()))),
        }
    }

    /// Channel vertex `gamma[k][c]` consistent with the anti-Hermitian part
    /// `-(i/2) gamma gamma^T`, for the families that have one.
    pub fn channel_vertex(&self, overrides: &Overrides) -> Result<Vec<Vec<C64>>> {
        let v = self.resolve(overrides)?;
        match self {
            ModelSpec::ToyChain(s) => {
                let n = s.n();
                let root = v[0].sqrt();
                Ok((0..n).map(|k| alloc::vec![root * v[1 + n + k]]).collect())
            }
            ModelSpec::Band(b) => {
                let resolved = band_from_values(b, &v);
                Ok(resolved
                    .gamma0
                    .iter()
                    .map(|row| row.iter().map(|&g| re(g)).collect())
                    .collect())
            }
            _ => Err(Error::Contract(format!("{} model has no channel vertex", self.kind()))),
        }
    }
}

fn band_from_values(b: &BandModelSpec, v: &[C64]) -> BandModelSpec {
    let n = b.n();
    let cc = b.channels();
    let mut it = v.iter().map(|z| z.re);
    let energy = it.next().unwrap_or(b.energy);
    let e_b: Vec<f64> = (0..n).map(|_| it.next().unwrap_or(0.0)).collect();
    let gamma0: Vec<Vec<f64>> = (0..n).map(|_| (0..cc).map(|_| it.next().unwrap_or(0.0)).collect()).collect();
    let lo: Vec<f64> = (0..cc).map(|_| it.next().unwrap_or(0.0)).collect();
    let hi: Vec<f64> = (0..cc).map(|_| it.next().unwrap_or(0.0)).collect();
    BandModelSpec { e_b, gamma0, bands: lo.into_iter().zip(hi).collect(), energy }
}

/// Box-profile principal-value shift between states `i` and `j`.
pub fn pv_self_energy(spec: &BandModelSpec, i: usize, j: usize) -> Result<f64> {
    let n = spec.n();
    if i >= n || j >= n {
        return Err(Error::Dimension(format!("state index ({i}, {j}) out of range for n = {n}")));
    }
    let e = spec.energy;
    let mut sum = 0.0;
    for (ch, &(lo, hi)) in spec.bands.iter().enumerate() {
        let g = spec.gamma0[i][ch] * spec.gamma0[j][ch];
        if g == 0.0 {
            continue;
        }
        if !(lo < e && e < hi) {
            return Err(Error::Domain(format!(
                "energy {e} outside band {ch} ({lo}, {hi}); discrete-state shift not supported"
            )));
        }
        sum += g * ((e - lo) / (hi - e)).ln();
    }
    Ok(sum / (2.0 * PI))
}

/// `(1/2pi) PV int_lo^hi profile(x) / (energy - x) dx` by adaptive quadrature.
pub fn pv_shift_quadrature(profile: impl Fn(f64) -> f64, lo: f64, hi: f64, energy: f64) -> Result<f64> {
    Ok(quadrature::principal_value(profile, lo, hi, energy, 1e-9)? / (2.0 * PI))
}

/// Quadrature counterpart of [`pv_self_energy`] for the box profile.
pub fn pv_self_energy_quadrature(spec: &BandModelSpec, i: usize, j: usize) -> Result<f64> {
    let mut sum = 0.0;
    for (ch, &(lo, hi)) in spec.bands.iter().enumerate() {
        let g = spec.gamma0[i][ch] * spec.gamma0[j][ch];
        if g == 0.0 {
            continue;
        }
        sum += pv_shift_quadrature(|_| g, lo, hi, spec.energy)?;
    }
    Ok(sum)
}

/// Piecewise-linear coupling profile, zero outside the tabulated range.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedProfile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Config("profile needs >= 2 matching samples".into()));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("profile abscissae must increase".into()));
        }
        Ok(TabulatedProfile { x, y })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t < self.x[0] || t > self.x[n - 1] {
            return 0.0;
        }
        let k = self.x.partition_point(|&xi| xi <= t).clamp(1, n - 1);
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        let w = (t - x0) / (x1 - x0);
        self.y[k - 1] * (1.0 - w) + self.y[k] * w
    }
}

/// Entries `-(1/2) sum_c gamma_ic gamma_jc`; the imaginary part of `H_eff`.
pub fn residuum_matrix(spec: &BandModelSpec) -> Result<Matrix> {
    let n = spec.n();
    Matrix::from_fn(n, |i, j| {
        let s: f64 = spec.gamma0[i].iter().zip(&spec.gamma0[j]).map(|(a, b)| a * b).sum();
        re(-0.5 * s)
    })?
    .certify_symmetric()
}

/// `diag(e_b) + shift + i residuum` at `spec.energy`.
pub fn build_heff_band(spec: &BandModelSpec) -> Result<Matrix> {
    assemble_band(spec, true)
}

/// Band model without the principal-value shifts (wide-band limit).
pub fn build_heff_wide_band(spec: &BandModelSpec) -> Result<Matrix> {
    assemble_band(spec, false)
}

fn assemble_band(spec: &BandModelSpec, shifts: bool) -> Result<Matrix> {
    spec.validate()?;
    let n = spec.n();
    let res = residuum_matrix(spec)?;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut real = if i == j { spec.e_b[i] } else { 0.0 };
            if shifts {
                real += pv_self_energy(spec, i, j)?;
            }
            data.push(c(real, res[(i, j)].re));
        }
    }
    Matrix::new(n, n, data)?.certify_symmetric()
}

/// `sqrt(b^2 - (k/tau)^2)`, imaginary in the frozen phase.
pub fn spin_swap_frequency(b: f64, k_aniso: f64, tau_se: f64) -> C64 {
    let d = b * b - (k_aniso / tau_se).powi(2);
    if d >= 0.0 {
        re(d.sqrt())
    } else {
        c(0.0, (-d).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig;

    fn one_band(gamma: &[f64], lo: f64, hi: f64, e: f64) -> BandModelSpec {
        BandModelSpec {
            e_b: alloc::vec![0.0; gamma.len()],
            gamma0: gamma.iter().map(|&g| alloc::vec![g]).collect(),
            bands: alloc::vec![(lo, hi)],
            energy: e,
        }
    }

    #[test]
    fn two_level_diagonal() {
        let m = ModelSpec::TwoLevel(TwoLevelSpec { eps1: re(1.0), eps2: re(2.0), omega: re(0.0) })
            .build(&Overrides::new())
            .unwrap();
        assert!(m.is_symmetric());
        assert_eq!(m[(0, 0)], re(1.0));
        assert_eq!(m[(1, 1)], re(2.0));
        assert_eq!(m[(0, 1)], re(0.0));
    }

    #[test]
    fn toy_chain_sign_convention() {
        let spec = ModelSpec::ToyChain(ToyChainSpec {
            h0_diag: alloc::vec![0.0, 0.0],
            v: alloc::vec![re(1.0), re(1.0)],
            alpha: 1.0,
        });
        let m = spec.build(&Overrides::new()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - c(0.0, -0.5)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pt_eigenvalues_real_below_threshold() {
        let m = ModelSpec::Pt(PtSpec { e: 0.0, gamma: 1.0, omega: 1.0 }).build(&Overrides::new()).unwrap();
        let ev = eig(&m).unwrap();
        let expect = 0.75_f64.sqrt();
        assert!((ev[0].value - re(-expect)).norm() < 1e-12);
        assert!((ev[1].value - re(expect)).norm() < 1e-12);
    }

    #[test]
    fn overrides_by_name_and_part() {
        let spec = ModelSpec::TwoLevel(TwoLevelSpec { eps1: re(0.0), eps2: re(0.0), omega: re(1.0) });
        let ov = Overrides::new().with("eps1.im", re(0.5)).with("omega", c(2.0, 1.0));
        let m = spec.build(&ov).unwrap();
        assert_eq!(m[(0, 0)], c(0.0, 0.5));
        assert_eq!(m[(0, 1)], c(2.0, 1.0));
        let bad = Overrides::new().with("nope", re(1.0));
        assert!(matches!(spec.build(&bad), Err(Error::Config(_))));
        let toy = ModelSpec::ToyChain(ToyChainSpec::equally_spaced(3, 1.0, 0.5));
        let m = toy.build(&Overrides::new().with("h0[1]", re(0.25))).unwrap();
        assert!((m[(1, 1)] - c(0.25, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn band_rejects_complex_override() {
        let spec = ModelSpec::Band(one_band(&[1.0, 1.0], 0.0, 2.0, 1.0));
        assert!(matches!(spec.build(&Overrides::new().with("energy", c(1.0, 0.1))), Err(Error::Config(_))));
        assert!(spec.build(&Overrides::new().with("energy.re", re(1.2))).is_ok());
    }

    #[test]
    fn pv_closed_form_examples() {
        let b = one_band(&[1.0, 1.0], 0.0, 2.0, 1.0);
        assert!(pv_self_energy(&b, 0, 1).unwrap().abs() < 1e-15);
        let b = one_band(&[1.0, 1.0], 0.0, 2.0, 1.5);
        let v = pv_self_energy(&b, 0, 1).unwrap();
        assert!((v - 3.0_f64.ln() / (2.0 * PI)).abs() < 1e-15);
        assert!((v - 0.17484).abs() < 1e-5);
        let q = pv_self_energy_quadrature(&b, 0, 1).unwrap();
        assert!((q - v).abs() < 1e-9);
        let b = one_band(&[0.0, 1.0], 0.0, 2.0, 5.0);
        assert_eq!(pv_self_energy(&b, 0, 1).unwrap(), 0.0);
        assert!(matches!(pv_self_energy(&b, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn tabulated_profile_matches_box() {
        let p = TabulatedProfile::new(alloc::vec![0.0, 1.0, 2.0], alloc::vec![1.0, 1.0, 1.0]).unwrap();
        let v = pv_shift_quadrature(|x| p.eval(x), 0.0, 2.0, 1.5).unwrap();
        assert!((v - 3.0_f64.ln() / (2.0 * PI)).abs() < 1e-9);
    }

    #[test]
    fn residuum_examples() {
        let r = residuum_matrix(&one_band(&[1.0, 2.0], 0.0, 1.0, 0.5)).unwrap();
        assert_eq!(r[(0, 0)], re(-0.5));
        assert_eq!(r[(0, 1)], re(-1.0));
        assert_eq!(r[(1, 1)], re(-2.0));
        let two = BandModelSpec {
            e_b: alloc::vec![0.0, 0.0],
            gamma0: alloc::vec![alloc::vec![1.0, 0.0], alloc::vec![0.0, 1.0]],
            bands: alloc::vec![(0.0, 1.0), (0.0, 1.0)],
            energy: 0.5,
        };
        let r = residuum_matrix(&two).unwrap();
        assert!(r.max_abs_diff(&Matrix::identity(2).scaled(re(-0.5))) < 1e-15);
    }

    #[test]
    fn single_state_band() {
        let g = 0.7;
        let mut b = one_band(&[g], -1.0, 3.0, 0.4);
        b.e_b[0] = 0.2;
        let m = build_heff_band(&b).unwrap();
        let shift = g * g * ((0.4_f64 + 1.0) / (3.0 - 0.4)).ln() / (2.0 * PI);
        assert!((m[(0, 0)] - c(0.2 + shift, -0.5 * g * g)).norm() < 1e-14);
        let z = eig(&m).unwrap()[0].value;
        assert!((z - m[(0, 0)]).norm() < 1e-14);
    }

    #[test]
    fn spin_swap_examples() {
        assert_eq!(spin_swap_frequency(1.0, 0.0, 3.0), re(1.0));
        let w = spin_swap_frequency(0.3, 1.0, 2.0);
        assert!(w.re == 0.0 && (w.im - 0.4).abs() < 1e-12);
        assert_eq!(spin_swap_frequency(0.5, 1.0, 2.0), re(0.0));
    }
}
