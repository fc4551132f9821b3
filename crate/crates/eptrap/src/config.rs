//! JSON run configuration.
//!
//! A config has the sections `model`, `params`, `grid`, `ep`, `observables`
//! and `tolerances`; only `model` is required. Complex values are written
//! either as a plain number or as `[re, im]`.

use std::collections::BTreeMap;

use eptrap_core::linalg::{c, EigOptions, JordanOptions};
use eptrap_core::models::{BandModelSpec, PtSpec, ThreeLevelSpec, ToyChainSpec, TwoLevelSpec};
use eptrap_core::spectra::SpectraOptions;
use eptrap_core::sweeps::{linspace, CycleOptions, EpOptions, ParamPlane, SweepOptions};
use eptrap_core::{ModelSpec, Overrides, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Complex number that reads `1.5` or `[1.5, -0.2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub C64);

impl Serialize for Cx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            [self.0.re, self.0.im].serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Real(x) => Cx(c(x, 0.0)),
            Repr::Pair([re, im]) => Cx(c(re, im)),
        })
    }
}

impl From<f64> for Cx {
    fn from(x: f64) -> Self {
        Cx(c(x, 0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    TwoLevel {
        eps1: Cx,
        eps2: Cx,
        omega: Cx,
    },
    /// Either explicit `h0` and `v`, or `n` equally spaced levels on
    /// `[-half_width, half_width]` with unit couplings.
    ToyChain {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        half_width: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h0: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v: Option<Vec<Cx>>,
        alpha: f64,
    },
    Band {
        e_b: Vec<f64>,
        gamma0: Vec<Vec<f64>>,
        bands: Vec<[f64; 2]>,
        energy: f64,
    },
    Pt {
        e: f64,
        gamma: f64,
        omega: f64,
    },
    ThreeLevel {
        eps1: Cx,
        eps2: Cx,
        omega: Cx,
        eps3: Cx,
        w13: Cx,
        w23: Cx,
    },
}

impl ModelConfig {
    pub fn to_spec(&self) -> Result<ModelSpec, CliError> {
        let spec = match self {
            ModelConfig::TwoLevel { eps1, eps2, omega } => {
                ModelSpec::TwoLevel(TwoLevelSpec { eps1: eps1.0, eps2: eps2.0, omega: omega.0 })
            }
            ModelConfig::ToyChain { n, half_width, h0, v, alpha } => {
                let chain = match (h0, n) {
                    (Some(h0), None) => {
                        let v = match v {
                            Some(v) => v.iter().map(|z| z.0).collect(),
                            None => vec![c(1.0, 0.0); h0.len()],
                        };
                        ToyChainSpec { h0_diag: h0.clone(), v, alpha: *alpha }
                    }
                    (None, Some(n)) => {
                        let mut s = ToyChainSpec::equally_spaced(*n, half_width.unwrap_or(1.0), *alpha);
                        if let Some(v) = v {
                            s.v = v.iter().map(|z| z.0).collect();
                        }
                        s
                    }
                    _ => return Err(CliError::Config("toy_chain needs exactly one of `n` or `h0`".into())),
                };
                ModelSpec::ToyChain(chain)
            }
            ModelConfig::Band { e_b, gamma0, bands, energy } => ModelSpec::Band(BandModelSpec {
                e_b: e_b.clone(),
                gamma0: gamma0.clone(),
                bands: bands.iter().map(|b| (b[0], b[1])).collect(),
                energy: *energy,
            }),
            ModelConfig::Pt { e, gamma, omega } => ModelSpec::Pt(PtSpec { e: *e, gamma: *gamma, omega: *omega }),
            ModelConfig::ThreeLevel { eps1, eps2, omega, eps3, w13, w23 } => ModelSpec::ThreeLevel(ThreeLevelSpec {
                two_level: TwoLevelSpec { eps1: eps1.0, eps2: eps2.0, omega: omega.0 },
                eps3: eps3.0,
                w13: w13.0,
                w23: w23.0,
            }),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Real sample grid: explicit `values`, or `start`/`stop`/`samples`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl Range {
    pub fn points(&self, what: &str) -> Result<Vec<f64>, CliError> {
        match (&self.values, self.start, self.stop, self.samples) {
            (Some(v), None, None, None) => Ok(v.clone()),
            (None, Some(a), Some(b), Some(n)) if n >= 2 => Ok(linspace(a, b, n)),
            _ => Err(CliError::Config(format!(
                "{what}: give either `values` or `start`, `stop` and `samples` (>= 2)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub param: String,
    #[serde(flatten)]
    pub range: Range,
}

/// Search plane: a single complex parameter name, or two real ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaneConfig {
    Complex(String),
    Pair([String; 2]),
}

impl PlaneConfig {
    pub fn plane(&self) -> ParamPlane {
        match self {
            PlaneConfig::Complex(p) => ParamPlane::Complex(p.clone()),
            PlaneConfig::Pair([a, b]) => ParamPlane::Pair(a.clone(), b.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpConfig {
    pub plane: PlaneConfig,
    /// Starting point of the search; the base model's position if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess: Option<Cx>,
    /// Loop centre for `ep-cycle`; the located EP if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Cx>,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_loops")]
    pub loops: usize,
    #[serde(default)]
    pub clockwise: bool,
    /// Include the per-step eigenvalues in the cycle report.
    #[serde(default)]
    pub trajectory: bool,
}

fn default_radius() -> f64 {
    0.1
}
fn default_steps() -> usize {
    400
}
fn default_loops() -> usize {
    4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `|T_ab(E)|`.
    Transmission,
    /// Unwrapped `arg T_ab(E)`.
    Phase,
    /// `d arg det S / dE`.
    TimeDelay,
    /// Phase rigidity of the internal wavefunction.
    Rho,
    /// `k(t)` for a state prepared by the channel at `e_ref`.
    DecayRate,
    /// Population of the same state.
    Population,
    /// Mean width of the trapped branches over the grid.
    AverageRate,
    /// Gamma_0 / N over the grid.
    OrderParameter,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Transmission => "transmission",
            SeriesKind::Phase => "phase",
            SeriesKind::TimeDelay => "time_delay",
            SeriesKind::Rho => "rho",
            SeriesKind::DecayRate => "decay_rate",
            SeriesKind::Population => "population",
            SeriesKind::AverageRate => "average_rate",
            SeriesKind::OrderParameter => "order_parameter",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablesConfig {
    pub series: Vec<SeriesKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Range>,
    #[serde(default)]
    pub pair: [usize; 2],
    #[serde(default)]
    pub channel: usize,
    #[serde(default)]
    pub e_ref: f64,
    /// Initial state for the decay series; the channel vertex if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<Cx>>,
    /// Drop the principal-value shifts of band models.
    #[serde(default = "yes")]
    pub wide_band: bool,
}

fn yes() -> bool {
    true
}

/// Every tolerance the library exposes, with its default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub eig_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_qr_iters: Option<usize>,
    pub degeneracy_gap: f64,
    pub overlap_floor: f64,
    pub ambiguity_tol: f64,
    pub ep_gap_tol: f64,
    pub max_evals: usize,
    pub jordan_rank_tol: f64,
    pub jordan_defect_tol: f64,
    pub phase_tol: f64,
    pub lapse_tol: f64,
    pub jump_factor: f64,
    pub jump_floor: f64,
    pub min_r2: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let eig = EigOptions::default();
        let sp = SpectraOptions::default();
        let sw = SweepOptions::default();
        let ep = EpOptions::default();
        let jo = JordanOptions::default();
        let op = eptrap_core::observables::OrderParameterOptions::default();
        Tolerances {
            eig_tol: eig.eig_tol,
            max_qr_iters: eig.max_qr_iters,
            degeneracy_gap: sp.degeneracy_gap,
            overlap_floor: sw.overlap_floor,
            ambiguity_tol: sw.ambiguity_tol,
            ep_gap_tol: ep.ep_gap_tol,
            max_evals: ep.max_evals,
            jordan_rank_tol: jo.rank_tol,
            jordan_defect_tol: jo.defect_tol,
            phase_tol: CycleOptions::default().phase_tol,
            lapse_tol: 0.1,
            jump_factor: op.jump_factor,
            jump_floor: op.jump_floor,
            min_r2: op.min_r2,
        }
    }
}

impl Tolerances {
    pub fn spectra(&self) -> SpectraOptions {
        SpectraOptions {
            eig: EigOptions { eig_tol: self.eig_tol, max_qr_iters: self.max_qr_iters },
            degeneracy_gap: self.degeneracy_gap,
        }
    }

    pub fn sweep(&self) -> SweepOptions {
        SweepOptions { spectra: self.spectra(), overlap_floor: self.overlap_floor, ambiguity_tol: self.ambiguity_tol }
    }

    pub fn ep(&self) -> EpOptions {
        EpOptions {
            initial_step: None,
            max_evals: self.max_evals,
            ep_gap_tol: self.ep_gap_tol,
            spectra: self.spectra(),
            jordan: JordanOptions { rank_tol: self.jordan_rank_tol, defect_tol: self.jordan_defect_tol },
        }
    }

    pub fn order_parameter(&self) -> eptrap_core::observables::OrderParameterOptions {
        eptrap_core::observables::OrderParameterOptions {
            jump_factor: self.jump_factor,
            jump_floor: self.jump_floor,
            min_r2: self.min_r2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelConfig,
    /// Parameter overrides on top of the model, by name (`omega`, `h0[2]`, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Cx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ep: Option<EpConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<ObservablesConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn overrides(&self) -> Overrides {
        Overrides(self.params.iter().map(|(k, v)| (k.clone(), v.0)).collect())
    }

    pub fn grid(&self) -> Result<&GridConfig, CliError> {
        self.grid.as_ref().ok_or_else(|| CliError::Config("this command needs a `grid` section".into()))
    }

    pub fn ep(&self) -> Result<&EpConfig, CliError> {
        self.ep.as_ref().ok_or_else(|| CliError::Config("this command needs an `ep` section".into()))
    }

    pub fn observables(&self) -> Result<&ObservablesConfig, CliError> {
        self.observables
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs an `observables` section".into()))
    }
}
