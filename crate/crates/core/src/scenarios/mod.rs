//! Canned experiments with built-in assertions.
//!
//! Every scenario takes a flat list of numeric parameters (defaults from
//! [`scenario_defaults`], overridable by name) and returns a [`Bundle`] of
//! series, parameters and pass/fail assertions. Runs are deterministic.

mod lapse;
mod observer;
mod pt;
mod spin;
mod three;
mod trapping;

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::Series;

pub const SCENARIOS: [&str; 6] = ["trapping", "three-resonance", "phase-lapse", "spin-swap", "pt", "observer"];

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Assertion { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub scenario: String,
    pub params: Vec<(String, f64)>,
    pub series: Vec<Series>,
    pub assertions: Vec<Assertion>,
    /// Free-form `key = value` results (detected points, counts).
    pub reports: Vec<(String, String)>,
}

impl Bundle {
    fn new(scenario: &str, params: &Params) -> Self {
        Bundle {
            scenario: scenario.into(),
            params: params.0.clone(),
            series: Vec::new(),
            assertions: Vec::new(),
            reports: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn assert(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion::new(name, passed, detail));
    }

    pub fn report(&mut self, key: &str, value: impl ToString) {
        self.reports.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, s: Series) {
        let s = s.with_meta("scenario", self.scenario.clone());
        self.series.push(s);
    }
}

/// Resolved scenario parameters.
#[derive(Clone, Debug)]
pub(crate) struct Params(Vec<(String, f64)>);

impl Params {
    pub(crate) fn get(&self, key: &str) -> f64 {
        self.0.iter().find(|p| p.0 == key).map_or(f64::NAN, |p| p.1)
    }

    pub(crate) fn count(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.get(key);
        if !(v.fract() == 0.0 && v >= min as f64 && v < 1e7) {
            return Err(Error::Config(format!("`{key}` must be an integer >= {min}, got {v}")));
        }
        Ok(v as usize)
    }

    pub(crate) fn positive(&self, key: &str) -> Result<f64> {
        let v = self.get(key);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Config(format!("`{key}` must be positive, got {v}")));
        }
        Ok(v)
    }
}

fn owned(list: &[(&str, f64)]) -> Vec<(String, f64)> {
    list.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Default parameters of a scenario.
pub fn scenario_defaults(name: &str) -> Result<Vec<(String, f64)>> {
    Ok(match name {
        "trapping" => owned(trapping::DEFAULTS),
        "three-resonance" => owned(three::DEFAULTS),
        "phase-lapse" => owned(lapse::DEFAULTS),
        "spin-swap" => owned(spin::DEFAULTS),
        "pt" => owned(pt::DEFAULTS),
        "observer" => owned(observer::DEFAULTS),
        other => {
            return Err(Error::Config(format!(
                "unknown scenario `{other}` (known: {})",
                SCENARIOS.join(", ")
            )))
        }
    })
}

/// Runs `name` with `overrides` applied on top of its defaults.
pub fn run_scenario(name: &str, overrides: &[(String, f64)]) -> Result<Bundle> {
    let mut params = scenario_defaults(name)?;
    for (k, v) in overrides {
        match params.iter_mut().find(|p| &p.0 == k) {
            Some(p) => p.1 = *v,
            None => {
                let known: Vec<&str> = params.iter().map(|p| p.0.as_str()).collect();
                return Err(Error::Config(format!(
                    "unknown parameter `{k}` for scenario `{name}` (known: {})",
                    known.join(", ")
                )));
            }
        }
    }
    if let Some((k, v)) = params.iter().find(|p| !p.1.is_finite()) {
        return Err(Error::Config(format!("parameter `{k}` is not finite ({v})")));
    }
    let p = Params(params);
    let mut b = Bundle::new(name, &p);
    match name {
        "trapping" => trapping::run(&p, &mut b)?,
        "three-resonance" => three::run(&p, &mut b)?,
        "phase-lapse" => lapse::run(&p, &mut b)?,
        "spin-swap" => spin::run(&p, &mut b)?,
        "pt" => pt::run(&p, &mut b)?,
        "observer" => observer::run(&p, &mut b)?,
        _ => unreachable!("checked by scenario_defaults"),
    }
    Ok(b)
}

pub(crate) fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

pub(crate) fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass() {
        for name in SCENARIOS {
            let b = run_scenario(name, &[]).unwrap();
            assert!(b.passed(), "{name}: {:?}", b.assertions);
        }
    }

    #[test]
    fn unknown_names_are_config_errors() {
        assert!(matches!(run_scenario("nope", &[]), Err(Error::Config(_))));
        let bad = [("nope".to_string(), 1.0)];
        assert!(matches!(run_scenario("pt", &bad), Err(Error::Config(_))));
    }

    #[test]
    fn asymmetric_observer_is_detected() {
        let b = run_scenario("observer", &[("w23".to_string(), 0.15)]).unwrap();
        assert!(b.passed(), "{:?}", b.assertions);
    }
}
