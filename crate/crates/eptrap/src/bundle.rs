//! Scenario bundle directories.
//!
//! ```text
//! out/
//!   manifest.json     scenario name, resolved parameters, file list, reports
//!   assertions.json   one entry per scenario assertion
//!   <series>.csv      one file per series (plus .svg with --svg)
//! ```
//!
//! A manifest is also a valid input: `eptrap scenario --manifest out/manifest.json`
//! re-runs the same experiment.

use std::path::Path;

use eptrap_core::scenarios::Bundle;
use serde::{Deserialize, Serialize};

use crate::output::{write_atomic, write_series};
use crate::report;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: String,
    /// Every parameter, defaults included, in the scenario's order.
    pub params: Vec<(String, f64)>,
    #[serde(default)]
    pub series: Vec<String>,
    #[serde(default)]
    pub reports: Vec<(String, String)>,
    #[serde(default)]
    pub passed: bool,
    #[serde(default)]
    pub generator: String,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid manifest {}: {e}", path.display())))
    }
}

/// Writes the bundle; returns its manifest.
pub fn write_bundle(dir: &Path, b: &Bundle, svg: bool) -> Result<Manifest, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let series = write_series(dir, &b.series, svg)?;
    write_atomic(&dir.join("assertions.json"), report::pretty(&report::assertions(&b.assertions)).as_bytes())?;
    let m = Manifest {
        scenario: b.scenario.clone(),
        params: b.params.clone(),
        series,
        reports: b.reports.clone(),
        passed: b.passed(),
        generator: format!("eptrap {}", env!("CARGO_PKG_VERSION")),
    };
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    write_atomic(&dir.join("manifest.json"), text.as_bytes())?;
    Ok(m)
}
