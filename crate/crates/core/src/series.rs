//! Sampled scalar functions with provenance.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `values[k]` sampled at `x[k]`, with labels for output and a list of
/// `key = value` provenance entries (model, parameters, tolerances).
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub units: String,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: Vec<(String, String)>,
}

impl Series {
    pub fn new(name: &str, x_label: &str, units: &str, x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(Error::Dimension(alloc::format!(
                "series `{name}`: {} abscissae for {} values",
                x.len(),
                values.len()
            )));
        }
        Ok(Series { name: name.into(), x_label: x_label.into(), units: units.into(), x, values, meta: Vec::new() })
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}
