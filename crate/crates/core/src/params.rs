//! Runtime parameters and the plain-text params file.
//!
//! The file is `key = value` lines; `#` starts a comment. Unset keys keep
//! their defaults, unknown keys are rejected.

use crate::energy::EnergyParams;
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyParams;

/// All tunables in one place: energy weights, fuzzy sigmoid shapes, the
/// candidate-set size, and the ICM sweep cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub energy: EnergyParams,
    pub fuzzy: FuzzyParams,
    pub top_n: usize,
    pub max_sweeps: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            energy: EnergyParams::default(),
            fuzzy: FuzzyParams::default(),
            top_n: 3,
            max_sweeps: 100,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        self.fuzzy.validate()?;
        for (name, v) in [
            ("alpha", self.energy.alpha),
            ("beta", self.energy.beta),
            ("delta", self.energy.delta),
        ] {
            if !v.is_finite() {
                return Err(Error::BadParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.top_n == 0 {
            return Err(Error::BadParams("top_n must be >= 1".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::BadParams("max_sweeps must be >= 1".into()));
        }
        Ok(())
    }
}

/// Parses a params file, overlaying defaults.
pub fn parse_params(text: &str) -> Result<Params> {
    let mut params = Params::default();
    apply_params(text, &mut params, |_, _| {
        Err(Error::BadParams(String::new())) // replaced below with key name
    })?;
    params.validate()?;
    Ok(params)
}

/// Shared `key = value` reader. `extra` handles keys unknown to [`Params`]
/// (the experiment config builds on the same format); return `Err` from it
/// to reject a key.
pub(crate) fn apply_params<F>(text: &str, params: &mut Params, mut extra: F) -> Result<()>
where
    F: FnMut(&str, &str) -> Result<()>,
{
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::BadParams(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let parse_f64 = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| Error::BadParams(format!("{key}: not a number: {value:?}")))
        };
        let parse_usize = || -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| Error::BadParams(format!("{key}: not a positive integer: {value:?}")))
        };
        match key {
            "alpha" => params.energy.alpha = parse_f64()?,
            "beta" => params.energy.beta = parse_f64()?,
            "delta" => params.energy.delta = parse_f64()?,
            "alpha1" => params.fuzzy.alpha1 = parse_f64()?,
            "beta1" => params.fuzzy.beta1 = parse_f64()?,
            "alpha2" => params.fuzzy.alpha2 = parse_f64()?,
            "beta2" => params.fuzzy.beta2 = parse_f64()?,
            "top_n" => params.top_n = parse_usize()?,
            "max_sweeps" => params.max_sweeps = parse_usize()?,
            other => {
                extra(other, value)
                    .map_err(|_| Error::BadParams(format!("unknown key {other:?}")))?;
            }
        }
    }
    Ok(())
}
