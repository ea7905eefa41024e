//! Run configuration: defaults, a plain-text `key = value` file, and CLI
//! overrides, applied in that order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::legal::DEFAULT_NODE_BUDGET;
use crate::recurrence::{validate_spec, SpecError, ValidatedSpec, ZlrrSpec};
use crate::stats::DEFAULT_ENUMERATION_BUDGET;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub coeffs: Vec<u64>,
    pub init: Vec<BigUint>,
    pub seed: u64,
    /// `None` leaves the thread pool at its default size.
    pub workers: Option<usize>,
    pub enum_budget: u64,
    pub node_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            coeffs: vec![0, 1, 1],
            init: vec![1u32.into(), 2u32.into(), 3u32.into()],
            seed: 1,
            workers: None,
            enum_budget: DEFAULT_ENUMERATION_BUDGET,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

pub const CONFIG_KEYS: [&str; 6] = [
    "coeffs",
    "init",
    "seed",
    "workers",
    "enum_budget",
    "node_budget",
];

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "coeffs" => self.coeffs = parse_list(value).ok_or_else(bad)?,
            "init" => self.init = parse_list(value).ok_or_else(bad)?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "workers" => {
                self.workers = match value {
                    "" | "auto" => None,
                    v => Some(v.parse().ok().filter(|&w: &usize| w > 0).ok_or_else(bad)?),
                }
            }
            "enum_budget" => self.enum_budget = value.parse().map_err(|_| bad())?,
            "node_budget" => self.node_budget = value.parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        }
        Ok(())
    }

    /// Applies a configuration file. Blank lines and `#` comments are
    /// ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line: i + 1,
                    key: key.to_string(),
                });
            }
            self.set(key, value.trim())?;
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<ValidatedSpec, ConfigError> {
        Ok(validate_spec(ZlrrSpec::new(
            self.coeffs.clone(),
            self.init.clone(),
        ))?)
    }
}

/// Serialized form, readable back by [`RunConfig::apply_text`].
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coeffs = {}", join(&self.coeffs))?;
        writeln!(f, "init = {}", join(&self.init))?;
        writeln!(f, "seed = {}", self.seed)?;
        match self.workers {
            Some(w) => writeln!(f, "workers = {w}")?,
            None => writeln!(f, "workers = auto")?,
        }
        writeln!(f, "enum_budget = {}", self.enum_budget)?;
        writeln!(f, "node_budget = {}", self.node_budget)
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_list<T: FromStr>(text: &str) -> Option<Vec<T>> {
    text.split(',').map(|s| s.trim().parse().ok()).collect()
}
