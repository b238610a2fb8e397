//! JSON configuration files and ρ list parsing.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use nonstoch_core::nset::NSet;
use nonstoch_core::privacy::{PolicyError, StripPolicy};
use nonstoch_core::uvar::{FiniteWorld, Hyp};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON in {path}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("invalid rho specification {0:?}: {1}")]
    Rho(String, &'static str),
    #[error("rho list is empty")]
    EmptyRho,
    #[error("test spec: {0}")]
    TestSpec(&'static str),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

/// `{"box": [[lo,hi],...], "protected_index": i, "boundary": "...", "rho": r}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    #[serde(rename = "box")]
    pub domain: Vec<[f64; 2]>,
    /// 1-based.
    pub protected_index: usize,
    pub boundary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Json { path: path.to_path_buf(), source })
}

impl PolicyConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        read_json(path)
    }

    /// Build the policy with `rho`, falling back to the configured value.
    pub fn policy(&self, rho: Option<f64>) -> Result<StripPolicy, ConfigError> {
        let rho = rho.or(self.rho).ok_or(ConfigError::MissingField("rho"))?;
        Ok(StripPolicy::from_parts(&self.domain, self.protected_index, &self.boundary, rho)?)
    }
}

/// An ascending list of accuracy levels, given either as a comma-separated
/// list or as `lo:hi:steps[:log|lin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoList(pub Vec<f64>);

impl FromStr for RhoList {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why| ConfigError::Rho(s.to_string(), why);
        let values: Vec<f64> = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').map(str::trim).collect();
            if !(3..=4).contains(&parts.len()) {
                return Err(bad("expected lo:hi:steps[:log|lin]"));
            }
            let lo: f64 = parts[0].parse().map_err(|_| bad("lo is not a number"))?;
            let hi: f64 = parts[1].parse().map_err(|_| bad("hi is not a number"))?;
            let steps: usize = parts[2].parse().map_err(|_| bad("steps is not a positive integer"))?;
            let log = match parts.get(3).copied().unwrap_or("log") {
                "log" => true,
                "lin" => false,
                _ => return Err(bad("spacing must be log or lin")),
            };
            if steps == 0 {
                return Err(bad("steps must be at least 1"));
            }
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(bad("need 0 < lo <= hi"));
            }
            if steps == 1 {
                vec![lo]
            } else {
                let last = (steps - 1) as f64;
                (0..steps)
                    .map(|k| {
                        if k == 0 {
                            lo
                        } else if k == steps - 1 {
                            hi
                        } else if log {
                            (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / last).exp()
                        } else {
                            lo + (hi - lo) * k as f64 / last
                        }
                    })
                    .collect()
            }
        } else if s.trim().is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad("not a number")))
                .collect::<Result<_, _>>()?
        };
        RhoList::new(values).map_err(|e| match e {
            ConfigError::Rho(_, why) => bad(why),
            other => other,
        })
    }
}

impl RhoList {
    pub fn new(values: Vec<f64>) -> Result<Self, ConfigError> {
        if values.is_empty() {
            return Err(ConfigError::EmptyRho);
        }
        if values.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(ConfigError::Rho(format!("{values:?}"), "values must be positive and finite"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(ConfigError::Rho(format!("{values:?}"), "values must be ascending"));
        }
        Ok(RhoList(values))
    }
}

/// Input of the `test` subcommand: either two conditional output ranges or
/// a finite world.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSpec {
    #[serde(default)]
    pub null: Option<NSet>,
    #[serde(default)]
    pub alt: Option<NSet>,
    #[serde(default)]
    pub world: Option<FiniteWorld>,
    #[serde(default)]
    pub tie_rule: Option<Hyp>,
    #[serde(default)]
    pub enumeration_cap: Option<usize>,
}

pub enum TestInput {
    Sets { null: NSet, alt: NSet },
    World(FiniteWorld),
}

impl TestSpec {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        read_json(path)
    }

    pub fn input(self) -> Result<TestInput, ConfigError> {
        match (self.null, self.alt, self.world) {
            (Some(null), Some(alt), None) => Ok(TestInput::Sets { null, alt }),
            (None, None, Some(w)) => Ok(TestInput::World(w)),
            (None, None, None) => Err(ConfigError::TestSpec("expected `null` and `alt`, or `world`")),
            (_, _, Some(_)) => Err(ConfigError::TestSpec("`world` cannot be combined with `null`/`alt`")),
            _ => Err(ConfigError::TestSpec("`null` and `alt` must be given together")),
        }
    }
}
