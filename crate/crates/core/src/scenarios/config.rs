use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    AsymptoticPurification,
    FiniteTimePurification,
    PureToMixed,
    N3Shooting,
    Cone2d,
    Cone3d,
    ConeSteadyState,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 7] = [
        ScenarioName::AsymptoticPurification,
        ScenarioName::FiniteTimePurification,
        ScenarioName::PureToMixed,
        ScenarioName::N3Shooting,
        ScenarioName::Cone2d,
        ScenarioName::Cone3d,
        ScenarioName::ConeSteadyState,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::AsymptoticPurification => "asymptotic_purification",
            ScenarioName::FiniteTimePurification => "finite_time_purification",
            ScenarioName::PureToMixed => "pure_to_mixed",
            ScenarioName::N3Shooting => "n3_shooting",
            ScenarioName::Cone2d => "cone_2d",
            ScenarioName::Cone3d => "cone_3d",
            ScenarioName::ConeSteadyState => "cone_steady_state",
        }
    }

    /// Parameters with their default values; only these keys are accepted.
    pub fn default_parameters(&self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            ScenarioName::AsymptoticPurification => &[("p", 0.7), ("gamma", 2.0), ("t_max", 5.0)],
            ScenarioName::FiniteTimePurification => &[("p", 0.7), ("T", 1.0)],
            ScenarioName::PureToMixed => &[("gamma1", 1.0), ("gamma2", 0.5), ("t_max", 5.0)],
            ScenarioName::N3Shooting => &[("gamma", 1.0), ("t_max", 3.0)],
            ScenarioName::Cone2d => &[("zeta", 0.5), ("theta", 0.7), ("kappa", 0.6)],
            ScenarioName::Cone3d => &[("zeta", 0.5), ("theta", 1.2), ("phi", 0.3), ("kappa", 0.8)],
            ScenarioName::ConeSteadyState => &[
                ("zeta", 0.5),
                ("epsilon", 0.01),
                ("theta", std::f64::consts::FRAC_PI_3),
                ("phi", std::f64::consts::FRAC_PI_4),
                ("Gamma", 1.0),
            ],
        };
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    /// Keys accepted in addition to the defaults (absent unless set).
    pub fn optional_parameters(&self) -> &'static [&'static str] {
        match self {
            ScenarioName::FiniteTimePurification => &["alpha"],
            _ => &[],
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    /// Accepts both `snake_case` and `kebab-case`.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('-', "_").to_ascii_lowercase();
        ScenarioName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == norm)
            .ok_or_else(|| Error::param("scenario", format!("unknown scenario `{s}`")))
    }
}

/// Sampling of time or ε axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points on linear axes used for figure curves.
    pub linear_points: usize,
    /// Points on log-spaced axes used for scaling fits.
    pub log_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            linear_points: 200,
            log_points: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: ScenarioName,
    pub parameters: BTreeMap<String, f64>,
    pub grid: GridSpec,
    /// Table names to emit; empty means all.
    pub outputs: Vec<String>,
}

impl ScenarioConfig {
    pub fn new(name: ScenarioName) -> Self {
        Self {
            name,
            parameters: name.default_parameters(),
            grid: GridSpec::default(),
            outputs: Vec::new(),
        }
    }

    /// Sets a parameter; unknown keys and non-finite values are rejected.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let known = self.name.default_parameters().contains_key(key) || self.name.optional_parameters().contains(&key);
        if !known {
            return Err(Error::param(key, format!("not a parameter of {}", self.name)));
        }
        if !value.is_finite() {
            return Err(Error::param(key, "must be finite"));
        }
        self.parameters.insert(key.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, key: &str, value: f64) -> Result<Self> {
        self.set(key, value)?;
        Ok(self)
    }

    pub fn param(&self, key: &str) -> Result<f64> {
        self.parameters
            .get(key)
            .copied()
            .ok_or_else(|| Error::param(key, "missing"))
    }

    pub fn optional(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }

    pub fn wants(&self, table: &str) -> bool {
        self.outputs.is_empty() || self.outputs.iter().any(|o| o == table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse_in_both_styles() {
        assert_eq!("cone-3d".parse::<ScenarioName>().unwrap(), ScenarioName::Cone3d);
        assert_eq!(
            "asymptotic_purification".parse::<ScenarioName>().unwrap(),
            ScenarioName::AsymptoticPurification
        );
        assert!("bogus".parse::<ScenarioName>().is_err());
    }

    #[test]
    fn unknown_parameter_rejected() {
        let mut c = ScenarioConfig::new(ScenarioName::PureToMixed);
        assert!(c.set("zeta", 0.1).is_err());
        assert!(c.set("gamma1", f64::NAN).is_err());
        c.set("gamma1", 2.0).unwrap();
        assert_eq!(c.param("gamma1").unwrap(), 2.0);
    }

    #[test]
    fn optional_alpha_accepted() {
        let c = ScenarioConfig::new(ScenarioName::FiniteTimePurification);
        assert!(c.optional("alpha").is_none());
        let c = c.with("alpha", 2.0).unwrap();
        assert_eq!(c.optional("alpha"), Some(2.0));
    }
}
