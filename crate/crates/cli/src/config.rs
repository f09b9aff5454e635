//! Flat `key = value` run configuration with flag overrides.

use std::fs;
use std::path::Path;

use burescone::scenarios::{ScenarioConfig, ScenarioName};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub pairs: Vec<(String, String)>,
}

impl Overrides {
    /// Parses `--key value` and `--key=value` tokens.
    pub fn from_args(args: &[String]) -> Result<Self, String> {
        let mut pairs = Vec::new();
        let mut it = args.iter();
        while let Some(tok) = it.next() {
            let Some(body) = tok.strip_prefix("--") else {
                return Err(format!("unexpected argument `{tok}`"));
            };
            let (key, value) = match body.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it.next().ok_or_else(|| format!("missing value for --{body}"))?;
                    (body.to_string(), v.clone())
                }
            };
            pairs.push((key, value));
        }
        Ok(Self { pairs })
    }

    /// Parses a config file; blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut pairs = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), n + 1))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self { pairs })
    }
}

fn normalize(key: &str) -> String {
    key.replace('-', "_")
}

fn number(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("`{key}` expects a number, got `{value}`"))
}

fn count(key: &str, value: &str) -> Result<usize, String> {
    value
        .parse::<usize>()
        .map_err(|_| format!("`{key}` expects a positive integer, got `{value}`"))
}

/// Applies file settings first and flag settings second, so flags win.
pub fn build_config(name: ScenarioName, layers: &[Overrides]) -> Result<ScenarioConfig, String> {
    let mut cfg = ScenarioConfig::new(name);
    for layer in layers {
        for (raw_key, value) in &layer.pairs {
            let key = normalize(raw_key);
            match key.as_str() {
                "scenario" => {
                    let named: ScenarioName = value.parse().map_err(|e| format!("{e}"))?;
                    if named != name {
                        return Err(format!("config is for `{named}`, not `{name}`"));
                    }
                }
                "linear_points" => cfg.grid.linear_points = count(&key, value)?,
                "log_points" => cfg.grid.log_points = count(&key, value)?,
                "outputs" => {
                    cfg.outputs = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                _ => cfg.set(&key, number(&key, value)?).map_err(|e| e.to_string())?,
            }
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn flags_parse_both_forms() {
        let o = Overrides::from_args(&args(&["--p", "0.5", "--gamma=3"])).unwrap();
        assert_eq!(o.pairs, vec![("p".into(), "0.5".into()), ("gamma".into(), "3".into())]);
        assert!(Overrides::from_args(&args(&["--p"])).is_err());
        assert!(Overrides::from_args(&args(&["p"])).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Overrides {
            pairs: vec![("p".into(), "0.4".into()), ("t-max".into(), "2".into())],
        };
        let flags = Overrides {
            pairs: vec![("p".into(), "0.6".into())],
        };
        let cfg = build_config(ScenarioName::AsymptoticPurification, &[file, flags]).unwrap();
        assert_eq!(cfg.param("p").unwrap(), 0.6);
        assert_eq!(cfg.param("t_max").unwrap(), 2.0);
    }

    #[test]
    fn unknown_keys_and_bad_numbers_fail() {
        let bad = Overrides {
            pairs: vec![("bogus".into(), "1".into())],
        };
        assert!(build_config(ScenarioName::Cone2d, &[bad]).is_err());
        let nan = Overrides {
            pairs: vec![("zeta".into(), "abc".into())],
        };
        assert!(build_config(ScenarioName::Cone2d, &[nan]).is_err());
    }

    #[test]
    fn grid_and_outputs_keys() {
        let o = Overrides {
            pairs: vec![("log_points".into(), "50".into()), ("outputs".into(), "a, b".into())],
        };
        let cfg = build_config(ScenarioName::N3Shooting, &[o]).unwrap();
        assert_eq!(cfg.grid.log_points, 50);
        assert_eq!(cfg.outputs, vec!["a", "b"]);
    }
}
