//! Flat `key=value` config files. Keys use the exact long-flag spellings;
//! values given on the command line always win over file values.

use std::collections::HashMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line} is not `key=value`: {text:?}")]
    Malformed { line: usize, text: String },
    #[error("config key {key}: cannot parse {value:?} as {ty}")]
    BadValue {
        key: String,
        value: String,
        ty: &'static str,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: idx + 1,
                    text: raw.to_string(),
                });
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Command-line value > config value > default.
    pub fn pick_f64(
        &self,
        cli: Option<f64>,
        key: &str,
        default: f64,
    ) -> Result<f64, ConfigError> {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(text) => text.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: text.clone(),
                ty: "f64",
            }),
            None => Ok(default),
        }
    }

    pub fn pick_usize(
        &self,
        cli: Option<usize>,
        key: &str,
        default: usize,
    ) -> Result<usize, ConfigError> {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(text) => text.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: text.clone(),
                ty: "usize",
            }),
            None => Ok(default),
        }
    }

    pub fn pick_u64(&self, cli: Option<u64>, key: &str, default: u64) -> Result<u64, ConfigError> {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(text) => text.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: text.clone(),
                ty: "u64",
            }),
            None => Ok(default),
        }
    }

    /// Flags: true once given on the command line, else the config value.
    pub fn pick_flag(&self, cli: bool, key: &str) -> Result<bool, ConfigError> {
        if cli {
            return Ok(true);
        }
        match self.values.get(key) {
            Some(text) => match text.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(ConfigError::BadValue {
                    key: key.to_string(),
                    value: text.clone(),
                    ty: "bool",
                }),
            },
            None => Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blank_lines() {
        let config = Config::parse("# comment\n\ngamma1 = 2.5\ndphi=2.75\nsagnac=true\n").unwrap();
        assert_eq!(config.pick_f64(None, "gamma1", 1.0).unwrap(), 2.5);
        assert_eq!(config.pick_f64(None, "dphi", 0.0).unwrap(), 2.75);
        assert!(config.pick_flag(false, "sagnac").unwrap());
        assert_eq!(config.pick_f64(None, "missing", 7.0).unwrap(), 7.0);
    }

    #[test]
    fn cli_values_win() {
        let config = Config::parse("gamma1=2.5").unwrap();
        assert_eq!(config.pick_f64(Some(9.0), "gamma1", 1.0).unwrap(), 9.0);
    }

    #[test]
    fn malformed_lines_and_values_error() {
        assert!(Config::parse("this is not a pair").is_err());
        let config = Config::parse("gamma1=abc").unwrap();
        assert!(config.pick_f64(None, "gamma1", 1.0).is_err());
        let config = Config::parse("sagnac=maybe").unwrap();
        assert!(config.pick_flag(false, "sagnac").is_err());
    }
}
