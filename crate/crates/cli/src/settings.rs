//! Parameter resolution: command-line flag, then config file, then default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    used: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Ok(Self {
            file: parse_config(&text)?,
            used: BTreeMap::new(),
        })
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        let file = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        Self {
            file,
            used: BTreeMap::new(),
        }
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<&str>, default: &str) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let raw = flag.or(self.file.get(key).map(String::as_str)).unwrap_or(default);
        let value: T = raw
            .parse()
            .map_err(|e| CliError::Usage(format!("invalid {key} '{raw}': {e}")))?;
        self.used.insert(key.to_string(), raw.to_string());
        Ok(value)
    }

    /// A tolerance or step: finite and strictly positive.
    pub fn positive(&mut self, key: &str, flag: Option<&str>, default: &str) -> Result<f64, CliError> {
        let v: f64 = self.get(key, flag, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Usage(format!("{key} must be positive, got {v}")));
        }
        Ok(v)
    }

    /// Resolved values; fails on config keys nothing asked for.
    pub fn finish(self) -> Result<BTreeMap<String, String>, CliError> {
        let unknown: Vec<&String> = self.file.keys().filter(|k| !self.used.contains_key(*k)).collect();
        if !unknown.is_empty() {
            let names: Vec<&str> = unknown.iter().map(|s| s.as_str()).collect();
            return Err(CliError::Usage(format!("unknown config keys: {}", names.join(", "))));
        }
        Ok(self.used)
    }
}

/// `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!(
                "config line {}: duplicate key {}",
                i + 1,
                k.trim()
            )));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let mut s = Settings::from_pairs(&[("tol", "1e-6"), ("n", "7")]);
        let tol: f64 = s.get("tol", Some("1e-3"), "1e-9").unwrap();
        let n: usize = s.get("n", None, "3").unwrap();
        let m: usize = s.get("m", None, "3").unwrap();
        assert_eq!((tol, n, m), (1e-3, 7, 3));
        let used = s.finish().unwrap();
        assert_eq!(used["tol"], "1e-3");
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let s = Settings::from_pairs(&[("bogus", "1")]);
        assert!(matches!(s.finish(), Err(CliError::Usage(_))));
        assert!(parse_config("# c\n\na = 1\nb\n").is_err());
        assert!(parse_config("a=1\na=2").is_err());
        let mut s = Settings::default();
        assert!(s.positive("tol", Some("-1"), "1").is_err());
        assert!(s.get::<usize>("n", Some("x"), "1").is_err());
    }
}
