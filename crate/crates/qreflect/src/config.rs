//! Flat `key = value` configuration files with `#` comments.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = k.trim();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            entries.insert(key.to_string(), v.trim().to_string());
        }
        Ok(Config { entries })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("{key}: '{v}' is not a number"))),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| Error::Config(format!("{key}: '{v}' is not a non-negative integer"))),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blanks() {
        let cfg = Config::parse(
            "# run setup\n\
             species = Rb87\n\
             ts = 300   # surface\n\
             \n\
             te = 1200\n",
        )
        .unwrap();
        assert_eq!(cfg.get("species"), Some("Rb87"));
        assert_eq!(cfg.get_f64("ts").unwrap(), Some(300.0));
        assert_eq!(cfg.get_f64("te").unwrap(), Some(1200.0));
        assert_eq!(cfg.get("missing"), None);
        assert_eq!(cfg.get_f64("missing").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(Config::parse("species Rb87\n").is_err());
        assert!(Config::parse("= 12\n").is_err());
        let cfg = Config::parse("ts = warm\n").unwrap();
        assert!(cfg.get_f64("ts").is_err());
    }
}
