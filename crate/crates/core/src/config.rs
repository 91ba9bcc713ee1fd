//! `key = value` configuration files.
//!
//! One setting per line; `#` starts a comment, blank lines are ignored and
//! keys may repeat (later values append). Keys match the long CLI flag
//! names with or without the leading dashes, and `-`/`_` are
//! interchangeable.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigMap {
    entries: Vec<(String, String)>,
}

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches('-').replace('_', "-").to_ascii_lowercase()
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: "expected key = value".into(),
            })?;
            let key = normalize(key);
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("invalid key {key:?}"),
                });
            }
            entries.push((key, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Last value given for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        let key = normalize(key);
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Every value given for `key`, in file order.
    pub fn get_all(&self, key: &str) -> Vec<&str> {
        let key = normalize(key);
        self.entries
            .iter()
            .filter(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    /// Parses the value of `key`, if present.
    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("{key}: {e}")))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_repeats_and_comments() {
        let c = ConfigMap::parse("# sweep\nn = 6\n--k=57\npth = 1e-3 # first\npth = 1e-4\nstack_size = 8\n").unwrap();
        assert_eq!(c.get("n"), Some("6"));
        assert_eq!(c.get("--k"), Some("57"));
        assert_eq!(c.get_all("pth"), vec!["1e-3", "1e-4"]);
        assert_eq!(c.get("stack-size"), Some("8"));
        assert_eq!(c.parsed::<usize>("n").unwrap(), Some(6));
        assert!(c.parsed::<usize>("pth").is_err());
        assert_eq!(c.parsed::<usize>("seed").unwrap(), None);
    }

    #[test]
    fn rejects_malformed() {
        assert!(ConfigMap::parse("n 6").is_err());
        assert!(ConfigMap::parse(" = 6").is_err());
        assert!(ConfigMap::parse("a b = 6").is_err());
        assert!(ConfigMap::parse("").unwrap().is_empty());
    }
}
