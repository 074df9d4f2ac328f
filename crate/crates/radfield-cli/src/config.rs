// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` run configuration files.
//!
//! Lines are `key = value` pairs, `#` starts a comment, blank lines are
//! skipped. Keys are snake_case and may not repeat. Lookups record which
//! keys were touched so a run can warn about entries it never read
//! (usually typos).

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use radfield::{Error, Result};

#[derive(Debug)]
pub struct Config {
    entries: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no + 1,
                message: format!("expected 'key = value', found '{line}'"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Parse {
                    line: line_no + 1,
                    message: "empty key or value".into(),
                });
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(Error::Parse {
                    line: line_no + 1,
                    message: format!("duplicate key '{key}'"),
                });
            }
        }
        Ok(Self {
            entries,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let value = self.entries.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(value.as_str())
    }

    pub fn get_str(&self, key: &str) -> Option<String> {
        self.raw(key).map(str::to_string)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("config key '{key}': '{v}' is not a number"))
                })
            })
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?
            .ok_or_else(|| Error::InvalidParameter(format!("missing config key '{key}'")))
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "config key '{key}': '{v}' is not a nonnegative integer"
                    ))
                })
            })
            .transpose()
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        self.raw(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "config key '{key}': '{v}' is not a nonnegative integer"
                    ))
                })
            })
            .transpose()
    }

    /// Accepts `on`/`off`/`true`/`false`.
    pub fn get_switch(&self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|v| match v {
                "on" | "true" => Ok(true),
                "off" | "false" => Ok(false),
                other => Err(Error::InvalidParameter(format!(
                    "config key '{key}': '{other}' is not on/off"
                ))),
            })
            .transpose()
    }

    /// Comma separated float list.
    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        let item = item.trim();
                        item.parse::<f64>().map_err(|_| {
                            Error::InvalidParameter(format!(
                                "config key '{key}': '{item}' is not a number"
                            ))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    /// Keys present in the file but never read by the run.
    pub fn unused_keys(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.entries
            .keys()
            .filter(|k| !used.contains(*k))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_comments_and_lists() {
        let c = Config::parse(
            "# run setup\nfrequency_ge_hz = 5.332e9\nlevels = 4  # inline note\npowers_watt = 1e-7, 2e-7\ncross_terms = off\n",
        )
        .unwrap();
        assert_eq!(c.require_f64("frequency_ge_hz").unwrap(), 5.332e9);
        assert_eq!(c.get_usize("levels").unwrap(), Some(4));
        assert_eq!(
            c.get_f64_list("powers_watt").unwrap().unwrap(),
            vec![1e-7, 2e-7]
        );
        assert_eq!(c.get_switch("cross_terms").unwrap(), Some(false));
        assert!(c.unused_keys().is_empty());
    }

    #[test]
    fn rejects_duplicates_and_bad_lines() {
        assert!(Config::parse("a = 1\na = 2\n").is_err());
        assert!(Config::parse("just words\n").is_err());
        assert!(Config::parse("a =\n").is_err());
    }

    #[test]
    fn tracks_unused_keys() {
        let c = Config::parse("a = 1\nb = 2\n").unwrap();
        let _ = c.get_f64("a");
        assert_eq!(c.unused_keys(), vec!["b".to_string()]);
    }

    #[test]
    fn missing_required_key_is_reported_by_name() {
        let c = Config::parse("a = 1\n").unwrap();
        let err = c.require_f64("frequency_ge_hz").unwrap_err();
        assert!(err.to_string().contains("frequency_ge_hz"));
    }
}
