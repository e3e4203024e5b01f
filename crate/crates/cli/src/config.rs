//! Experiment configuration: a command plus string parameters, resolved
//! lazily so the manifest records every value a run actually used.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SlcEncode,
    SlcDecode,
    MlcEncode,
    MlcDecode,
    Profile,
    Bounds,
    Grid,
    Instability,
    Montecarlo,
    Theory,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::SlcEncode => "slc-encode",
            Self::SlcDecode => "slc-decode",
            Self::MlcEncode => "mlc-encode",
            Self::MlcDecode => "mlc-decode",
            Self::Profile => "profile",
            Self::Bounds => "bounds",
            Self::Grid => "grid",
            Self::Instability => "instability",
            Self::Montecarlo => "montecarlo",
            Self::Theory => "theory",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Command-specific parameters as given on the command line.
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub out_path: PathBuf,
}

/// Typed access to the parameters of one run. Every lookup, including
/// defaults, is recorded for the manifest; keys never looked up are
/// reported as unused.
pub struct Params<'a> {
    raw: &'a BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    pub fn new(raw: &'a BTreeMap<String, String>) -> Self {
        Self {
            raw,
            resolved: BTreeMap::new(),
        }
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }

    /// Keys that were supplied but never read.
    pub fn unused(&self) -> Vec<&str> {
        self.raw
            .keys()
            .filter(|k| !self.resolved.contains_key(*k))
            .map(String::as_str)
            .collect()
    }

    pub fn raw_str(&mut self, key: &str) -> Option<String> {
        let v = self.raw.get(key).cloned()?;
        self.resolved.insert(key.to_string(), v.clone());
        Some(v)
    }

    pub fn str_or(&mut self, key: &str, default: &str) -> String {
        let v = self.raw.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.resolved.insert(key.to_string(), v.clone());
        v
    }

    pub fn require(&mut self, key: &str) -> Result<String, CliError> {
        self.raw_str(key).ok_or_else(|| CliError::config(key, "is required for this command"))
    }

    pub fn parse_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: ToString,
    {
        match self.raw.get(key) {
            Some(v) => {
                let parsed = v.trim().parse().map_err(|_| CliError::config(key, format!("cannot parse {v:?}")))?;
                self.resolved.insert(key.to_string(), v.clone());
                Ok(parsed)
            }
            None => {
                self.resolved.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn parse_required<T: FromStr>(&mut self, key: &str) -> Result<T, CliError> {
        let v = self.require(key)?;
        v.trim().parse().map_err(|_| CliError::config(key, format!("cannot parse {v:?}")))
    }

    pub fn flag(&mut self, key: &str) -> Result<bool, CliError> {
        self.parse_or(key, false)
    }

    pub fn f64_list(&mut self, key: &str, default: &str) -> Result<Vec<f64>, CliError> {
        let v = self.str_or(key, default);
        parse_f64_list(&v).map_err(|msg| CliError::config(key, msg))
    }

    pub fn usize_list(&mut self, key: &str, default: &str) -> Result<Vec<usize>, CliError> {
        let v = self.str_or(key, default);
        parse_usize_list(&v).map_err(|msg| CliError::config(key, msg))
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?}")))
        .collect()
}

/// Comma list of items, each a number or a `start:end[:step]` range with
/// an inclusive end.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad integer {x:?}"));
        match parts.as_slice() {
            [one] => out.push(num(one)?),
            [a, b] | [a, b, _] => {
                let (a, b) = (num(a)?, num(b)?);
                let step = if parts.len() == 3 { num(parts[2])? } else { 1 };
                if step == 0 || b < a {
                    return Err(format!("bad range {item:?}"));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(format!("bad range {item:?}")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_usize_list("0:10:5,12").unwrap(), vec![0, 5, 10, 12]);
        assert_eq!(parse_usize_list("1:3").unwrap(), vec![1, 2, 3]);
        assert!(parse_usize_list("3:1").is_err());
        assert!(parse_usize_list("1:2:0").is_err());
        assert_eq!(parse_f64_list("[0.4, 0.6]").unwrap(), vec![0.4, 0.6]);
        assert!(parse_f64_list("0.4,x").is_err());
    }

    #[test]
    fn params_record_defaults_and_unused_keys() {
        let raw: BTreeMap<String, String> = [("m".to_string(), "4".to_string()), ("zzz".to_string(), "1".to_string())].into();
        let mut p = Params::new(&raw);
        assert_eq!(p.parse_or("m", 2usize).unwrap(), 4);
        assert_eq!(p.parse_or("trials", 10usize).unwrap(), 10);
        assert_eq!(p.resolved().get("trials").unwrap(), "10");
        assert_eq!(p.unused(), vec!["zzz"]);
        let err = p.parse_required::<f64>("rho").unwrap_err();
        assert!(err.to_string().contains("rho"));
    }
}
