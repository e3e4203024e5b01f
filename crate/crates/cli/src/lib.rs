//! Experiment harness behind the `dshape` binary.
//!
//! A run takes an [`ExperimentConfig`], computes every output in memory, and
//! only then writes the result files plus `manifest.json` into `out_path`.

mod commands;
pub mod config;

use std::path::{Path, PathBuf};
use std::time::Instant;

use direct_shaping::BitStream;
use serde::Serialize;
use thiserror::Error;

pub use config::{Command, ExperimentConfig, Params};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line or parameter value.
    #[error("invalid parameter `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(key: &str, msg: impl std::fmt::Display) -> Self {
        Self::Config {
            key: key.to_string(),
            msg: msg.to_string(),
        }
    }

    pub fn runtime(msg: impl std::fmt::Display) -> Self {
        Self::Runtime(msg.to_string())
    }

    /// 2 for configuration errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            _ => 1,
        }
    }
}

/// One named result file.
pub struct Output {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Output {
    pub fn text(name: impl Into<String>, text: String) -> Self {
        Self {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }

    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("result serializes");
        text.push('\n');
        Self::text(name, text)
    }
}

#[derive(Debug, Serialize)]
struct Versions {
    dshape: &'static str,
    direct_shaping: &'static str,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    config: &'a ExperimentConfig,
    versions: Versions,
    wall_time_seconds: f64,
    outputs: Vec<&'a str>,
}

#[derive(Debug)]
pub struct RunReport {
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Reads a file as a bit stream, bytes expanded MSB first.
pub fn ingest_corpus(path: &Path) -> Result<(BitStream, usize), CliError> {
    let bytes = read(path)?;
    Ok((BitStream::from_bytes(&bytes), bytes.len()))
}

pub(crate) fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a config from either a bare config file or a run manifest.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = String::from_utf8(read(path)?).map_err(|_| CliError::config("config", "file is not UTF-8"))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::config("config", e))?;
    let value = value.get("config").cloned().unwrap_or(value);
    serde_json::from_value(value).map_err(|e| CliError::config("config", e))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut params = Params::new(&config.params);
    let outputs = commands::dispatch(config.command, &mut params, config.seed)?;
    if let Some(key) = params.unused().first() {
        return Err(CliError::config(key, format!("not used by `{}`", config.command.name())));
    }
    let resolved = ExperimentConfig {
        params: params.resolved().clone(),
        ..config.clone()
    };
    std::fs::create_dir_all(&config.out_path).map_err(|source| CliError::Io {
        path: config.out_path.clone(),
        source,
    })?;
    let mut written = Vec::with_capacity(outputs.len());
    for out in &outputs {
        let path = config.out_path.join(&out.name);
        write(&path, &out.bytes)?;
        written.push(path);
    }
    let manifest = Manifest {
        config: &resolved,
        versions: Versions {
            dshape: env!("CARGO_PKG_VERSION"),
            direct_shaping: direct_shaping::VERSION,
        },
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs: outputs.iter().map(|o| o.name.as_str()).collect(),
    };
    let manifest_path = config.out_path.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write(&manifest_path, text.as_bytes())?;
    Ok(RunReport {
        outputs: written,
        manifest: manifest_path,
    })
}
