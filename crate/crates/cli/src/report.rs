use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] spackle::Error),
    #[error("{0}")]
    Input(String),
    /// Verification ran but the result is negative.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use spackle::Error as E;
        match self {
            CliError::Io { .. } | CliError::Input(_) => 1,
            CliError::Failed(_) => 2,
            CliError::Core(e) => match e {
                E::Verification { .. } => 2,
                E::ResourceLimit(_) | E::GraphSearchExhausted { .. } => 3,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    /// Digest of the canonical text of the parsed input.
    pub sha256: String,
}

pub fn digest(path: &Path, canonical: &str) -> InputDigest {
    InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(canonical.as_bytes())) }
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub report: T,
}

/// Write the report as pretty JSON to `out`, or to stdout.
pub fn emit<T: Serialize>(
    out: Option<&Path>,
    command: &'static str,
    seed: Option<u64>,
    inputs: Vec<InputDigest>,
    report: T,
) -> CliResult<()> {
    let env = Envelope { tool: "spackle", version: env!("CARGO_PKG_VERSION"), command, seed, inputs, report };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
