//! CLI plumbing: exit-code-bearing errors, layered configuration
//! (defaults < file < flags), run manifests with input digests, and
//! deterministic CSV/JSON output helpers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Exit code 2: the user violated a precondition. Exit code 1: something
/// internal went wrong.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<snowflake_core::Error> for CliError {
    fn from(e: snowflake_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(format!("malformed JSON input: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Layered option resolution. Flags win over file values, file values win
/// over defaults; every final value is recorded for the manifest.
pub struct Resolver {
    file: BTreeMap<String, String>,
    pub resolved: BTreeMap<String, String>,
}

impl Resolver {
    /// Load a flat `key=value` file (blank lines and `#` comments allowed)
    /// and reject unknown keys up front.
    pub fn new(config: Option<&Path>, allowed: &[&str]) -> CliResult<Self> {
        let mut file = BTreeMap::new();
        if let Some(path) = config {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Validation(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Validation(format!(
                        "malformed config line {}: expected key=value, got {line:?}",
                        lineno + 1
                    ))
                })?;
                let key = key.trim();
                let value = value.trim();
                if !allowed.contains(&key) {
                    return Err(CliError::Validation(format!(
                        "unknown config key {key:?}; valid keys: {}",
                        allowed.join(", ")
                    )));
                }
                file.insert(key.to_string(), value.to_string());
            }
        }
        Ok(Resolver { file, resolved: BTreeMap::new() })
    }

    fn lookup<T: std::str::FromStr>(
        &mut self,
        key: &str,
        flag: Option<T>,
        default: T,
        render: impl Fn(&T) -> String,
    ) -> CliResult<T> {
        let value = if let Some(v) = flag {
            v
        } else if let Some(raw) = self.file.get(key) {
            raw.parse().map_err(|_| {
                CliError::Validation(format!("invalid value {raw:?} for config key {key:?}"))
            })?
        } else {
            default
        };
        self.resolved.insert(key.to_string(), render(&value));
        Ok(value)
    }

    pub fn f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> CliResult<f64> {
        self.lookup(key, flag, default, |v| format!("{v}"))
    }

    pub fn usize(&mut self, key: &str, flag: Option<usize>, default: usize) -> CliResult<usize> {
        self.lookup(key, flag, default, |v| format!("{v}"))
    }

    pub fn u64(&mut self, key: &str, flag: Option<u64>, default: u64) -> CliResult<u64> {
        self.lookup(key, flag, default, |v| format!("{v}"))
    }

    pub fn u32(&mut self, key: &str, flag: Option<u32>, default: u32) -> CliResult<u32> {
        self.lookup(key, flag, default, |v| format!("{v}"))
    }

    pub fn bool(&mut self, key: &str, flag: Option<bool>, default: bool) -> CliResult<bool> {
        self.lookup(key, flag, default, |v| format!("{v}"))
    }

    pub fn string(&mut self, key: &str, flag: Option<String>, default: &str) -> CliResult<String> {
        self.lookup(key, flag, default.to_string(), |v| v.clone())
    }
}

/// One manifest per run: what ran, with which resolved options, on which
/// inputs (content digests), producing which outputs.
#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub input_digests: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
    pub wall_clock_ms: u128,
}

pub struct RunContext {
    started: Instant,
    pub subcommand: String,
    pub seed: u64,
    pub input_digests: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
    manifest_path: PathBuf,
}

impl RunContext {
    pub fn new(subcommand: &str, out: Option<&Path>, manifest_flag: Option<&Path>) -> Self {
        let manifest_path = manifest_flag.map(Path::to_path_buf).unwrap_or_else(|| {
            out.map(|p| {
                let mut s = p.as_os_str().to_owned();
                s.push(".manifest.json");
                PathBuf::from(s)
            })
            .unwrap_or_else(|| PathBuf::from("run.manifest.json"))
        });
        RunContext {
            started: Instant::now(),
            subcommand: subcommand.to_string(),
            seed: 0,
            input_digests: BTreeMap::new(),
            output_paths: Vec::new(),
            manifest_path,
        }
    }

    /// Read an input file, remembering its content digest.
    pub fn read_input(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|e| {
            CliError::Validation(format!("cannot read input {}: {e}", path.display()))
        })?;
        let digest = hex_digest(&bytes);
        self.input_digests
            .insert(path.display().to_string(), digest);
        String::from_utf8(bytes)
            .map_err(|_| CliError::Validation(format!("{} is not UTF-8", path.display())))
    }

    pub fn write_output(&mut self, path: &Path, content: &str) -> CliResult<()> {
        fs::write(path, content)?;
        self.output_paths.push(path.display().to_string());
        Ok(())
    }

    pub fn finish(self, resolver: &Resolver) -> CliResult<()> {
        let manifest = RunManifest {
            subcommand: self.subcommand,
            config: resolver.resolved.clone(),
            seed: self.seed,
            input_digests: self.input_digests,
            output_paths: self.output_paths,
            wall_clock_ms: self.started.elapsed().as_millis(),
        };
        let body = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        fs::write(&self.manifest_path, body + "\n")?;
        Ok(())
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Round-trip-exact decimal rendering for CSV cells.
pub fn csv_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Build a CSV document from a header and float rows.
pub fn csv_table(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| csv_float(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}
