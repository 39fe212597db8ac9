//! Support for the `evenlines` binary: run manifests, the results cache and
//! graph6 file handling.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::arrangement::{decode_graph6, Arrangement};
use crate::enumerator::{EnumerationSummary, SurvivorSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "EVENLINES_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub version: String,
    /// Path → sha256 of every file read.
    pub input_hashes: BTreeMap<String, String>,
    /// Path → sha256 of every file written.
    pub outputs: BTreeMap<String, String>,
    pub complete: bool,
    pub cache_hit: bool,
    pub wall_time_ms: u128,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value) -> Self {
        RunManifest {
            command: command.into(),
            parameters,
            version: VERSION.into(),
            input_hashes: BTreeMap::new(),
            outputs: BTreeMap::new(),
            complete: true,
            cache_hit: false,
            wall_time_ms: 0,
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.input_hashes.insert(path.display().to_string(), sha256_hex(bytes));
    }

    pub fn add_output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.insert(path.display().to_string(), sha256_hex(bytes));
    }

    /// Cache key from command, parameters and version.
    pub fn cache_key(&self) -> String {
        let keyed = serde_json::json!({
            "command": self.command,
            "parameters": self.parameters,
            "version": self.version,
        });
        sha256_hex(keyed.to_string().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `$EVENLINES_CACHE_DIR`, else `$XDG_CACHE_HOME/evenlines`, else
/// `$HOME/.cache/evenlines`.
pub fn cache_dir() -> Option<PathBuf> {
    let env = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    env(CACHE_ENV)
        .or_else(|| env("XDG_CACHE_HOME").map(|p| p.join("evenlines")))
        .or_else(|| env("HOME").map(|p| p.join(".cache").join("evenlines")))
}

/// Survivor list and summary as written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationPayload {
    pub graph6: String,
    pub summary: String,
}

impl EnumerationPayload {
    pub fn of(set: &SurvivorSet) -> Self {
        let mut graph6 = String::new();
        for s in set.canonical_strings() {
            graph6.push_str(s);
            graph6.push('\n');
        }
        EnumerationPayload { graph6, summary: summary_json(&set.summary()) }
    }

    pub fn load(dir: &Path) -> io::Result<Self> {
        Ok(EnumerationPayload {
            graph6: fs::read_to_string(dir.join("survivors.g6"))?,
            summary: fs::read_to_string(dir.join("summary.json"))?,
        })
    }

    /// Write `survivors.g6` and `summary.json` into `dir`, returning the paths
    /// with their contents.
    pub fn store(&self, dir: &Path) -> io::Result<Vec<(PathBuf, &[u8])>> {
        fs::create_dir_all(dir)?;
        let files = vec![
            (dir.join("survivors.g6"), self.graph6.as_bytes()),
            (dir.join("summary.json"), self.summary.as_bytes()),
        ];
        for (p, b) in &files {
            fs::write(p, b)?;
        }
        Ok(files)
    }

    pub fn complete(&self) -> bool {
        serde_json::from_str::<Value>(&self.summary)
            .ok()
            .and_then(|v| v["complete"].as_bool())
            .unwrap_or(false)
    }
}

pub fn summary_json(s: &EnumerationSummary) -> String {
    let mut out = serde_json::to_string(s).expect("summary serializes");
    out.push('\n');
    out
}

/// One parsed line of a graph6 file.
#[derive(Debug)]
pub enum Graph6Line {
    Ok { line: usize, text: String, arrangement: Arrangement },
    Err { line: usize, text: String, error: String },
}

/// Parse non-empty lines; `>>graph6<<` headers and surrounding whitespace are
/// ignored.
pub fn parse_graph6_lines(text: &str) -> Vec<Graph6Line> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let t = raw.trim();
            let t = t.strip_prefix(">>graph6<<").unwrap_or(t);
            if t.is_empty() {
                return None;
            }
            Some(match decode_graph6(t) {
                Ok(a) => Graph6Line::Ok { line: i + 1, text: t.into(), arrangement: a },
                Err(e) => Graph6Line::Err { line: i + 1, text: t.into(), error: e.to_string() },
            })
        })
        .collect()
}

/// JSON record for a line that failed to parse.
pub fn line_error(line: usize, text: &str, error: &str) -> Value {
    serde_json::json!({ "line": line, "input": text, "error": error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::{enumerate, EnumerationTask};

    #[test]
    fn cache_key_ignores_timing() {
        let mut a = RunManifest::new("enumerate", serde_json::json!({"n": 6}));
        let mut b = a.clone();
        a.wall_time_ms = 5;
        b.wall_time_ms = 7;
        assert_eq!(a.cache_key(), b.cache_key());
        let c = RunManifest::new("enumerate", serde_json::json!({"n": 8}));
        assert_ne!(a.cache_key(), c.cache_key());
    }

    #[test]
    fn payload_round_trip() {
        let set = enumerate(&EnumerationTask::new(6)).unwrap();
        let p = EnumerationPayload::of(&set);
        assert_eq!(p.graph6.lines().count(), 1);
        let dir = tempfile::tempdir().unwrap();
        p.store(dir.path()).unwrap();
        assert_eq!(EnumerationPayload::load(dir.path()).unwrap(), p);
        assert!(p.complete());
    }

    #[test]
    fn graph6_lines() {
        let parsed = parse_graph6_lines(">>graph6<<Ec`o\n\n  bad!\nA_\n");
        assert_eq!(parsed.len(), 3);
        assert!(matches!(parsed[0], Graph6Line::Ok { line: 1, .. }));
        assert!(matches!(parsed[1], Graph6Line::Err { line: 3, .. }));
    }
}
