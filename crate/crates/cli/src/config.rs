//! Run configuration: command-line flags layered over an optional config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. All are optional so a config file can supply them.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Mallows parameter q > 0.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Permutation size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Comma-separated list of sizes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Replicates, or number of excursions/blocks/steps depending on the subcommand.
    #[arg(long, global = true)]
    pub reps: Option<u64>,
    /// Largest tracked cycle index.
    #[arg(long, global = true)]
    pub imax: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Chunks in the partition plan; results depend on this, not on --workers.
    #[arg(long, global = true)]
    pub chunks: Option<usize>,
    /// Output directory; machine output goes to standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// desk or deep (ten times the replicates).
    #[arg(long, global = true)]
    pub profile: Option<String>,
    /// Pass/fail tolerance override for subcommands that have one.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Config file with `key = value` lines or a JSON object.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// The effective configuration, echoed into the manifest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chunks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

pub const DEFAULT_SEED: u64 = 42;

impl RunConfig {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(1)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    fn overlay(&mut self, flags: &CommonArgs) {
        macro_rules! take {
            ($($f:ident),*) => {$(if flags.$f.is_some() { self.$f = flags.$f.clone(); })*};
        }
        take!(q, n, sizes, reps, imax, seed, workers, chunks, out, format, profile, tol);
    }

    /// Reads the config file named by `--config` (if any) and applies the flags on top.
    pub fn resolve(flags: &CommonArgs) -> Result<Self, String> {
        let mut config = match &flags.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        config.overlay(flags);
        if let Some(q) = config.q {
            if !(q > 0.0 && q.is_finite()) {
                return Err(format!("q must be a positive finite number, got {q}"));
            }
        }
        if config.workers == Some(0) || config.chunks == Some(0) {
            return Err("workers and chunks must be at least 1".into());
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        RunConfig::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Parses a JSON object, or `key = value` lines with `#` comments.
    pub fn parse(text: &str) -> Result<Self, String> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| e.to_string());
        }
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let key = key.trim().to_string();
            let value = value.trim();
            let json = if key == "sizes" {
                let sizes: Result<Vec<usize>, _> =
                    value.split(',').map(|s| s.trim().parse::<usize>()).collect();
                serde_json::json!(sizes.map_err(|e| format!("line {}: sizes: {e}", lineno + 1))?)
            } else {
                serde_json::from_str(value).unwrap_or_else(|_| serde_json::Value::String(value.into()))
            };
            if map.insert(key.clone(), json).is_some() {
                return Err(format!("line {}: duplicate key {key}", lineno + 1));
            }
        }
        serde_json::from_value(serde_json::Value::Object(map.into_iter().collect())).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_and_json_agree() {
        let a = RunConfig::parse("q = 0.5\nsizes = 10, 20\n# comment\nformat = csv\nprofile = deep\n").unwrap();
        let b = RunConfig::parse(r#"{"q": 0.5, "sizes": [10, 20], "format": "csv", "profile": "deep"}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sizes, Some(vec![10, 20]));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("qq = 1").is_err());
        assert!(RunConfig::parse(r#"{"bogus": 1}"#).is_err());
        assert!(RunConfig::parse("q 1").is_err());
        assert!(RunConfig::parse("q = 1\nq = 2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig::parse("q = 0.5\nseed = 7").unwrap();
        c.overlay(&CommonArgs {
            q: Some(2.0),
            ..Default::default()
        });
        assert_eq!((c.q, c.seed), (Some(2.0), Some(7)));
    }
}
