use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("d must be odd and >= 3, got {0}")]
    BadDimension(usize),
    #[error("tolerance `{0}` must be positive and finite, got {1}")]
    BadTolerance(String, f64),
    #[error("malformed --tolerance `{0}`, expected KEY=VALUE")]
    MalformedTolerance(String),
    #[error("time grid must be nonnegative and finite, got {0}")]
    NegativeTime(f64),
    #[error("parameter `{0}`: {1}")]
    BadParam(String, String),
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

/// Contents of a `--config` JSON file. Every field is optional; command-line
/// flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub d: Option<usize>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub t_grid: Option<Vec<f64>>,
    pub params: BTreeMap<String, Value>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let read = |e: Box<dyn std::error::Error + Send + Sync>| ConfigError::Read {
            path: path.to_path_buf(),
            source: e,
        };
        let file = File::open(path).map_err(|e| read(e.into()))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| read(e.into()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub d: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub t_grid: Vec<f64>,
    pub params: BTreeMap<String, Value>,
    /// Record per-check wall time in reports (makes output nondeterministic).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            d: 5,
            seed: 1,
            tolerances: BTreeMap::new(),
            output_path: None,
            t_grid: (0..=10).map(|i| i as f64 / 5.0).collect(),
            params: BTreeMap::new(),
            timing: false,
        }
    }
}

impl RunConfig {
    /// Applies a config file on top of the defaults.
    pub fn from_file(file: ConfigFile) -> Self {
        let mut cfg = RunConfig::default();
        if let Some(d) = file.d {
            cfg.d = d;
        }
        if let Some(seed) = file.seed {
            cfg.seed = seed;
        }
        cfg.tolerances = file.tolerances;
        cfg.output_path = file.output_path;
        if let Some(t) = file.t_grid {
            cfg.t_grid = t;
        }
        cfg.params = file.params;
        cfg
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.d < 3 || self.d.is_multiple_of(2) {
            return Err(ConfigError::BadDimension(self.d));
        }
        for (k, &v) in &self.tolerances {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::BadTolerance(k.clone(), v));
            }
        }
        if let Some(&t) = self.t_grid.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(ConfigError::NegativeTime(t));
        }
        Ok(())
    }

    /// Parses `KEY=VALUE` and records the override.
    pub fn set_tolerance(&mut self, spec: &str) -> Result<(), ConfigError> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| ConfigError::MalformedTolerance(spec.into()))?;
        let v: f64 = v.trim().parse().map_err(|_| ConfigError::MalformedTolerance(spec.into()))?;
        self.tolerances.insert(k.trim().to_string(), v);
        Ok(())
    }

    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| ConfigError::BadParam(key.into(), format!("expected a number, got {v}"))),
        }
    }

    pub fn param_usize(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| ConfigError::BadParam(key.into(), format!("expected a nonnegative integer, got {v}"))),
        }
    }

    pub fn param_str(&self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(ConfigError::BadParam(key.into(), format!("expected a string, got {v}"))),
        }
    }
}

/// Parses a comma-separated time grid such as `0,0.5,1`.
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError::BadParam("t-grid".into(), format!("`{p}` is not a number")))
        })
        .collect()
}
