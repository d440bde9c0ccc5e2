//! Experiment defaults. Built-in values can be overridden by a TOML file
//! (`--config` or `ARW_CONFIG`), then by `ARW_*` environment variables,
//! then by command-line flags.
//!
//! ```toml
//! ppw = 40.0
//! mq_factor = 40
//! eps0 = 0.1
//! c0 = 0.25
//! probes = 3
//! trials = 300
//! seed = 20240607
//! convergence_tol = 0.01
//! cache_dir = "cache"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kacrice::{
    DEFAULT_C0, DEFAULT_CONVERGENCE_TOL, DEFAULT_EPS0, DEFAULT_MQ_FACTOR, DEFAULT_PROBES,
};
use crate::nodal::DEFAULT_PPW;

pub const ENV_PREFIX: &str = "ARW_";
pub const CONFIG_ENV: &str = "ARW_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Marching-squares points per wavelength.
    pub ppw: f64,
    /// Kac-Rice cells per side are `mq_factor * ceil(sqrt n)`.
    pub mq_factor: usize,
    pub eps0: f64,
    pub c0: f64,
    pub probes: usize,
    pub trials: usize,
    pub seed: u64,
    pub convergence_tol: f64,
    pub cache_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            ppw: DEFAULT_PPW,
            mq_factor: DEFAULT_MQ_FACTOR,
            eps0: DEFAULT_EPS0,
            c0: DEFAULT_C0,
            probes: DEFAULT_PROBES,
            trials: 300,
            seed: 20_240_607,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
            cache_dir: PathBuf::from("cache"),
        }
    }
}

fn parse_env<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("cannot parse {key}={raw:?}")))
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {}", e.message())))
    }

    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Config::from_toml_str(&text)
    }

    /// Applies `ARW_PPW`, `ARW_MQ_FACTOR`, `ARW_EPS0`, `ARW_C0`,
    /// `ARW_PROBES`, `ARW_TRIALS`, `ARW_SEED`, `ARW_CONVERGENCE_TOL` and
    /// `ARW_CACHE_DIR` from `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        let get = |name: &str| {
            let key = format!("{ENV_PREFIX}{name}");
            lookup(&key).map(|v| (key, v))
        };
        if let Some((k, v)) = get("PPW") {
            self.ppw = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("MQ_FACTOR") {
            self.mq_factor = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("EPS0") {
            self.eps0 = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("C0") {
            self.c0 = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("PROBES") {
            self.probes = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("TRIALS") {
            self.trials = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("SEED") {
            self.seed = parse_env(&k, &v)?;
        }
        if let Some((k, v)) = get("CONVERGENCE_TOL") {
            self.convergence_tol = parse_env(&k, &v)?;
        }
        if let Some((_, v)) = get("CACHE_DIR") {
            self.cache_dir = PathBuf::from(v);
        }
        Ok(())
    }

    /// Built-in defaults, then the file named by `path` or `ARW_CONFIG`,
    /// then the process environment.
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let mut cfg = match path.map(Path::to_path_buf).or(env_path) {
            Some(p) => Config::from_file(&p)?,
            None => Config::default(),
        };
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    pub fn mq(&self, n: u64) -> usize {
        self.mq_factor * (n as f64).sqrt().ceil() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.ppw, 40.0);
        assert_eq!(c.eps0, 0.1);
        assert_eq!(c.c0, 0.25);
        assert_eq!(c.mq(65), 360);
    }

    #[test]
    fn file_then_env() {
        let mut c = Config::from_toml_str("ppw = 20.0\ntrials = 5\n").unwrap();
        assert_eq!(c.ppw, 20.0);
        assert_eq!(c.eps0, 0.1);
        c.apply_env(|k| (k == "ARW_PPW").then(|| "12.5".to_string()))
            .unwrap();
        assert_eq!(c.ppw, 12.5);
        assert_eq!(c.trials, 5);
        assert!(c
            .apply_env(|k| (k == "ARW_SEED").then(|| "x".into()))
            .is_err());
        assert!(Config::from_toml_str("unknown = 1").is_err());
    }
}
