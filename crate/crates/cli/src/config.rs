//! Optional `key=value` defaults file.
//!
//! ```text
//! # lines starting with '#' are ignored
//! budget = 500000000
//! jobs = 4
//! cap = 30
//! conjecture_cap = 22
//! out_dir = certificates
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "SUMSET_LAB_CONFIG";

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Config {
    pub budget: Option<u64>,
    pub jobs: Option<usize>,
    /// Cap on the maximum element for the theorem 1 and 2 sweeps.
    pub cap: Option<u32>,
    /// Cap on the maximum element for the conjecture sweep.
    pub conjecture_cap: Option<u32>,
    pub out_dir: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got `{line}`", n + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = || format!("line {}: invalid value `{value}` for `{key}`", n + 1);
            match key {
                "budget" => cfg.budget = Some(value.parse().with_context(bad)?),
                "jobs" => cfg.jobs = Some(value.parse().with_context(bad)?),
                "cap" => cfg.cap = Some(value.parse().with_context(bad)?),
                "conjecture_cap" => cfg.conjecture_cap = Some(value.parse().with_context(bad)?),
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                _ => bail!("line {}: unknown key `{key}`", n + 1),
            }
        }
        if cfg.budget == Some(0) {
            bail!("budget must be positive");
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Loads the explicit path, else the one named by [`CONFIG_ENV`], else
    /// returns defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Config::default()),
            },
        }
    }
}
