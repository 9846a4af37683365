use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;

pub const CONFIG_ENV: &str = "SIEGEL_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub threads: usize,
    pub output: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 20,
            tol: 1e-9,
            threads: 1,
            output: Output::Json,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.trials < 1 {
            bail!("trials must be at least 1");
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            bail!("tol must be positive");
        }
        if self.threads < 1 {
            bail!("threads must be at least 1");
        }
        Ok(())
    }
}
