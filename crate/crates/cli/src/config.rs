//! Run configuration: defaults, then a TOML file, then command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use conesphere::quadrature::QuadratureConfig;
use conesphere::Tolerances;
use serde::{Deserialize, Serialize};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "CONESPHERE_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub quadrature: QuadratureConfig,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub sequential: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: Tolerances::default(),
            quadrature: QuadratureConfig::default(),
            seed: conesphere::verify::VerifyConfig::default().seed,
            output_format: OutputFormat::default(),
            output_path: None,
            sequential: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file() {
        let cfg: RunConfig =
            toml::from_str("seed = 7\noutput_format = \"csv\"\n[tolerances]\nclassify = 1e-8\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.output_format, OutputFormat::Csv);
        assert_eq!(cfg.tolerances.classify, 1e-8);
        assert_eq!(cfg.tolerances.residual, Tolerances::default().residual);
        assert!(toml::from_str::<RunConfig>("sede = 1").is_err());
    }
}
