//! Runtime settings: defaults, optional TOML config file, environment
//! overrides. Command-line flags take precedence over everything here.

use std::path::Path;

use anyhow::Context;
use serde::Deserialize;
use xxz_asm::bethe::{RootConfig, Tolerances, DEFAULT_SEED};

/// Environment variable holding the default bit precision.
pub const PRECISION_ENV: &str = "XXZ_ASM_PRECISION";
/// Environment variable pointing at a config file.
pub const CONFIG_ENV: &str = "XXZ_ASM_CONFIG";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    precision: Option<u32>,
    seed: Option<u64>,
    #[serde(default)]
    tolerances: FileTolerances,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    residual: Option<f64>,
    pairing: Option<f64>,
    energy: Option<f64>,
    transfer: Option<f64>,
    oracle_relative: Option<f64>,
}

/// Resolved settings for the numeric subcommands.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    /// Default bit precision for root output, when requested.
    pub precision: Option<u32>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Settings {
    pub fn root_config(&self) -> RootConfig {
        RootConfig {
            seed: self.seed,
            ..RootConfig::default()
        }
    }
}

/// Defaults, overridden by the config file (flag or `XXZ_ASM_CONFIG`),
/// then by `XXZ_ASM_PRECISION`.
pub fn resolve(config_flag: Option<&Path>) -> anyhow::Result<Settings> {
    let mut settings = Settings {
        precision: None,
        seed: DEFAULT_SEED,
        tolerances: Tolerances::default(),
    };
    let env_path = std::env::var(CONFIG_ENV).ok();
    let path = config_flag.or_else(|| env_path.as_deref().map(Path::new));
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: FileConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(p) = file.precision {
            settings.precision = Some(p);
        }
        if let Some(s) = file.seed {
            settings.seed = s;
        }
        let t = &file.tolerances;
        if let Some(v) = t.residual {
            settings.tolerances.residual = v;
        }
        if let Some(v) = t.pairing {
            settings.tolerances.pairing = v;
        }
        if let Some(v) = t.energy {
            settings.tolerances.energy = v;
        }
        if let Some(v) = t.transfer {
            settings.tolerances.transfer = v;
        }
        if let Some(v) = t.oracle_relative {
            settings.tolerances.oracle_relative = v;
        }
    }
    if let Ok(value) = std::env::var(PRECISION_ENV) {
        let bits: u32 = value
            .parse()
            .with_context(|| format!("{PRECISION_ENV} must be a bit count, got {value:?}"))?;
        settings.precision = Some(bits);
    }
    Ok(settings)
}
