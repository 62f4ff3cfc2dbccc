use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::annotations::ScanConfig;
use crate::smells::SmellConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Lowest severity that makes a command exit with status 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FailOn {
    Error,
    Warning,
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub arch: Option<PathBuf>,
    pub roots: Vec<PathBuf>,
    pub scan: ScanConfig,
    pub smells: SmellConfig,
    pub format: Format,
    pub fail_on: FailOn,
}

/// Reads a `key = value` configuration file into the scan and smell
/// settings. `#` starts a comment line.
pub fn load_config_file(path: &Path, scan: &mut ScanConfig, smells: &mut SmellConfig) -> Result<(), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config `{}`: {e}", path.display()))?;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |message: String| format!("{}:{}: {message}", path.display(), idx + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "scatter_threshold" => {
                let n = value.parse().map_err(|_| at(format!("`{value}` is not a number")))?;
                smells.set_scatter_threshold(n).map_err(at)?;
            }
            "smells" => smells.set_enabled(value).map_err(at)?,
            _ => {
                if !scan.set(key, value).map_err(|e| at(e.to_string()))? {
                    return Err(at(format!("unknown setting `{key}`")));
                }
            }
        }
    }
    Ok(())
}
