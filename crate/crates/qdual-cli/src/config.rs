use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::{CliError, Format, GlobalArgs};

pub const CONFIG_ENV: &str = "QDUAL_CONFIG";

/// Optional defaults file. Any field left out falls back to the built-in value.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q: Option<f64>,
    eps: Option<f64>,
    tolerance: Option<f64>,
    max_terms: Option<usize>,
    format: Option<Format>,
}

/// Settings after merging flags over the config file over the built-ins.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub q: f64,
    pub eps: f64,
    pub tolerance: f64,
    pub max_terms: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => load(Path::new(&p))?,
            _ => FileConfig::default(),
        };
        let cfg = Self {
            q: args.q.or(file.q).unwrap_or(0.5),
            eps: args.eps.or(file.eps).unwrap_or(1e-12),
            tolerance: args.tol.or(file.tolerance).unwrap_or(1e-9),
            max_terms: args.max_terms.or(file.max_terms).unwrap_or(10_000),
            output: args.output.clone(),
            format: args.format.or(file.format).unwrap_or(Format::Json),
        };
        if !(cfg.tolerance > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {}", cfg.tolerance)));
        }
        Ok(cfg)
    }
}
