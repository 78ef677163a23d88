use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

/// Keys accepted in the TOML configuration file. Every key is optional and
/// loses to the matching command-line flag.
#[derive(Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub definition: Option<PathBuf>,
    #[serde(default)]
    pub data: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub vocab_propdefs: Option<String>,
    pub vocab_enumroot: Option<String>,
    pub report: Option<String>,
    pub frame_depth: Option<usize>,
    pub viz_format: Option<String>,
}

impl FileConfig {
    /// Relative paths in the file are taken relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut config: FileConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        config.definition.iter_mut().for_each(rebase);
        config.out.iter_mut().for_each(rebase);
        config.data.iter_mut().for_each(rebase);
        Ok(config)
    }
}
