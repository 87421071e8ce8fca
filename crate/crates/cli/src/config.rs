//! `--config` file schema. Every section and key is optional; command-line
//! flags override file values.
//!
//! ```toml
//! [paths]
//! mesh_dir = "meshes"
//! gf = "out/gf.jsonl"
//! clips = "clips.jsonl"
//! mos = "mos.csv"
//! manifest = "manifest.csv"
//! model = "out/head.json"
//! out_dir = "out"
//!
//! [geometry]
//! area = "mixed"            # or "barycentric"
//! dump_histogram = "out/hist"
//!
//! [training]
//! learning_rate = 4e-6
//! epochs = 30
//! batch_size = 4
//! seed = 0
//! hidden_dim = 128
//!
//! [evaluation]
//! logistic = false
//! clip_target = 6
//! seed = 0
//! allow_any_even_groups = false
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context;
use ddhqa::evaluation::DEFAULT_CLIP_TARGET;
use ddhqa::geometry::AreaMode;
use ddhqa::TrainingConfig;
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub paths: Paths,
    pub geometry: GeometryOptions,
    pub training: TrainingConfig,
    pub evaluation: EvaluationOptions,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub mesh_dir: Option<PathBuf>,
    pub gf: Option<PathBuf>,
    pub clips: Option<PathBuf>,
    pub mos: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryOptions {
    pub area: AreaMode,
    #[serde(skip_serializing)]
    pub dump_histogram: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationOptions {
    pub logistic: bool,
    pub clip_target: usize,
    /// Seeds the motion-group fold assignment.
    pub seed: u64,
    pub allow_any_even_groups: bool,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        EvaluationOptions {
            logistic: false,
            clip_target: DEFAULT_CLIP_TARGET,
            seed: 0,
            allow_any_even_groups: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<RunConfig> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = toml::from_str(&text)
            .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))?;
        Ok(config)
    }
}

/// Resolves a required path from a flag or the config file.
pub fn require(
    flag: &Option<PathBuf>,
    config: &Option<PathBuf>,
    name: &str,
) -> anyhow::Result<PathBuf> {
    flag.clone().or_else(|| config.clone()).ok_or_else(|| {
        UsageError(format!(
            "missing --{name} (or paths.{} in the config file)",
            name.replace('-', "_")
        ))
        .into()
    })
}

pub fn existing(path: PathBuf) -> anyhow::Result<PathBuf> {
    if path.exists() {
        Ok(path)
    } else {
        Err(UsageError(format!("{} does not exist", path.display())).into())
    }
}

pub fn create_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}
