use crate::community::NullModel;
use crate::dataset::DatasetConfig;
use crate::error::{Error, Result};
use crate::eval::DEFAULT_KS;
use crate::features::{Variant, DEFAULT_D_CAT};
use crate::forest::ForestParams;
use crate::meta::FilterPolicy;
use crate::sage::SageHyper;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the default workspace root.
pub const WORKSPACE_ENV: &str = "COPURCHASE_WORKSPACE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StatsConfig {
    /// Smallest degree included in the power-law fits.
    pub k_min: usize,
}

impl Default for StatsConfig {
    fn default() -> Self {
        Self { k_min: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
#[derive(Default)]
pub struct CommunityConfig {
    pub louvain_seed: u64,
    pub null_model: NullModel,
}


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitConfig {
    pub train_fraction: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self { train_fraction: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub n: usize,
    pub ks: Vec<usize>,
    /// Number of BFS subgraphs (seeds `seed .. seed + repeats`).
    pub repeats: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            ks: DEFAULT_KS.to_vec(),
            repeats: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Metadata dump (plain text or gzip).
    pub dataset: PathBuf,
    pub workspace: PathBuf,
    pub seed: u64,
    pub d_cat: usize,
    pub variant: Variant,
    pub filter: FilterPolicy,
    pub pairs: DatasetConfig,
    pub split: SplitConfig,
    pub forest: ForestParams,
    pub sage: SageHyper,
    pub stats: StatsConfig,
    pub communities: CommunityConfig,
    pub eval: EvalConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            dataset: PathBuf::from("amazon-meta.txt.gz"),
            workspace: std::env::var_os(WORKSPACE_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("workspace")),
            seed: 0,
            d_cat: DEFAULT_D_CAT,
            variant: Variant::Full,
            filter: FilterPolicy::default(),
            pairs: DatasetConfig::default(),
            split: SplitConfig::default(),
            forest: ForestParams::default(),
            sage: SageHyper::default(),
            stats: StatsConfig::default(),
            communities: CommunityConfig::default(),
            eval: EvalConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }

    /// Keeps the per-model settings consistent with the top-level ones.
    pub fn resolved(mut self) -> Result<Self> {
        if self.d_cat == 0 || self.d_cat > crate::features::MAX_DEPTH {
            return Err(Error::invalid(format!("d_cat must be in 1..={}", crate::features::MAX_DEPTH)));
        }
        self.sage.d_cat = self.d_cat;
        self.sage.validate()?;
        if self.eval.repeats == 0 {
            return Err(Error::invalid("eval.repeats must be at least 1"));
        }
        Ok(self)
    }

    pub fn eval_seeds(&self) -> Vec<u64> {
        (0..self.eval.repeats as u64).map(|i| self.seed + i).collect()
    }
}
