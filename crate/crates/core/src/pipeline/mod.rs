//! Staged, manifest-tracked pipeline behind the command-line tool.
//!
//! Each stage reads verified artifacts from upstream stage directories and
//! writes its own artifacts plus `manifest.json` (input and output hashes,
//! seed, resolved config, tool version) and `config.toml`. Primary artifacts
//! are deterministic for a given config and input.

mod config;
mod manifest;
mod stages;

pub use config::{CommunityConfig, EvalConfig, PipelineConfig, SplitConfig, StatsConfig, WORKSPACE_ENV};
pub use manifest::{hash_entry, sha256_file, FileHash, Manifest, MANIFEST_FILE};
pub use stages::*;
