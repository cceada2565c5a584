//! Analysis requests read from TOML files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{CoverGroup, RamificationProfile, Symbol};
use crate::decomposition::Flags;
use crate::monodromy::{SearchMode, SearchOptions, DEFAULT_BUDGET};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown group {0:?}")]
    Group(String),
    #[error("unknown branch symbol {0:?}")]
    Symbol(String),
    #[error("symbol {symbol} is not used by group {group}")]
    ForeignSymbol { symbol: String, group: CoverGroup },
    #[error("flag {flag} is not consumed by group {group}")]
    Flag { flag: &'static str, group: CoverGroup },
    #[error("zeta must be 0 or 1, got {0}")]
    Zeta(u8),
    #[error("budget must be positive")]
    Budget,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRequest {
    group: String,
    #[serde(default)]
    g: u32,
    #[serde(default)]
    counts: BTreeMap<String, u32>,
    #[serde(default)]
    flags: Flags,
    #[serde(default)]
    want_witness: bool,
    #[serde(default)]
    budget: Option<u64>,
    #[serde(default)]
    mode: Option<SearchMode>,
    #[serde(default)]
    parallel: bool,
}

/// A validated request: profile, case flags and search settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisRequest {
    pub profile: RamificationProfile,
    pub flags: Flags,
    pub want_witness: bool,
    pub budget: u64,
    pub mode: SearchMode,
    pub parallel: bool,
}

impl AnalysisRequest {
    pub fn new(profile: RamificationProfile) -> AnalysisRequest {
        AnalysisRequest {
            profile,
            flags: Flags::default(),
            want_witness: false,
            budget: DEFAULT_BUDGET,
            mode: SearchMode::GaloisImage,
            parallel: false,
        }
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions { mode: self.mode, budget: self.budget, parallel: self.parallel }
    }

    pub fn from_toml(src: &str) -> Result<AnalysisRequest, ConfigError> {
        let raw: RawRequest = toml::from_str(src).map_err(|e| ConfigError::Syntax(e.message().to_string()))?;
        let group: CoverGroup = raw.group.parse().map_err(|_| ConfigError::Group(raw.group.clone()))?;
        let mut counts = Vec::new();
        for (key, n) in &raw.counts {
            let sym = Symbol::from_key(key).ok_or_else(|| ConfigError::Symbol(key.clone()))?;
            if !group.symbols().contains(&sym) {
                return Err(ConfigError::ForeignSymbol { symbol: key.clone(), group });
            }
            counts.push((sym, *n));
        }
        let profile = RamificationProfile::new(group, raw.g, &counts).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        raw.flags.check_for(group).map_err(|e| match e {
            crate::decomposition::DecompError::UnusedFlag { flag, group } => ConfigError::Flag { flag, group },
            crate::decomposition::DecompError::BadZeta(z) => ConfigError::Zeta(z),
            other => ConfigError::Syntax(other.to_string()),
        })?;
        let budget = raw.budget.unwrap_or(DEFAULT_BUDGET);
        if budget == 0 {
            return Err(ConfigError::Budget);
        }
        Ok(AnalysisRequest {
            profile,
            flags: raw.flags,
            want_witness: raw.want_witness,
            budget,
            mode: raw.mode.unwrap_or(SearchMode::GaloisImage),
            parallel: raw.parallel,
        })
    }

    pub fn from_path(path: &Path) -> Result<AnalysisRequest, ConfigError> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        AnalysisRequest::from_toml(&src)
    }
}
