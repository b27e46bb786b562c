//! Verification campaigns over generated instances, and their reports.

mod campaigns;
pub mod comb;
mod generate;
mod report;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::DEFAULT_TOL;
use crate::graph::GraphError;
use crate::packing::DEFAULT_MAX_ENUM_N;

pub use campaigns::{check_comb_lemmas, run_campaign};
pub use generate::{
    enumerate_small_graphs, enumerate_small_graphs_strided, graph_from_mask, instance_seed,
    random_graph, splitmix64, RandomModel, MAX_ENUM_GRAPH_N, MAX_RETRIES,
};
pub use report::{graph_hash, GroupSummary, Report, ReportRow, RowStatus, Summary};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),
    #[error("no connected graph after {retries} attempts")]
    GenerationFailed { retries: usize },
    #[error("n = {n} exceeds the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignKind {
    ThmMain1,
    ThmMain2,
    LemmaBounds,
    FangYang,
    TreePackingEquiv,
    CombLemmas,
}

impl CampaignKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CampaignKind::ThmMain1 => "thm_main1",
            CampaignKind::ThmMain2 => "thm_main2",
            CampaignKind::LemmaBounds => "lemma_bounds",
            CampaignKind::FangYang => "fang_yang",
            CampaignKind::TreePackingEquiv => "tree_packing_equiv",
            CampaignKind::CombLemmas => "comb_lemmas",
        }
    }
}

/// A set of integers: either an explicit list `[12, 14]` or an inclusive
/// range `{"from": 2, "to": 6}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntSet {
    List(Vec<usize>),
    Range { from: usize, to: usize },
}

impl IntSet {
    pub fn values(&self) -> Vec<usize> {
        match self {
            IntSet::List(v) => v.clone(),
            IntSet::Range { from, to } => (*from..=*to).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_samples() -> usize {
    100
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_max_enum_n() -> usize {
    DEFAULT_MAX_ENUM_N
}
fn default_stride() -> usize {
    1
}
fn default_a_max() -> usize {
    200
}
fn default_s_max() -> usize {
    5
}
fn default_value_max() -> usize {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub campaign: CampaignKind,
    #[serde(default)]
    pub k_range: Option<IntSet>,
    #[serde(default)]
    pub n_range: Option<IntSet>,
    /// `d` values for the fang_yang campaign.
    #[serde(default)]
    pub d_range: Option<IntSet>,
    #[serde(default = "default_samples")]
    pub sample_count: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_enum_n")]
    pub max_enum_n: usize,
    /// Keep every `stride`-th graph in exhaustive enumerations.
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_a_max")]
    pub a_max: usize,
    #[serde(default = "default_s_max")]
    pub s_max: usize,
    #[serde(default = "default_value_max")]
    pub value_max: usize,
    /// Record per-row wall time. Off by default so reports are reproducible
    /// byte for byte.
    #[serde(default)]
    pub include_timing: bool,
    #[serde(default)]
    pub output: OutputConfig,
}

impl CampaignConfig {
    pub fn new(campaign: CampaignKind) -> Self {
        serde_json::from_value(serde_json::json!({ "campaign": campaign }))
            .expect("defaults deserialize")
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn ks(&self) -> Vec<usize> {
        match &self.k_range {
            Some(s) => s.values(),
            None => match self.campaign {
                CampaignKind::ThmMain1 | CampaignKind::ThmMain2 => vec![2],
                CampaignKind::LemmaBounds => vec![2, 3, 4, 5],
                CampaignKind::FangYang => vec![1, 2],
                CampaignKind::TreePackingEquiv => vec![1, 2, 3],
                CampaignKind::CombLemmas => Vec::new(),
            },
        }
    }

    /// `None` for lemma_bounds means "from the hypothesis bound to 40".
    pub fn ns(&self) -> Option<Vec<usize>> {
        match &self.n_range {
            Some(s) => Some(s.values()),
            None => match self.campaign {
                CampaignKind::ThmMain1 => Some(vec![12, 14]),
                CampaignKind::ThmMain2 => Some(vec![16, 20]),
                CampaignKind::FangYang | CampaignKind::TreePackingEquiv => {
                    Some((2..=6).collect())
                }
                CampaignKind::LemmaBounds | CampaignKind::CombLemmas => None,
            },
        }
    }

    pub fn ds(&self) -> Vec<usize> {
        self.d_range
            .as_ref()
            .map_or_else(|| vec![1, 2, 3], IntSet::values)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::InvalidConfig(m));
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.stride == 0 {
            return bad("stride must be at least 1".into());
        }
        if self.ks().contains(&0) || self.ds().contains(&0) {
            return bad("k and d values must be at least 1".into());
        }
        if self.campaign != CampaignKind::CombLemmas && self.ks().is_empty() {
            return bad("k_range is empty".into());
        }
        match self.campaign {
            CampaignKind::FangYang | CampaignKind::TreePackingEquiv => {
                let ns = self.ns().unwrap_or_default();
                if let Some(&n) = ns.iter().find(|&&n| !(2..=MAX_ENUM_GRAPH_N).contains(&n)) {
                    return bad(format!("exhaustive n must lie in [2, {MAX_ENUM_GRAPH_N}], got {n}"));
                }
            }
            CampaignKind::ThmMain1 | CampaignKind::ThmMain2 => {
                if self.ns().unwrap_or_default().iter().any(|&n| n < 2) {
                    return bad("n must be at least 2".into());
                }
            }
            CampaignKind::CombLemmas => {
                if self.a_max == 0 || self.s_max == 0 || self.value_max == 0 {
                    return bad("a_max, s_max and value_max must be at least 1".into());
                }
            }
            CampaignKind::LemmaBounds => {}
        }
        Ok(())
    }
}
