//! Report rows, summaries and the CSV / JSON writers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CampaignConfig, CampaignKind, HarnessError, OutputFormat};
use crate::graph::{encode_graph, Format, Graph};

/// Certificates above this size go to side files in JSON reports.
pub const INLINE_CERT_LIMIT: usize = 64 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowStatus {
    Ok,
    Counterexample,
    /// An internal cross-check failed.
    Inconsistent,
    Error,
}

/// One row of a campaign report. Columns that do not apply are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: u64,
    pub subject: String,
    pub graph_hash: Option<String>,
    pub graph6: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub hypotheses: Option<String>,
    pub hypotheses_pass: Option<bool>,
    pub rho_lo: Option<f64>,
    pub rho_hi: Option<f64>,
    pub threshold_lo: Option<f64>,
    pub threshold_hi: Option<f64>,
    pub comparison: Option<String>,
    pub refined: Option<bool>,
    pub chain_check: Option<String>,
    pub conclusion: Option<String>,
    pub basis: Option<String>,
    pub status: RowStatus,
    pub detail: String,
    pub wall_ms: Option<f64>,
    #[serde(skip)]
    pub certificate: Option<serde_json::Value>,
}

impl ReportRow {
    pub fn new(id: u64, subject: impl Into<String>) -> Self {
        Self {
            id,
            subject: subject.into(),
            graph_hash: None,
            graph6: None,
            n: None,
            m: None,
            k: None,
            d: None,
            hypotheses: None,
            hypotheses_pass: None,
            rho_lo: None,
            rho_hi: None,
            threshold_lo: None,
            threshold_hi: None,
            comparison: None,
            refined: None,
            chain_check: None,
            conclusion: None,
            basis: None,
            status: RowStatus::Ok,
            detail: String::new(),
            wall_ms: None,
            certificate: None,
        }
    }

    pub fn with_graph(mut self, g: &Graph) -> Self {
        self.graph_hash = Some(graph_hash(g));
        self.graph6 = Some(graph6_string(g));
        self.n = Some(g.n());
        self.m = Some(g.m());
        self
    }
}

fn graph6_string(g: &Graph) -> String {
    let mut bytes = encode_graph(g, Format::Graph6).expect("campaign graphs fit graph6");
    bytes.pop();
    String::from_utf8(bytes).expect("graph6 is ASCII")
}

/// SHA-256 of the graph6 encoding, in hex.
pub fn graph_hash(g: &Graph) -> String {
    let digest = Sha256::digest(graph6_string(g).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub ok: usize,
    pub counterexamples: usize,
    pub inconsistencies: usize,
    pub errors: usize,
    pub hypotheses_passed: usize,
    pub spectral_passed: usize,
    pub indeterminate: usize,
    pub verified: usize,
    pub refuted: usize,
    pub unknown: usize,
}

/// Counts for one `(k, n)` configuration.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub samples: usize,
    pub hypotheses_passed: usize,
    pub spectral_passed: usize,
    pub verified: usize,
    pub refuted: usize,
    pub unknown: usize,
    pub counterexamples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub campaign: CampaignKind,
    pub summary: Summary,
    pub groups: Vec<GroupSummary>,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new(campaign: CampaignKind, mut rows: Vec<ReportRow>) -> Self {
        rows.sort_by_key(|r| r.id);
        let mut summary = Summary {
            rows: rows.len(),
            ..Summary::default()
        };
        let mut groups: BTreeMap<(Option<usize>, Option<usize>), GroupSummary> = BTreeMap::new();
        for r in &rows {
            match r.status {
                RowStatus::Ok => summary.ok += 1,
                RowStatus::Counterexample => summary.counterexamples += 1,
                RowStatus::Inconsistent => summary.inconsistencies += 1,
                RowStatus::Error => summary.errors += 1,
            }
            let hyp = r.hypotheses_pass == Some(true);
            let spectral = r.comparison.as_deref() == Some("HOLDS");
            let conclusion = r.conclusion.as_deref();
            summary.hypotheses_passed += hyp as usize;
            summary.spectral_passed += (hyp && spectral) as usize;
            summary.indeterminate += (r.comparison.as_deref() == Some("INDETERMINATE")) as usize;
            summary.verified += (conclusion == Some("VERIFIED")) as usize;
            summary.refuted += (conclusion == Some("REFUTED")) as usize;
            summary.unknown += (conclusion == Some("UNKNOWN")) as usize;

            let g = groups.entry((r.k, r.n)).or_insert_with(|| GroupSummary {
                k: r.k,
                n: r.n,
                ..GroupSummary::default()
            });
            g.samples += 1;
            g.hypotheses_passed += hyp as usize;
            g.spectral_passed += (hyp && spectral) as usize;
            g.verified += (conclusion == Some("VERIFIED")) as usize;
            g.refuted += (conclusion == Some("REFUTED")) as usize;
            g.unknown += (conclusion == Some("UNKNOWN")) as usize;
            g.counterexamples += (r.status == RowStatus::Counterexample) as usize;
        }
        Self {
            campaign,
            summary,
            groups: groups.into_values().collect(),
            rows,
        }
    }

    /// 0 when there are no counterexamples and no failed cross-checks, else 1.
    pub fn exit_code(&self) -> i32 {
        if self.summary.counterexamples == 0 && self.summary.inconsistencies == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.into_inner()
            .map_err(|e| HarnessError::Io(e.into_error()))
    }

    /// JSON report. Certificates larger than [`INLINE_CERT_LIMIT`] are
    /// written under `side_dir` and referenced by relative path; without a
    /// side directory they are inlined regardless of size.
    pub fn to_json(
        &self,
        config: Option<&CampaignConfig>,
        side_dir: Option<&Path>,
    ) -> Result<Vec<u8>, HarnessError> {
        #[derive(Serialize)]
        struct JsonRow<'a> {
            #[serde(flatten)]
            row: &'a ReportRow,
            certificate: Option<serde_json::Value>,
        }
        #[derive(Serialize)]
        struct JsonReport<'a> {
            campaign: CampaignKind,
            config: Option<&'a CampaignConfig>,
            summary: &'a Summary,
            groups: &'a [GroupSummary],
            rows: Vec<JsonRow<'a>>,
        }
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let certificate = match (&row.certificate, side_dir) {
                (Some(cert), Some(dir)) => {
                    let bytes = serde_json::to_vec(cert)?;
                    if bytes.len() > INLINE_CERT_LIMIT {
                        fs::create_dir_all(dir)?;
                        let name = format!("row-{}.json", row.id);
                        fs::write(dir.join(&name), bytes)?;
                        let rel: PathBuf = dir.file_name().map(PathBuf::from).unwrap_or_default();
                        Some(serde_json::json!({ "file": rel.join(name) }))
                    } else {
                        Some(cert.clone())
                    }
                }
                (cert, _) => cert.clone(),
            };
            rows.push(JsonRow { row, certificate });
        }
        let report = JsonReport {
            campaign: self.campaign,
            config,
            summary: &self.summary,
            groups: &self.groups,
            rows,
        };
        let mut out = serde_json::to_vec_pretty(&report)?;
        out.push(b'\n');
        Ok(out)
    }

    /// Writes the report to `path`; JSON side files go to `<stem>.certs/`.
    pub fn write(
        &self,
        path: &Path,
        format: OutputFormat,
        config: Option<&CampaignConfig>,
    ) -> Result<(), HarnessError> {
        let bytes = match format {
            OutputFormat::Csv => self.to_csv()?,
            OutputFormat::Json => {
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
                let side = path.with_file_name(format!("{stem}.certs"));
                self.to_json(config, Some(&side))?
            }
        };
        fs::write(path, bytes)?;
        Ok(())
    }
}
