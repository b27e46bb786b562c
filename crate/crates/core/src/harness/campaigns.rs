//! Campaign runners.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::comb::{check_binomial_shift, check_product_sum};
use super::generate::{enumerate_small_graphs_strided, instance_seed, random_graph, RandomModel};
use super::report::{Report, ReportRow, RowStatus};
use super::{CampaignConfig, CampaignKind, HarnessError};
use crate::distance::{apsp, compare_le, edge_chain_check, rho_d, ChainCheck, Comparison};
use crate::extremal::{
    check_lemma_bounds, exact_rho_extremal, ExtremalFamily, ExtremalRho, ExtremalSpec, Verdict,
};
use crate::graph::Graph;
use crate::packing::{
    fang_yang_check, nu_f_exact, tau_packing, validate_p_certificate,
    validate_packing_certificate, FangYang, PVerdict, PackingCertificate, Refutation,
    SearchBudget, Tier,
};
use crate::rational::Rational;

pub fn run_campaign(config: &CampaignConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let rows = match config.campaign {
        CampaignKind::ThmMain1 => theorem_campaign(config, ExtremalFamily::G1Join)?,
        CampaignKind::ThmMain2 => theorem_campaign(config, ExtremalFamily::G2Bipartite)?,
        CampaignKind::LemmaBounds => lemma_bounds_campaign(config),
        CampaignKind::FangYang => exhaustive_campaign(config, fang_yang_row)?,
        CampaignKind::TreePackingEquiv => exhaustive_campaign(config, equivalence_row)?,
        CampaignKind::CombLemmas => comb_rows(config.a_max, config.s_max, config.value_max),
    };
    Ok(Report::new(config.campaign, rows))
}

pub fn check_comb_lemmas(a_max: usize, s_max: usize, value_max: usize) -> Report {
    Report::new(CampaignKind::CombLemmas, comb_rows(a_max, s_max, value_max))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn elapsed_ms(start: Instant, enabled: bool) -> Option<f64> {
    enabled.then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn budget(config: &CampaignConfig) -> SearchBudget {
    SearchBudget {
        max_enum_n: config.max_enum_n,
        ..SearchBudget::default()
    }
}

struct TheoremContext<'a> {
    config: &'a CampaignConfig,
    family: ExtremalFamily,
    model: RandomModel,
    thresholds: HashMap<(usize, usize), Result<ExtremalRho, String>>,
}

fn theorem_campaign(
    config: &CampaignConfig,
    family: ExtremalFamily,
) -> Result<Vec<ReportRow>, HarnessError> {
    let model = match family {
        ExtremalFamily::G1Join => RandomModel::Gnp,
        ExtremalFamily::G2Bipartite => RandomModel::BipartiteGnp,
    };
    let ks = config.ks();
    let ns = config.ns().unwrap_or_default();
    let mut jobs = Vec::new();
    let mut thresholds = HashMap::new();
    for &k in &ks {
        for &n in &ns {
            let spec = ExtremalSpec::new(family, k, n);
            thresholds.insert(
                (k, n),
                exact_rho_extremal(&spec, config.tol).map_err(|e| e.to_string()),
            );
            for _ in 0..config.sample_count {
                jobs.push((jobs.len() as u64, k, n));
            }
        }
    }
    let ctx = TheoremContext {
        config,
        family,
        model,
        thresholds,
    };
    Ok(jobs
        .par_iter()
        .map(|&(id, k, n)| theorem_row(&ctx, id, k, n))
        .collect())
}

fn theorem_row(ctx: &TheoremContext<'_>, id: u64, k: usize, n: usize) -> ReportRow {
    let start = Instant::now();
    let config = ctx.config;
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(config.seed, id));
    let c: f64 = rng.gen_range(0.25..2.0);
    let p = (1.0 - c / n as f64).clamp(0.05, 0.99);
    let graph_seed: u64 = rng.gen();
    let delta_min = match ctx.model {
        RandomModel::Gnp => (k + 2).min(n.saturating_sub(1)),
        RandomModel::BipartiteGnp => (k + 2).min(n / 2),
    };
    let mut row = ReportRow::new(id, ctx.model.as_str());
    row.k = Some(k);
    row.n = Some(n);
    let g = match random_graph(n, delta_min, ctx.model, p, graph_seed) {
        Ok(g) => g,
        Err(e) => {
            row.status = RowStatus::Error;
            row.detail = format!("generation failed: {e}");
            row.wall_ms = elapsed_ms(start, config.include_timing);
            return row;
        }
    };
    row = row.with_graph(&g);
    theorem_checks(ctx, &g, k, &mut row);
    row.wall_ms = elapsed_ms(start, config.include_timing);
    row
}

fn theorem_checks(ctx: &TheoremContext<'_>, g: &Graph, k: usize, row: &mut ReportRow) {
    let config = ctx.config;
    let n = g.n();
    let prof = g.classify();
    let delta = prof.min_degree;
    row.d = Some(delta);
    let mut hyps = vec![
        ("k_at_least_2", k >= 2),
        ("connected", prof.is_connected),
    ];
    match ctx.family {
        ExtremalFamily::G1Join => hyps.push(("order", n >= 2 * k + 8)),
        ExtremalFamily::G2Bipartite => {
            hyps.push(("order", n >= 4 * k + 8));
            hyps.push(("balanced_bipartite", prof.is_balanced_bipartite));
        }
    }
    hyps.push(("min_degree", delta >= k + 2));
    let all_pass = hyps.iter().all(|h| h.1);
    row.hypotheses = Some(
        hyps.iter()
            .map(|(name, ok)| format!("{name}={}", pass(*ok)))
            .collect::<Vec<_>>()
            .join(";"),
    );
    row.hypotheses_pass = Some(all_pass);
    row.conclusion = Some("NOT_APPLICABLE".into());
    if !prof.is_connected {
        return;
    }

    let dm = match apsp(g) {
        Ok(dm) => dm,
        Err(e) => return error(row, e.to_string()),
    };
    let mut est = match rho_d(&dm, config.tol) {
        Ok(est) => est,
        Err(e) => return error(row, e.to_string()),
    };
    let chain = edge_chain_check(n, g.m(), &est, ctx.family.bound_mode());
    row.chain_check = Some(chain.as_str().into());
    if chain == ChainCheck::Violated {
        row.status = RowStatus::Inconsistent;
        row.detail = "edge count below the bound implied by the spectral ceiling".into();
    }
    let mut threshold = match &ctx.thresholds[&(k, n)] {
        Ok(t) => t.estimate,
        Err(e) => {
            row.rho_lo = Some(est.lo);
            row.rho_hi = Some(est.hi);
            if all_pass {
                error(row, format!("threshold: {e}"));
            }
            return;
        }
    };
    let mut cmp = compare_le(&est, &threshold);
    row.refined = Some(false);
    if cmp == Comparison::Indeterminate {
        let tol = config.tol / 100.0;
        let spec = ExtremalSpec::new(ctx.family, k, n);
        if let (Ok(e2), Ok(t2)) = (rho_d(&dm, tol), exact_rho_extremal(&spec, tol)) {
            est = e2;
            threshold = t2.estimate;
            cmp = compare_le(&est, &threshold);
        }
        row.refined = Some(true);
    }
    row.rho_lo = Some(est.lo);
    row.rho_hi = Some(est.hi);
    row.threshold_lo = Some(threshold.lo);
    row.threshold_hi = Some(threshold.hi);
    row.comparison = Some(cmp.as_str().into());
    if !(all_pass && cmp == Comparison::Holds) {
        return;
    }

    match crate::packing::verify_p(g, k, delta, &budget(config)) {
        Ok(PVerdict::Verified(cert)) => {
            row.conclusion = Some("VERIFIED".into());
            row.basis = Some(tier_name(cert.basis.tier).into());
            if let Err(e) = validate_p_certificate(g, k, delta, &cert) {
                row.status = RowStatus::Inconsistent;
                row.detail = format!("certificate failed revalidation: {e}");
            }
            row.certificate = serde_json::to_value(&cert).ok();
        }
        Ok(PVerdict::Refuted(r)) => {
            row.conclusion = Some("REFUTED".into());
            row.basis = Some(refutation_name(&r).into());
            row.status = RowStatus::Counterexample;
            row.detail = "all hypotheses PASS, comparison certified, property refuted".into();
            row.certificate = serde_json::to_value(&r).ok();
        }
        Ok(PVerdict::Unknown { reason }) => {
            row.conclusion = Some("UNKNOWN".into());
            row.detail = reason;
        }
        Err(e) => error(row, e.to_string()),
    }
}

fn error(row: &mut ReportRow, detail: String) {
    row.status = RowStatus::Error;
    row.detail = detail;
}

fn tier_name(t: Tier) -> &'static str {
    match t {
        Tier::Surplus => "surplus_tree",
        Tier::Constructive => "constructive",
        Tier::Exhaustive => "exhaustive",
    }
}

fn refutation_name(r: &Refutation) -> &'static str {
    match r {
        Refutation::Exhaustive { .. } => "exhaustive",
        Refutation::NoTreePacking { .. } => "no_tree_packing",
    }
}

fn exhaustive_campaign(
    config: &CampaignConfig,
    row_fn: fn(&CampaignConfig, u64, &Graph) -> ReportRow,
) -> Result<Vec<ReportRow>, HarnessError> {
    let mut graphs = Vec::new();
    for n in config.ns().unwrap_or_default() {
        graphs.extend(enumerate_small_graphs_strided(n, true, config.stride)?);
    }
    Ok(graphs
        .par_iter()
        .enumerate()
        .map(|(id, g)| {
            let start = Instant::now();
            let mut row = row_fn(config, id as u64, g);
            row.wall_ms = elapsed_ms(start, config.include_timing);
            row
        })
        .collect())
}

fn equivalence_row(config: &CampaignConfig, id: u64, g: &Graph) -> ReportRow {
    let mut row = ReportRow::new(id, "exhaustive").with_graph(g);
    let nu = match nu_f_exact(g, config.max_enum_n) {
        Ok((nu, _)) => nu,
        Err(e) => {
            error(&mut row, e.to_string());
            return row;
        }
    };
    row.basis = Some(format!("nu_f={nu}"));
    let mut parts = Vec::new();
    let mut mismatch = false;
    let mut tau = 0;
    for k in config.ks() {
        let cert = match tau_packing(g, k) {
            Ok(c) => c,
            Err(e) => {
                error(&mut row, format!("k={k}: {e}"));
                return row;
            }
        };
        if let Err(e) = validate_packing_certificate(g, &cert, k) {
            mismatch = true;
            parts.push(format!("k={k}:invalid({e})"));
            continue;
        }
        let trees = cert.is_trees();
        if trees {
            tau = tau.max(k);
        }
        if trees != (nu >= Rational::from_integer(k as i64)) {
            mismatch = true;
        }
        parts.push(match cert {
            PackingCertificate::TreesFound { .. } => format!("k={k}:trees"),
            PackingCertificate::ViolatingPartition { witness } => {
                format!("k={k}:partition({})", witness.objective)
            }
        });
    }
    row.conclusion = Some(if mismatch { "MISMATCH" } else { "MATCH" }.into());
    row.detail = format!("tau>={tau}; {}", parts.join(" "));
    if mismatch {
        row.status = RowStatus::Inconsistent;
    }
    row
}

fn fang_yang_row(config: &CampaignConfig, id: u64, g: &Graph) -> ReportRow {
    let mut row = ReportRow::new(id, "exhaustive").with_graph(g);
    let budget = budget(config);
    let (mut holds, mut vacuous) = (0, 0);
    let mut certs = Vec::new();
    let mut notes = Vec::new();
    for k in config.ks() {
        for d in config.ds() {
            match fang_yang_check(g, k, d, &budget) {
                Ok(outcome) => {
                    match &outcome {
                        FangYang::Vacuous { .. } => vacuous += 1,
                        FangYang::ImplicationHolds { .. } => holds += 1,
                        FangYang::Counterexample { .. } => {
                            row.status = RowStatus::Counterexample;
                            notes.push(format!("k={k},d={d}:COUNTEREXAMPLE"));
                        }
                    }
                    if !matches!(outcome, FangYang::Vacuous { .. }) {
                        certs.push(serde_json::json!({ "k": k, "d": d, "outcome": outcome }));
                    }
                }
                Err(e @ crate::packing::PackingError::InvalidPacking(_)) => {
                    row.status = RowStatus::Inconsistent;
                    notes.push(format!("k={k},d={d}: {e}"));
                }
                Err(e) => {
                    if row.status == RowStatus::Ok {
                        row.status = RowStatus::Error;
                    }
                    notes.push(format!("k={k},d={d}: {e}"));
                }
            }
        }
    }
    row.conclusion = Some(format!("holds={holds} vacuous={vacuous}"));
    row.detail = notes.join("; ");
    if !certs.is_empty() {
        row.certificate = Some(serde_json::Value::Array(certs));
    }
    row
}

fn lemma_bounds_campaign(config: &CampaignConfig) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for family in [ExtremalFamily::G1Join, ExtremalFamily::G2Bipartite] {
        for k in config.ks() {
            let ns = config.ns().unwrap_or_else(|| match family {
                ExtremalFamily::G1Join => (2 * k + 6..=40).collect(),
                ExtremalFamily::G2Bipartite => (4 * k + 4..=40).step_by(2).collect(),
            });
            for lr in check_lemma_bounds(family, &[k], &ns, config.tol) {
                let mut row = ReportRow::new(rows.len() as u64, family.as_str());
                row.k = Some(lr.k);
                row.n = Some(lr.n);
                row.rho_lo = lr.lo;
                row.rho_hi = lr.hi;
                let bound = crate::rational::to_f64(&lr.bound);
                row.threshold_lo = Some(bound);
                row.threshold_hi = Some(bound);
                row.hypotheses = Some(format!("order={}", pass(lr.in_hypothesis)));
                row.hypotheses_pass = Some(lr.in_hypothesis);
                row.comparison = Some(
                    match lr.verdict {
                        Verdict::Pass => "HOLDS",
                        Verdict::Fail => "FAILS",
                        Verdict::Indeterminate => "INDETERMINATE",
                        Verdict::Error => "ERROR",
                    }
                    .into(),
                );
                row.basis = Some(format!("bound={}", lr.bound));
                if let (Some(lo), Some(hi)) = (lr.full_lo, lr.full_hi) {
                    row.detail = format!("full_matrix=[{lo}, {hi}]");
                }
                row.status = match (lr.verdict, lr.in_hypothesis) {
                    (Verdict::Fail, true) => RowStatus::Inconsistent,
                    (Verdict::Error | Verdict::Indeterminate, _) => RowStatus::Error,
                    _ => RowStatus::Ok,
                };
                if let Some(e) = lr.error {
                    row.detail = e;
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn comb_rows(a_max: usize, s_max: usize, value_max: usize) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for r in check_binomial_shift(a_max as i64) {
        let mut row = ReportRow::new(rows.len() as u64, "binomial_shift");
        row.conclusion = Some(pass(r.failures.is_empty()).into());
        row.detail = format!("a={} b=1..{} checked={} min_slack={}", r.a, r.a, r.checked, r.min_slack);
        if !r.failures.is_empty() {
            row.status = RowStatus::Inconsistent;
            row.detail.push_str(&format!(" failing_b={:?}", r.failures));
        }
        rows.push(row);
    }
    for r in check_product_sum(s_max, value_max as i64) {
        let mut row = ReportRow::new(rows.len() as u64, "product_sum");
        row.conclusion = Some(pass(r.failures.is_empty()).into());
        row.detail = format!(
            "s={} value_max={} totals_checked={} min_slack={} at (a,b)={:?}",
            r.s, value_max, r.totals_checked, r.min_slack, r.tight_at
        );
        if !r.failures.is_empty() {
            row.status = RowStatus::Inconsistent;
            row.detail.push_str(&format!(" witness={:?}", r.failures[0]));
        }
        rows.push(row);
    }
    rows
}
