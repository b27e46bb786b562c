//! Spanning-tree packing, fractional packing number and property P(k,d).
//!
//! For a partition `P = {V_1, …, V_s}` of `V(G)` with `s ≥ 2`, the objective
//! is `Σ_{i<j} e(V_i, V_j) / (s - 1)` and the fractional packing number
//! `ν_f(G)` is its minimum. `G` has `k` edge-disjoint spanning trees exactly
//! when `ν_f(G) ≥ k`; [`tau_packing`] either produces the trees or a
//! partition whose objective is below `k`.
//!
//! P(k,d) asks for `k` edge-disjoint spanning trees and, edge-disjoint from
//! them, a forest `F` with `|E(F)| > (d-1)(n-1)/d` that, unless it is a
//! spanning tree, has a component with at least `d` edges. The choice of
//! trees and `F` is existential and joint.

mod matroid;
mod property;
mod strength;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::rational::{self, Rational};
use crate::union_find::DisjointSets;

pub use matroid::{spanning_tree_packing_number, tau_packing};
pub use property::{
    fang_yang_check, residual_max_forest, validate_p_certificate, verify_p, CertificateBasis,
    ConditionC, FangYang, PCertificate, PVerdict, Refutation, SearchBudget, Tier,
};
pub use strength::{nu_f_exact, DEFAULT_MAX_ENUM_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("graph has {n} vertices, above the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("the fractional packing number needs at least two vertices")]
    Trivial,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("P({k},{d}) undecided: {reason}")]
    Undecided { k: usize, d: usize, reason: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// A vertex partition with its exact crossing count and objective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
    pub crossing: u64,
    #[serde(with = "rational::serde_rational")]
    pub objective: Rational,
}

impl Partition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Evaluates `Σ_{i<j} e(V_i, V_j) / (s - 1)` for the given blocks.
pub fn partition_ratio(g: &Graph, blocks: &[Vec<usize>]) -> Result<Partition, PackingError> {
    if blocks.len() < 2 {
        return Err(PackingError::InvalidPartition(format!(
            "need at least 2 blocks, got {}",
            blocks.len()
        )));
    }
    let mut block_of = vec![usize::MAX; g.n()];
    for (bi, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(PackingError::InvalidPartition(format!("block {bi} is empty")));
        }
        for &v in block {
            if v >= g.n() {
                return Err(PackingError::InvalidPartition(format!(
                    "vertex {v} out of range"
                )));
            }
            if block_of[v] != usize::MAX {
                return Err(PackingError::InvalidPartition(format!(
                    "vertex {v} appears in more than one block"
                )));
            }
            block_of[v] = bi;
        }
    }
    if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(PackingError::InvalidPartition(format!("vertex {v} is not covered")));
    }
    let inside = g
        .edges()
        .iter()
        .filter(|&&(u, v)| block_of[u] == block_of[v])
        .count();
    let crossing = (g.m() - inside) as u64;
    Ok(Partition {
        blocks: blocks.to_vec(),
        crossing,
        objective: Rational::new(crossing as i64, blocks.len() as i64 - 1),
    })
}

/// Outcome of a `k`-tree packing attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PackingCertificate {
    /// `k` pairwise edge-disjoint spanning trees, each a sorted edge list.
    TreesFound { trees: Vec<Vec<Edge>> },
    /// A partition with objective below `k`, so no `k` trees exist.
    ViolatingPartition { witness: Partition },
}

impl PackingCertificate {
    pub fn is_trees(&self) -> bool {
        matches!(self, PackingCertificate::TreesFound { .. })
    }
}

/// Independent check that `trees` are `k` pairwise edge-disjoint spanning
/// trees of `g`.
pub fn validate_tree_packing(g: &Graph, trees: &[Vec<Edge>], k: usize) -> Result<(), PackingError> {
    if trees.len() != k {
        return Err(PackingError::InvalidPacking(format!(
            "expected {k} trees, got {}",
            trees.len()
        )));
    }
    let mut used = HashSet::new();
    for (ti, tree) in trees.iter().enumerate() {
        if tree.len() + 1 != g.n() {
            return Err(PackingError::InvalidPacking(format!(
                "tree {ti} has {} edges, expected {}",
                tree.len(),
                g.n() - 1
            )));
        }
        let mut ds = DisjointSets::new(g.n());
        for &(u, v) in tree {
            if !g.has_edge(u, v) {
                return Err(PackingError::InvalidPacking(format!(
                    "tree {ti} uses ({u}, {v}), which is not an edge"
                )));
            }
            if !used.insert((u.min(v), u.max(v))) {
                return Err(PackingError::InvalidPacking(format!(
                    "edge ({u}, {v}) used by more than one tree"
                )));
            }
            if !ds.union(u, v) {
                return Err(PackingError::InvalidPacking(format!("tree {ti} has a cycle")));
            }
        }
    }
    Ok(())
}

/// Independent check that `witness` really has objective below `k`.
pub fn validate_violating_partition(
    g: &Graph,
    witness: &Partition,
    k: usize,
) -> Result<(), PackingError> {
    let fresh = partition_ratio(g, &witness.blocks)?;
    if fresh.crossing != witness.crossing || fresh.objective != witness.objective {
        return Err(PackingError::InvalidPacking(
            "recorded crossing count does not match the graph".into(),
        ));
    }
    if fresh.objective >= Rational::from_integer(k as i64) {
        return Err(PackingError::InvalidPacking(format!(
            "objective {} is not below {k}",
            fresh.objective
        )));
    }
    Ok(())
}

pub fn validate_packing_certificate(
    g: &Graph,
    cert: &PackingCertificate,
    k: usize,
) -> Result<(), PackingError> {
    match cert {
        PackingCertificate::TreesFound { trees } => validate_tree_packing(g, trees, k),
        PackingCertificate::ViolatingPartition { witness } => {
            validate_violating_partition(g, witness, k)
        }
    }
}
