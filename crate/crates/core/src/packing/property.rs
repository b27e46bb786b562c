//! Property P(k,d): search and certificate validation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::matroid::{forests_as_edges, ForestUnion};
use super::{
    nu_f_exact, tau_packing, validate_tree_packing, validate_violating_partition,
    PackingCertificate, PackingError, Partition, DEFAULT_MAX_ENUM_N,
};
use crate::graph::{Edge, Graph};
use crate::rational::{self, Rational};
use crate::union_find::DisjointSets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    /// `k + 1` disjoint spanning trees: the extra tree is `F`.
    Surplus,
    /// Packing, maximal residual forest and bounded exchanges.
    Constructive,
    /// Exhaustive over every packing of a tiny graph.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionC {
    /// `F` is a spanning tree, so (c) does not apply.
    SpanningTree,
    /// `F` has a component with at least `d` edges.
    LargeComponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBasis {
    pub tier: Tier,
    pub condition_a: bool,
    pub condition_b: bool,
    pub condition_c: ConditionC,
    /// Exact `ν_f` when it was computed along the way.
    #[serde(with = "rational::serde_rational_opt", default)]
    pub nu_f: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PCertificate {
    pub k: usize,
    pub d: usize,
    pub trees: Vec<Vec<Edge>>,
    pub forest: Vec<Edge>,
    pub forest_edges: usize,
    pub largest_component_edges: usize,
    pub basis: CertificateBasis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Refutation {
    /// Every packing of `k` spanning trees was examined.
    Exhaustive { packings: u64 },
    /// Fewer than `k` disjoint spanning trees exist at all.
    NoTreePacking { witness: Partition },
}

impl Refutation {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Refutation::Exhaustive { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum PVerdict {
    Verified(PCertificate),
    Refuted(Refutation),
    Unknown { reason: String },
}

impl PVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            PVerdict::Verified(_) => "VERIFIED",
            PVerdict::Refuted(_) => "REFUTED",
            PVerdict::Unknown { .. } => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Exchange attempts in the constructive tier; `None` means `n·m`.
    pub exchange_attempts: Option<usize>,
    /// Largest `n` for which exact `ν_f` is computed.
    pub max_enum_n: usize,
    pub exhaustive_max_n: usize,
    pub exhaustive_max_m: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            exchange_attempts: None,
            max_enum_n: DEFAULT_MAX_ENUM_N,
            exhaustive_max_n: 7,
            exhaustive_max_m: 14,
        }
    }
}

/// Maximum spanning forest of `g` minus the edges of `trees`.
pub fn residual_max_forest(g: &Graph, trees: &[Vec<Edge>]) -> Result<Vec<Edge>, PackingError> {
    validate_tree_packing(g, trees, trees.len())?;
    let used: HashSet<Edge> = trees.iter().flatten().copied().collect();
    let mut ds = DisjointSets::new(g.n());
    Ok(g.edges()
        .iter()
        .filter(|e| !used.contains(e))
        .filter(|&&(u, v)| ds.union(u, v))
        .copied()
        .collect())
}

/// `(|E(F)|, largest component edge count)` for a forest on `n` vertices.
fn forest_shape(n: usize, forest: impl IntoIterator<Item = Edge>) -> Option<(usize, usize)> {
    let mut ds = DisjointSets::new(n);
    let mut size = 0;
    for (u, v) in forest {
        if !ds.union(u, v) {
            return None;
        }
        size += 1;
    }
    let largest = (0..n).map(|v| ds.set_size(v) - 1).max().unwrap_or(0);
    Some((size, largest))
}

fn condition_b(n: usize, d: usize, forest_edges: usize) -> bool {
    (d as u128) * (forest_edges as u128) > (d as u128 - 1) * (n as u128 - 1)
}

fn condition_c(n: usize, d: usize, forest_edges: usize, largest: usize) -> Option<ConditionC> {
    if forest_edges + 1 == n {
        Some(ConditionC::SpanningTree)
    } else if largest >= d {
        Some(ConditionC::LargeComponent)
    } else {
        None
    }
}

/// Re-checks conditions (a)–(c) from scratch.
pub fn validate_p_certificate(
    g: &Graph,
    k: usize,
    d: usize,
    cert: &PCertificate,
) -> Result<(), PackingError> {
    let bad = |msg: String| Err(PackingError::InvalidPacking(msg));
    if cert.k != k || cert.d != d {
        return bad(format!("certificate is for P({},{})", cert.k, cert.d));
    }
    validate_tree_packing(g, &cert.trees, k)?;
    let used: HashSet<Edge> = cert.trees.iter().flatten().copied().collect();
    let mut seen = HashSet::new();
    for &(u, v) in &cert.forest {
        if !g.has_edge(u, v) {
            return bad(format!("forest edge ({u}, {v}) is not in the graph"));
        }
        let e = (u.min(v), u.max(v));
        if used.contains(&e) {
            return bad(format!("forest edge ({u}, {v}) belongs to a tree"));
        }
        if !seen.insert(e) {
            return bad(format!("forest edge ({u}, {v}) repeated"));
        }
    }
    let Some((size, largest)) = forest_shape(g.n(), cert.forest.iter().copied()) else {
        return bad("forest contains a cycle".into());
    };
    if size != cert.forest_edges || largest != cert.largest_component_edges {
        return bad("recorded forest sizes do not match".into());
    }
    if !condition_b(g.n(), d, size) {
        return bad(format!(
            "{d}·{size} is not above {}·{}",
            d - 1,
            g.n() - 1
        ));
    }
    match condition_c(g.n(), d, size, largest) {
        Some(c) if c == cert.basis.condition_c => Ok(()),
        Some(_) => bad("recorded basis for condition (c) is wrong".into()),
        None => bad(format!("largest component has {largest} < {d} edges")),
    }
}

fn certificate(
    g: &Graph,
    k: usize,
    d: usize,
    trees: Vec<Vec<Edge>>,
    mut forest: Vec<Edge>,
    tier: Tier,
    nu_f: Option<Rational>,
) -> Option<PCertificate> {
    forest.sort_unstable();
    let (size, largest) = forest_shape(g.n(), forest.iter().copied())?;
    if !condition_b(g.n(), d, size) {
        return None;
    }
    let c = condition_c(g.n(), d, size, largest)?;
    Some(PCertificate {
        k,
        d,
        trees,
        forest,
        forest_edges: size,
        largest_component_edges: largest,
        basis: CertificateBasis {
            tier,
            condition_a: true,
            condition_b: true,
            condition_c: c,
            nu_f,
        },
    })
}

/// Decides P(k,d) for `g` where possible.
///
/// `Verified` always carries a certificate that passes
/// [`validate_p_certificate`]. `Refuted` comes from exhausting every packing
/// of a tiny graph, or from a partition proving fewer than `k` disjoint
/// spanning trees exist. Anything else is `Unknown`.
pub fn verify_p(
    g: &Graph,
    k: usize,
    d: usize,
    budget: &SearchBudget,
) -> Result<PVerdict, PackingError> {
    if k == 0 || d == 0 {
        return Err(PackingError::InvalidArgument("k and d must be at least 1".into()));
    }
    let n = g.n();
    if n < 2 {
        return Err(PackingError::Trivial);
    }
    if !g.is_connected() {
        return Err(PackingError::Disconnected);
    }

    if let PackingCertificate::TreesFound { mut trees } = tau_packing(g, k + 1)? {
        let forest = trees.pop().unwrap_or_default();
        if let Some(cert) = certificate(g, k, d, trees, forest, Tier::Surplus, None) {
            return Ok(PVerdict::Verified(cert));
        }
    }
    let nu_f = if n <= budget.max_enum_n {
        Some(nu_f_exact(g, budget.max_enum_n)?.0)
    } else {
        None
    };
    let threshold = Rational::from_integer(k as i64) + Rational::new(d as i64 - 1, d as i64);
    let guaranteed = nu_f.is_some_and(|v| v > threshold);

    let trees = match tau_packing(g, k)? {
        PackingCertificate::TreesFound { trees } => trees,
        PackingCertificate::ViolatingPartition { witness } => {
            validate_violating_partition(g, &witness, k)?;
            if fits_exhaustive(g, budget) {
                return Ok(exhaustive(g, k, d, nu_f));
            }
            return Ok(PVerdict::Refuted(Refutation::NoTreePacking { witness }));
        }
    };
    if let Some(cert) = constructive(g, k, d, &trees, budget, nu_f) {
        return Ok(PVerdict::Verified(cert));
    }
    if fits_exhaustive(g, budget) {
        return Ok(exhaustive(g, k, d, nu_f));
    }
    let reason = if guaranteed {
        format!("nu_f = {} exceeds the threshold but no certificate was found within budget", nu_f.unwrap())
    } else {
        "exchange budget exhausted and graph too large for exhaustive search".to_string()
    };
    Ok(PVerdict::Unknown { reason })
}

fn fits_exhaustive(g: &Graph, budget: &SearchBudget) -> bool {
    g.n() <= budget.exhaustive_max_n && g.m() <= budget.exhaustive_max_m && g.m() <= 32
}

fn edge_ids(g: &Graph, edges: &[Edge]) -> Vec<usize> {
    edges
        .iter()
        .map(|e| g.edges().binary_search(e).expect("edge of g"))
        .collect()
}

/// Max residual forest shape when `in_tree[e]` marks the tree edges.
fn residual_shape(g: &Graph, in_tree: &[bool]) -> (usize, usize) {
    let mut ds = DisjointSets::new(g.n());
    let mut size = 0;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !in_tree[e] && ds.union(u, v) {
            size += 1;
        }
    }
    let largest = (0..g.n()).map(|v| ds.set_size(v) - 1).max().unwrap_or(0);
    (size, largest)
}

fn constructive(
    g: &Graph,
    k: usize,
    d: usize,
    trees: &[Vec<Edge>],
    budget: &SearchBudget,
    nu_f: Option<Rational>,
) -> Option<PCertificate> {
    let n = g.n();
    // Grow a (k+1)-th forest by augmentation. The trees are already spanning,
    // so only the new forest can take a free insertion and the first k stay
    // spanning trees throughout.
    let mut start: Vec<Vec<usize>> = trees.iter().map(|t| edge_ids(g, t)).collect();
    start.push(Vec::new());
    let mut fu = ForestUnion::from_forests(g, &start);
    fu.saturate();
    let mut forests = forests_as_edges(&fu, g);
    forests.pop();
    let mut tree_ids: Vec<Vec<usize>> = forests.iter().map(|t| edge_ids(g, t)).collect();

    let accept = |tree_ids: &[Vec<usize>]| -> Option<PCertificate> {
        let trees: Vec<Vec<Edge>> = tree_ids
            .iter()
            .map(|t| {
                let mut es: Vec<Edge> = t.iter().map(|&e| g.edges()[e]).collect();
                es.sort_unstable();
                es
            })
            .collect();
        let forest = residual_max_forest(g, &trees).ok()?;
        certificate(g, k, d, trees, forest, Tier::Constructive, nu_f)
    };
    if let Some(cert) = accept(&tree_ids) {
        return Some(cert);
    }

    let mut in_tree = vec![false; g.m()];
    for t in &tree_ids {
        for &e in t {
            in_tree[e] = true;
        }
    }
    let mut score = residual_shape(g, &in_tree);
    let limit = budget.exchange_attempts.unwrap_or(n * g.m());
    let mut attempts = 0;
    'search: loop {
        for i in 0..k {
            let mut tree = ForestUnion::from_forests(g, std::slice::from_ref(&tree_ids[i]));
            for r in 0..g.m() {
                if in_tree[r] {
                    continue;
                }
                let (u, v) = g.edges()[r];
                let Some(cycle) = tree.path_in(0, u, v) else {
                    continue;
                };
                for t in cycle {
                    if attempts >= limit {
                        break 'search;
                    }
                    attempts += 1;
                    in_tree[t] = false;
                    in_tree[r] = true;
                    let next = residual_shape(g, &in_tree);
                    if next > score {
                        score = next;
                        let pos = tree_ids[i].iter().position(|&e| e == t).unwrap();
                        tree_ids[i][pos] = r;
                        if let Some(cert) = accept(&tree_ids) {
                            return Some(cert);
                        }
                        continue 'search;
                    }
                    in_tree[t] = true;
                    in_tree[r] = false;
                }
            }
        }
        break;
    }
    None
}

fn exhaustive(g: &Graph, k: usize, d: usize, nu_f: Option<Rational>) -> PVerdict {
    let n = g.n();
    let m = g.m();
    let mut spanning: Vec<u32> = Vec::new();
    if k * (n - 1) <= m {
        for mask in 0u32..(1u32 << m) {
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
            let mut ds = DisjointSets::new(n);
            if (0..m)
                .filter(|&e| mask >> e & 1 == 1)
                .all(|e| ds.union(g.edges()[e].0, g.edges()[e].1))
            {
                spanning.push(mask);
            }
        }
    }
    let mut packings = 0u64;
    let mut seen = HashSet::new();
    let mut chosen = Vec::with_capacity(k);
    let found = choose(&spanning, 0, 0, k, &mut chosen, &mut |union, chosen| {
        packings += 1;
        if !seen.insert(union) {
            return None;
        }
        let in_tree: Vec<bool> = (0..m).map(|e| union >> e & 1 == 1).collect();
        let (size, largest) = residual_shape(g, &in_tree);
        if !condition_b(n, d, size) || condition_c(n, d, size, largest).is_none() {
            return None;
        }
        let trees: Vec<Vec<Edge>> = chosen
            .iter()
            .map(|&t: &u32| (0..m).filter(|&e| t >> e & 1 == 1).map(|e| g.edges()[e]).collect())
            .collect();
        let forest = residual_max_forest(g, &trees).ok()?;
        certificate(g, k, d, trees, forest, Tier::Exhaustive, nu_f)
    });
    match found {
        Some(cert) => PVerdict::Verified(cert),
        None => PVerdict::Refuted(Refutation::Exhaustive { packings }),
    }
}

/// Visits every set of `k` pairwise disjoint trees, in index order.
fn choose<F>(
    trees: &[u32],
    from: usize,
    union: u32,
    k: usize,
    chosen: &mut Vec<u32>,
    visit: &mut F,
) -> Option<PCertificate>
where
    F: FnMut(u32, &[u32]) -> Option<PCertificate>,
{
    if chosen.len() == k {
        return visit(union, chosen);
    }
    for i in from..trees.len() {
        let t = trees[i];
        if t & union != 0 {
            continue;
        }
        chosen.push(t);
        let out = choose(trees, i + 1, union | t, k, chosen, visit);
        chosen.pop();
        if out.is_some() {
            return out;
        }
    }
    None
}

/// Outcome of testing "ν_f > k + (d-1)/d implies P(k,d)" on one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum FangYang {
    Vacuous {
        #[serde(with = "rational::serde_rational")]
        nu_f: Rational,
    },
    ImplicationHolds {
        #[serde(with = "rational::serde_rational")]
        nu_f: Rational,
        certificate: PCertificate,
    },
    Counterexample {
        #[serde(with = "rational::serde_rational")]
        nu_f: Rational,
        refutation: Refutation,
    },
}

impl FangYang {
    pub fn label(&self) -> &'static str {
        match self {
            FangYang::Vacuous { .. } => "VACUOUS",
            FangYang::ImplicationHolds { .. } => "IMPLICATION_HOLDS",
            FangYang::Counterexample { .. } => "COUNTEREXAMPLE",
        }
    }
}

pub fn fang_yang_check(
    g: &Graph,
    k: usize,
    d: usize,
    budget: &SearchBudget,
) -> Result<FangYang, PackingError> {
    if k == 0 || d == 0 {
        return Err(PackingError::InvalidArgument("k and d must be at least 1".into()));
    }
    let (nu_f, _) = nu_f_exact(g, budget.max_enum_n)?;
    let threshold = Rational::from_integer(k as i64) + Rational::new(d as i64 - 1, d as i64);
    if nu_f <= threshold {
        return Ok(FangYang::Vacuous { nu_f });
    }
    match verify_p(g, k, d, budget)? {
        PVerdict::Verified(certificate) => {
            validate_p_certificate(g, k, d, &certificate)?;
            Ok(FangYang::ImplicationHolds { nu_f, certificate })
        }
        PVerdict::Refuted(refutation) => Ok(FangYang::Counterexample { nu_f, refutation }),
        PVerdict::Unknown { reason } => Err(PackingError::Undecided { k, d, reason }),
    }
}
