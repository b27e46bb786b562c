//! Union of graphic matroids: packing `k` forests by augmenting paths.

use std::collections::VecDeque;

use super::{partition_ratio, PackingCertificate, PackingError};
use crate::graph::{Edge, Graph};
use crate::rational::Rational;
use crate::union_find::DisjointSets;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Forest {
    /// (neighbour, edge id)
    adj: Vec<Vec<(usize, usize)>>,
    size: usize,
}

impl Forest {
    fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            size: 0,
        }
    }

    fn insert(&mut self, id: usize, (u, v): Edge) {
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        self.size += 1;
    }

    fn remove(&mut self, id: usize, (u, v): Edge) {
        self.adj[u].retain(|&(_, e)| e != id);
        self.adj[v].retain(|&(_, e)| e != id);
        self.size -= 1;
    }

    /// Edge ids on the tree path from `u` to `v`, or `None` if they lie in
    /// different components.
    fn path(&self, u: usize, v: usize, via: &mut [(usize, usize)]) -> Option<Vec<usize>> {
        via.fill((NONE, NONE));
        via[u] = (u, NONE);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                let mut out = Vec::new();
                let mut y = v;
                while y != u {
                    let (p, e) = via[y];
                    out.push(e);
                    y = p;
                }
                return Some(out);
            }
            for &(y, e) in &self.adj[x] {
                if via[y].0 == NONE {
                    via[y] = (x, e);
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

/// `k` edge-disjoint forests over the edges of a graph, grown by shortest
/// augmenting paths in the exchange graph.
#[derive(Debug, Clone)]
pub(crate) struct ForestUnion<'g> {
    g: &'g Graph,
    owner: Vec<usize>,
    forests: Vec<Forest>,
    scratch: Vec<(usize, usize)>,
}

pub(crate) enum Augment {
    Done,
    /// Edge ids reachable from the roots in the exchange graph.
    Stuck(Vec<bool>),
}

impl<'g> ForestUnion<'g> {
    pub fn new(g: &'g Graph, k: usize) -> Self {
        Self {
            g,
            owner: vec![NONE; g.m()],
            forests: vec![Forest::new(g.n()); k],
            scratch: vec![(NONE, NONE); g.n()],
        }
    }

    /// Starts from given edge-disjoint forests; edge ids index `g.edges()`.
    pub fn from_forests(g: &'g Graph, forests: &[Vec<usize>]) -> Self {
        let mut fu = Self::new(g, forests.len());
        for (i, f) in forests.iter().enumerate() {
            for &id in f {
                debug_assert_eq!(fu.owner[id], NONE);
                fu.owner[id] = i;
                fu.forests[i].insert(id, g.edges()[id]);
            }
        }
        fu
    }

    pub fn forest_size(&self, i: usize) -> usize {
        self.forests[i].size
    }

    pub fn forest_edge_ids(&self, i: usize) -> Vec<usize> {
        (0..self.owner.len()).filter(|&e| self.owner[e] == i).collect()
    }

    /// Edge ids on the path from `u` to `v` in forest `i`.
    pub fn path_in(&mut self, i: usize, u: usize, v: usize) -> Option<Vec<usize>> {
        self.forests[i].path(u, v, &mut self.scratch)
    }

    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.owner.len()).filter(|&e| self.owner[e] == NONE).collect()
    }

    /// Tries to cover one more edge, searching from all of `roots`
    /// (uncovered edge ids) at once.
    pub fn augment(&mut self, roots: &[usize]) -> Augment {
        let m = self.owner.len();
        let mut parent = vec![NONE; m];
        let mut labelled = vec![false; m];
        let mut queue = VecDeque::new();
        for &r in roots {
            debug_assert_eq!(self.owner[r], NONE);
            if !labelled[r] {
                labelled[r] = true;
                queue.push_back(r);
            }
        }
        while let Some(f) = queue.pop_front() {
            let (u, v) = self.g.edges()[f];
            for i in 0..self.forests.len() {
                if self.owner[f] == i {
                    continue;
                }
                match self.forests[i].path(u, v, &mut self.scratch) {
                    None => {
                        self.apply(f, i, &parent);
                        return Augment::Done;
                    }
                    Some(cycle) => {
                        for e in cycle {
                            if !labelled[e] {
                                labelled[e] = true;
                                parent[e] = f;
                                queue.push_back(e);
                            }
                        }
                    }
                }
            }
        }
        Augment::Stuck(labelled)
    }

    /// `f` goes into forest `i`; each edge on the parent chain moves into the
    /// forest its child vacates.
    fn apply(&mut self, mut f: usize, mut i: usize, parent: &[usize]) {
        loop {
            let edge = self.g.edges()[f];
            let old = self.owner[f];
            if old != NONE {
                self.forests[old].remove(f, edge);
            }
            self.forests[i].insert(f, edge);
            self.owner[f] = i;
            if parent[f] == NONE {
                debug_assert_eq!(old, NONE);
                return;
            }
            i = old;
            f = parent[f];
        }
    }

    /// One pass over the uncovered edges. The covered set only grows, so an
    /// edge that fails once stays spanned by the union and never needs a retry.
    pub fn saturate(&mut self) {
        for e in self.uncovered() {
            if self.owner[e] == NONE {
                let _ = self.augment(&[e]);
            }
        }
    }
}

fn sorted_edges(g: &Graph, ids: &[usize]) -> Vec<Edge> {
    let mut out: Vec<Edge> = ids.iter().map(|&e| g.edges()[e]).collect();
    out.sort_unstable();
    out
}

pub(crate) fn forests_as_edges(fu: &ForestUnion<'_>, g: &Graph) -> Vec<Vec<Edge>> {
    (0..fu.forests.len())
        .map(|i| sorted_edges(g, &fu.forest_edge_ids(i)))
        .collect()
}

/// Packs `k` edge-disjoint spanning trees or returns a partition with
/// objective below `k`.
pub fn tau_packing(g: &Graph, k: usize) -> Result<PackingCertificate, PackingError> {
    if k == 0 {
        return Err(PackingError::InvalidArgument("k must be at least 1".into()));
    }
    if g.n() < 2 {
        return Err(PackingError::Trivial);
    }
    if !g.is_connected() {
        return Err(PackingError::Disconnected);
    }
    let mut fu = ForestUnion::new(g, k);
    fu.saturate();
    let target = g.n() - 1;
    if (0..k).all(|i| fu.forest_size(i) == target) {
        return Ok(PackingCertificate::TreesFound {
            trees: forests_as_edges(&fu, g),
        });
    }
    // Some forest is not spanning. The edges reachable from every uncovered
    // edge span the blocks of a partition whose crossing edges are all
    // covered and outside the reachable set.
    let roots = fu.uncovered();
    let labelled = match fu.augment(&roots) {
        Augment::Stuck(l) => l,
        Augment::Done => {
            return Err(PackingError::Internal(
                "augmentation succeeded after saturation".into(),
            ))
        }
    };
    let mut ds = DisjointSets::new(g.n());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if labelled[e] {
            ds.union(u, v);
        }
    }
    let mut block_of = vec![NONE; g.n()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        let r = ds.find(v);
        if block_of[r] == NONE {
            block_of[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of[r]].push(v);
    }
    if blocks.len() < 2 {
        return Err(PackingError::Internal(
            "violating partition collapsed to one block".into(),
        ));
    }
    let witness = partition_ratio(g, &blocks)?;
    if witness.objective >= Rational::from_integer(k as i64) {
        return Err(PackingError::Internal(format!(
            "extracted partition has objective {} >= {k}",
            witness.objective
        )));
    }
    Ok(PackingCertificate::ViolatingPartition { witness })
}

/// Largest `k` such that `g` has `k` edge-disjoint spanning trees.
pub fn spanning_tree_packing_number(g: &Graph) -> Result<usize, PackingError> {
    if g.n() < 2 {
        return Err(PackingError::Trivial);
    }
    if !g.is_connected() {
        return Ok(0);
    }
    let mut k = 1;
    let upper = g.m() / (g.n() - 1);
    while k < upper && tau_packing(g, k + 1)?.is_trees() {
        k += 1;
    }
    Ok(k)
}
