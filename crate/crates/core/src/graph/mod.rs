//! Immutable simple undirected graphs.
//!
//! Vertices are the dense labels `0..n`. Adjacency is kept twice: as one
//! bitset row per vertex (fast membership and neighbourhood intersection)
//! and as the sorted list of edges `(u, v)` with `u < v`. Every operation
//! returns a new graph.

mod io;

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use io::{decode_graph, decode_graph6_lines, encode_graph, Format};

/// An unordered edge, always stored as `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(usize, usize),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameter { family: &'static str, reason: String },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{n} vertices exceed the range of the {format} format")]
    Overflow { n: u64, format: &'static str },
}

/// Named graph families used as fixtures and building blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `K_n`, params `[n]`.
    Complete,
    /// `K_{a,b}` with sides `0..a` and `a..a+b`, params `[a, b]`.
    CompleteBipartite,
    /// `P_n` with edges `(i, i+1)`, params `[n]`.
    Path,
    /// `C_n`, params `[n]` with `n ≥ 3`.
    Cycle,
    /// `K_{1,s}` centred at vertex 0, params `[s]` (the number of leaves).
    Star,
    /// `n` isolated vertices, params `[n]`.
    Empty,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::CompleteBipartite => "complete_bipartite",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::Empty => "empty",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: Vec<Edge>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph on `n` vertices. Edges may be given in either
    /// orientation; loops, repeated edges and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let words = n.div_ceil(64);
        let mut adj = vec![0u64; n * words];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            let (w, bit) = (u * words + v / 64, 1u64 << (v % 64));
            if adj[w] & bit != 0 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[w] |= bit;
            adj[v * words + u / 64] |= 1u64 << (u % 64);
            list.push((u, v));
        }
        list.sort_unstable();
        Ok(Self {
            n,
            words,
            adj,
            edges: list,
        })
    }

    /// The edgeless graph on `n ≥ 1` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list, each edge `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Bitset row of `v`: bit `j` of word `j / 64` is set iff `vj` is an edge.
    pub fn neighbor_bits(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbor_bits(v)
            .iter()
            .enumerate()
            .flat_map(|(wi, &word)| BitIter(word).map(move |b| wi * 64 + b))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbor_bits(v)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Neighbour lists, convenient for BFS-heavy callers.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            lists[u].push(v);
            lists[v].push(u);
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        lists
    }

    /// Canonical labelled graph of a named family.
    pub fn construct(family: Family, params: &[usize]) -> Result<Self, GraphError> {
        let bad = |reason: &str| GraphError::InvalidParameter {
            family: family.name(),
            reason: reason.to_string(),
        };
        let one = |min: usize| -> Result<usize, GraphError> {
            match params {
                [n] if *n >= min => Ok(*n),
                [_] => Err(bad(&format!("size must be at least {min}"))),
                _ => Err(bad("expected exactly one parameter")),
            }
        };
        match family {
            Family::Complete => {
                let n = one(1)?;
                Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
            }
            Family::CompleteBipartite => match params {
                [a, b] if *a >= 1 && *b >= 1 => {
                    let (a, b) = (*a, *b);
                    Self::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
                }
                [_, _] => Err(bad("both sides must be nonempty")),
                _ => Err(bad("expected two parameters")),
            },
            Family::Path => {
                let n = one(1)?;
                Self::new(n, (1..n).map(|v| (v - 1, v)))
            }
            Family::Cycle => {
                let n = one(3)?;
                Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
            }
            Family::Star => {
                let s = one(1)?;
                Self::new(s + 1, (1..=s).map(|v| (0, v)))
            }
            Family::Empty => Self::empty(one(1)?),
        }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::construct(Family::Complete, &[n])
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        Self::construct(Family::CompleteBipartite, &[a, b])
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::construct(Family::Path, &[n])
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        Self::construct(Family::Cycle, &[n])
    }

    pub fn star(leaves: usize) -> Result<Self, GraphError> {
        Self::construct(Family::Star, &[leaves])
    }

    /// `self ∨ other`: the disjoint union plus every edge between the two
    /// vertex sets. `other` is relabelled by `self.n()`.
    pub fn join(&self, other: &Graph) -> Graph {
        let off = self.n;
        let cross = (0..self.n).flat_map(|u| (0..other.n).map(move |v| (u, v + off)));
        Graph::new(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)))
                .chain(cross),
        )
        .expect("join of simple graphs is simple")
    }

    /// `self ∪ other` with `other` relabelled by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        Graph::new(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off))),
        )
        .expect("disjoint union of simple graphs is simple")
    }

    /// `self ∖ removed`. Every listed edge must be present; the first absent
    /// pair is reported.
    pub fn delete_edges(&self, removed: &[Edge]) -> Result<Graph, GraphError> {
        let mut drop = vec![0u64; self.adj.len()];
        for &(a, b) in removed {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !self.has_edge(u, v) {
                return Err(GraphError::MissingEdge(u, v));
            }
            let (w, bit) = (u * self.words + v / 64, 1u64 << (v % 64));
            if drop[w] & bit != 0 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            drop[w] |= bit;
        }
        let kept = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| drop[u * self.words + v / 64] >> (v % 64) & 1 == 0);
        Graph::new(self.n, kept)
    }

    /// `self + added`. Every listed pair must be absent.
    pub fn add_edges(&self, added: &[Edge]) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges.iter().copied().chain(added.iter().copied()))
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let lists = self.adjacency_lists();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &lists[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![0u64; self.words];
        seen[0] = 1;
        let mut frontier = vec![0usize];
        let mut count = 1;
        while let Some(u) = frontier.pop() {
            for (wi, (&row, s)) in self.neighbor_bits(u).iter().zip(seen.iter_mut()).enumerate() {
                let fresh = row & !*s;
                *s |= fresh;
                for b in BitIter(fresh) {
                    frontier.push(wi * 64 + b);
                    count += 1;
                }
            }
        }
        count == self.n
    }

    /// Structural profile: degrees, connectivity and a 2-colouring when one
    /// exists.
    pub fn classify(&self) -> GraphProfile {
        let lists = self.adjacency_lists();
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut bipartite = true;
        let mut reached_from_zero = 0;
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if s == 0 {
                    reached_from_zero += 1;
                }
                let cu = color[u].unwrap();
                for &v in &lists[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => bipartite = false,
                        Some(_) => {}
                    }
                }
            }
        }
        let bipartition = bipartite.then(|| {
            let (x, y): (Vec<usize>, Vec<usize>) =
                (0..self.n).partition(|&v| color[v] == Some(false));
            Bipartition { x, y }
        });
        let is_balanced_bipartite = bipartition
            .as_ref()
            .is_some_and(|b| b.x.len() == b.y.len());
        GraphProfile {
            n: self.n,
            m: self.m(),
            min_degree: self.min_degree(),
            is_connected: reached_from_zero == self.n,
            bipartition,
            is_balanced_bipartite,
        }
    }
}

/// Two colour classes of a bipartite graph, each sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphProfile {
    pub n: usize,
    pub m: usize,
    pub min_degree: usize,
    pub is_connected: bool,
    pub bipartition: Option<Bipartition>,
    pub is_balanced_bipartite: bool,
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!((k4.n(), k4.m()), (4, 6));
        assert_eq!(Graph::path(3).unwrap().edges(), &[(0, 1), (1, 2)]);
        let k66 = Graph::complete_bipartite(6, 6).unwrap();
        assert_eq!((k66.n(), k66.m()), (12, 36));
        assert_eq!(Graph::cycle(5).unwrap().m(), 5);
        assert_eq!(Graph::star(4).unwrap().degree(0), 4);
        assert_eq!(Graph::path(1).unwrap().m(), 0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            Graph::complete(0),
            Err(GraphError::InvalidParameter { .. })
        ));
        assert!(Graph::complete_bipartite(0, 3).is_err());
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::construct(Family::Path, &[1, 2]).is_err());
    }

    #[test]
    fn rejects_non_simple_input() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        assert_eq!(Graph::new(0, []), Err(GraphError::Empty));
    }

    #[test]
    fn join_examples() {
        let k1 = Graph::complete(1).unwrap();
        assert_eq!(k1.join(&k1), Graph::complete(2).unwrap());

        let inner = Graph::complete(10).unwrap().disjoint_union(&k1);
        let g = k1.join(&inner);
        assert_eq!((g.n(), g.m()), (12, 56));

        let e2 = Graph::empty(2).unwrap();
        let e3 = Graph::empty(3).unwrap();
        assert_eq!(e2.join(&e3), Graph::complete_bipartite(2, 3).unwrap());
    }

    #[test]
    fn disjoint_union_examples() {
        let k3 = Graph::complete(3).unwrap();
        let g = k3.disjoint_union(&k3);
        assert_eq!((g.n(), g.m()), (6, 6));
        assert!(!g.classify().is_connected);

        let g = Graph::complete(10)
            .unwrap()
            .disjoint_union(&Graph::complete(1).unwrap());
        assert_eq!((g.n(), g.m()), (11, 45));

        let p2 = Graph::path(2).unwrap();
        let g = p2.disjoint_union(&p2);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn delete_edges_examples() {
        let k66 = Graph::complete_bipartite(6, 6).unwrap();
        let star: Vec<Edge> = (6..11).map(|y| (0, y)).collect();
        assert_eq!(k66.delete_edges(&star).unwrap().m(), 31);

        let k3 = Graph::complete(3).unwrap();
        let g = k3.delete_edges(&[(0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(g.m(), 2);

        assert_eq!(k3.delete_edges(&[]).unwrap(), k3);
        assert_eq!(
            Graph::path(3).unwrap().delete_edges(&[(0, 2)]),
            Err(GraphError::MissingEdge(0, 2))
        );
    }

    #[test]
    fn classify_examples() {
        let p = Graph::complete(4).unwrap().classify();
        assert_eq!(p.min_degree, 3);
        assert!(p.is_connected);
        assert!(p.bipartition.is_none());

        let p = Graph::complete_bipartite(6, 6).unwrap().classify();
        assert!(p.is_balanced_bipartite);
        assert_eq!(p.min_degree, 6);
        let b = p.bipartition.unwrap();
        assert_eq!(b.x, (0..6).collect::<Vec<_>>());

        let k3 = Graph::complete(3).unwrap();
        assert!(!k3.disjoint_union(&k3).classify().is_connected);

        let p = Graph::path(3).unwrap().classify();
        assert!(p.bipartition.is_some() && !p.is_balanced_bipartite);
    }

    #[test]
    fn wide_graph_uses_multiple_words() {
        let g = Graph::cycle(130).unwrap();
        assert!(g.has_edge(0, 129));
        assert!(g.has_edge(64, 65));
        assert_eq!(g.neighbors(64).collect::<Vec<_>>(), vec![63, 65]);
        assert!(g.is_connected());
        assert!(g.classify().is_balanced_bipartite);
    }
}
