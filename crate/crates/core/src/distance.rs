//! Distance matrices, Wiener index and a certified distance spectral radius.
//!
//! The spectral radius is reported as an interval `[lo, hi]`: `lo` is the best
//! Rayleigh quotient seen during power iteration, `hi` the best
//! Collatz–Wielandt bound `max_i (Dx)_i / x_i` over the (strictly positive)
//! iterates. Both are widened by a worst-case floating-point rounding margin,
//! so the true Perron root lies inside the interval.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::rational::Rational;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistanceError {
    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(usize, usize),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("power iteration stopped after {} iterations with interval [{}, {}]", .0.iterations, .0.lo, .0.hi)]
    NoConvergence(SpectralEstimate),
    #[error("balanced-bipartite bound requested for a graph that is not balanced bipartite")]
    ModeMismatch,
}

/// Dense symmetric matrix of shortest-path lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Transmissions: the row sums of `D`.
    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&x| x as u64).sum())
            .collect()
    }

    pub fn max_row_sum(&self) -> u64 {
        self.row_sums().into_iter().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// All row sums equal; then the all-ones vector is a Perron vector.
    pub fn is_transmission_regular(&self) -> bool {
        let sums = self.row_sums();
        sums.windows(2).all(|w| w[0] == w[1])
    }
}

/// All-pairs shortest paths by one BFS per vertex.
pub fn apsp(g: &Graph) -> Result<DistanceMatrix, DistanceError> {
    let n = g.n();
    let lists = g.adjacency_lists();
    let mut d = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let next = row[u] + 1;
            for &v in &lists[u] {
                if row[v] == u32::MAX {
                    row[v] = next;
                    queue.push_back(v);
                }
            }
        }
        if let Some(t) = row.iter().position(|&x| x == u32::MAX) {
            return Err(DistanceError::Disconnected(s, t));
        }
    }
    Ok(DistanceMatrix { n, d })
}

/// `W = Σ_{i<j} d_ij`.
pub fn wiener(dm: &DistanceMatrix) -> u64 {
    (0..dm.n)
        .map(|i| dm.row(i)[i + 1..].iter().map(|&x| x as u64).sum::<u64>())
        .sum()
}

/// `2W/n`, the Rayleigh quotient of `D` at the all-ones vector.
pub fn rayleigh_lower_bound(dm: &DistanceMatrix) -> Rational {
    Rational::new(2 * wiener(dm) as i64, dm.n as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
}

impl SpectralEstimate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersects(&self, other: &SpectralEstimate, slack: f64) -> bool {
        self.lo <= other.hi + slack && other.lo <= self.hi + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RhoOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

pub fn rho_d(dm: &DistanceMatrix, tol: f64) -> Result<SpectralEstimate, DistanceError> {
    rho_d_with(
        dm,
        RhoOptions {
            tol,
            ..RhoOptions::default()
        },
    )
}

/// Certified Perron root of `D` by power iteration from the all-ones vector.
pub fn rho_d_with(dm: &DistanceMatrix, opts: RhoOptions) -> Result<SpectralEstimate, DistanceError> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(DistanceError::InvalidTolerance(opts.tol));
    }
    let n = dm.n;
    if n == 1 {
        return Ok(SpectralEstimate {
            lo: 0.0,
            hi: 0.0,
            value: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    // Relative rounding margin for a length-n nonnegative dot product plus
    // the surrounding division(s).
    let margin = (2 * n + 4) as f64 * f64::EPSILON;
    let d: Vec<f64> = dm.d.iter().map(|&x| x as f64).collect();

    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut lo = rational_floor_f64(&rayleigh_lower_bound(dm));
    let mut hi = f64::INFINITY;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = d[i * n..(i + 1) * n]
                .iter()
                .zip(&x)
                .map(|(a, b)| a * b)
                .sum();
        }
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let xx: f64 = x.iter().map(|a| a * a).sum();
        let q = xy / xx;
        let cw = x
            .iter()
            .zip(&y)
            .map(|(a, b)| b / a)
            .fold(f64::NEG_INFINITY, f64::max);
        lo = lo.max(q * (1.0 - margin));
        hi = hi.min(cw * (1.0 + margin));
        residual = (x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - q * a).powi(2))
            .sum::<f64>()
            / xx)
            .sqrt();
        if hi - lo <= opts.tol {
            break;
        }
        let scale = y.iter().copied().fold(0.0f64, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
    }
    let est = SpectralEstimate {
        lo,
        hi,
        value: 0.5 * (lo + hi),
        iterations,
        residual,
    };
    if est.width() <= opts.tol {
        Ok(est)
    } else {
        Err(DistanceError::NoConvergence(est))
    }
}

/// Outcome of deciding `a ≤ b` from two certified intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Comparison {
    Holds,
    Fails,
    Indeterminate,
}

impl Comparison {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::Holds => "HOLDS",
            Comparison::Fails => "FAILS",
            Comparison::Indeterminate => "INDETERMINATE",
        }
    }
}

/// Decides `ρ_a ≤ ρ_b`: holds if `a.hi ≤ b.lo`, fails if `a.lo > b.hi`.
pub fn compare_le(a: &SpectralEstimate, b: &SpectralEstimate) -> Comparison {
    if a.hi <= b.lo {
        Comparison::Holds
    } else if a.lo > b.hi {
        Comparison::Fails
    } else {
        Comparison::Indeterminate
    }
}

/// Decides `ρ < bound` for an exact rational bound.
pub fn compare_lt_exact(est: &SpectralEstimate, bound: &Rational) -> Comparison {
    if f64_lt_rational(est.hi, bound) {
        Comparison::Holds
    } else if !f64_lt_rational(est.lo, bound) {
        Comparison::Fails
    } else {
        Comparison::Indeterminate
    }
}

/// Largest `f64` not exceeding `r`.
pub fn rational_floor_f64(r: &Rational) -> f64 {
    let x = *r.numer() as f64 / *r.denom() as f64;
    if f64_lt_rational(x, r) || BigRational::from_float(x) == Some(to_big(r)) {
        x
    } else {
        x.next_down()
    }
}

/// Smallest `f64` not below `r`.
pub fn rational_ceil_f64(r: &Rational) -> f64 {
    -rational_floor_f64(&-r)
}

fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Exact comparison `x < r` for finite `x`.
pub fn f64_lt_rational(x: f64, r: &Rational) -> bool {
    match BigRational::from_float(x) {
        Some(exact) => exact < to_big(r),
        None => x == f64::NEG_INFINITY,
    }
}

/// Which flavour of the degree-based Wiener bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    General,
    BalancedBipartite,
}

/// Lower bound on `W(G)` from degrees alone.
///
/// General: every non-neighbour is at distance at least 2, giving
/// `n(n-1) - m`. Balanced bipartite: same-side vertices are at distance at
/// least 2 and non-adjacent opposite-side vertices at least 3, giving
/// `(5n/2 - 2)·n/2 - 2m`.
pub fn wiener_degree_bound(g: &Graph, mode: BoundMode) -> Result<Rational, DistanceError> {
    let profile = g.classify();
    if !profile.is_connected {
        let comps = g.components();
        return Err(DistanceError::Disconnected(comps[0][0], comps[1][0]));
    }
    let (n, m) = (g.n() as i64, g.m() as i64);
    match mode {
        BoundMode::General => Ok(Rational::from_integer(n * (n - 1) - m)),
        BoundMode::BalancedBipartite if profile.is_balanced_bipartite => {
            Ok(Rational::new(n * (5 * n - 4), 4) - Rational::from_integer(2 * m))
        }
        BoundMode::BalancedBipartite => Err(DistanceError::ModeMismatch),
    }
}

/// The edge threshold forced by a small distance spectral radius:
/// `n(n-4)/2` (general) or `n(n-3)/4` (balanced bipartite).
pub fn spectral_edge_bound(n: usize, mode: BoundMode) -> Rational {
    let n = n as i64;
    match mode {
        BoundMode::General => Rational::new(n * (n - 4), 2),
        BoundMode::BalancedBipartite => Rational::new(n * (n - 3), 4),
    }
}

/// Spectral ceiling of the matching extremal graph: `n + 2` or `3n/2 + 1`.
pub fn spectral_ceiling(n: usize, mode: BoundMode) -> Rational {
    let n = n as i64;
    match mode {
        BoundMode::General => Rational::from_integer(n + 2),
        BoundMode::BalancedBipartite => Rational::new(3 * n + 2, 2),
    }
}

/// `2W/n` lower bound rewritten through the degree bound:
/// `2(n-1) - 2m/n` or `5n/2 - 2 - 4m/n`.
pub fn edge_spectral_lower_bound(n: usize, m: usize, mode: BoundMode) -> Rational {
    let (n, m) = (n as i64, m as i64);
    match mode {
        BoundMode::General => Rational::from_integer(2 * (n - 1)) - Rational::new(2 * m, n),
        BoundMode::BalancedBipartite => Rational::new(5 * n - 4, 2) - Rational::new(4 * m, n),
    }
}

/// Result of the chain "ρ below the ceiling ⇒ many edges".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChainCheck {
    /// `ρ` is not certified below the ceiling; nothing to check.
    NotApplicable,
    Holds,
    Violated,
}

impl ChainCheck {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainCheck::NotApplicable => "NOT_APPLICABLE",
            ChainCheck::Holds => "HOLDS",
            ChainCheck::Violated => "VIOLATED",
        }
    }
}

/// If `est.hi` is below the ceiling for `mode`, the edge count must exceed
/// [`spectral_edge_bound`].
pub fn edge_chain_check(n: usize, m: usize, est: &SpectralEstimate, mode: BoundMode) -> ChainCheck {
    if !f64_lt_rational(est.hi, &spectral_ceiling(n, mode)) {
        return ChainCheck::NotApplicable;
    }
    if Rational::from_integer(m as i64) > spectral_edge_bound(n, mode) {
        ChainCheck::Holds
    } else {
        ChainCheck::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn apsp_examples() {
        let d = apsp(&Graph::complete(3).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), (i != j) as u32);
            }
        }
        let d = apsp(&Graph::path(3).unwrap()).unwrap();
        assert_eq!(d.row(0), &[0, 1, 2]);
        assert_eq!(d.row(1), &[1, 0, 1]);
        assert_eq!(d.row(2), &[2, 1, 0]);
        let k2 = Graph::complete(2).unwrap();
        assert!(matches!(
            apsp(&k2.disjoint_union(&k2)),
            Err(DistanceError::Disconnected(0, 2))
        ));
    }

    #[test]
    fn wiener_examples() {
        assert_eq!(wiener(&apsp(&Graph::path(3).unwrap()).unwrap()), 4);
        for n in 1..10 {
            let d = apsp(&Graph::complete(n).unwrap()).unwrap();
            assert_eq!(wiener(&d), (n * (n - 1) / 2) as u64);
        }
        // C_5: five pairs at distance 1 and five at distance 2.
        assert_eq!(wiener(&apsp(&Graph::cycle(5).unwrap()).unwrap()), 15);
    }

    #[test]
    fn rho_of_complete_graphs_is_exact() {
        for n in 2..12 {
            let d = apsp(&Graph::complete(n).unwrap()).unwrap();
            let est = rho_d(&d, 1e-9).unwrap();
            assert_eq!(est.iterations, 1);
            assert!((est.value - (n - 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn rho_of_p3_matches_characteristic_polynomial() {
        // det(λI - D(P_3)) = λ³ - 6λ - 4 = (λ + 2)(λ² - 2λ - 2).
        let est = rho_d(&apsp(&Graph::path(3).unwrap()).unwrap(), 1e-10).unwrap();
        let expected = 1.0 + 3f64.sqrt();
        assert!(est.contains(expected), "{est:?}");
        assert!(est.width() <= 1e-10);
    }

    #[test]
    fn rho_of_c4_is_four() {
        let est = rho_d(&apsp(&Graph::cycle(4).unwrap()).unwrap(), 1e-9).unwrap();
        assert!(est.contains(4.0));
    }

    #[test]
    fn single_vertex_and_bad_tolerance() {
        let d = apsp(&Graph::empty(1).unwrap()).unwrap();
        assert_eq!(rho_d(&d, 1e-9).unwrap().value, 0.0);
        assert!(matches!(rho_d(&d, 0.0), Err(DistanceError::InvalidTolerance(_))));
        assert!(matches!(
            rho_d(&d, f64::NAN),
            Err(DistanceError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_interval() {
        let d = apsp(&Graph::path(9).unwrap()).unwrap();
        let err = rho_d_with(&d, RhoOptions { tol: 1e-12, max_iter: 2 }).unwrap_err();
        match err {
            DistanceError::NoConvergence(est) => {
                assert_eq!(est.iterations, 2);
                assert!(est.lo < est.hi);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rayleigh_examples() {
        let k4 = apsp(&Graph::complete(4).unwrap()).unwrap();
        assert_eq!(rayleigh_lower_bound(&k4), Rational::from_integer(3));
        let p3 = apsp(&Graph::path(3).unwrap()).unwrap();
        assert_eq!(rayleigh_lower_bound(&p3), Rational::new(8, 3));
        assert!(8.0 / 3.0 <= rho_d(&p3, 1e-9).unwrap().lo);
        let c5 = apsp(&Graph::cycle(5).unwrap()).unwrap();
        assert_eq!(rayleigh_lower_bound(&c5), Rational::from_integer(6));
        assert!(rho_d(&c5, 1e-9).unwrap().contains(6.0));
    }

    #[test]
    fn wiener_degree_bound_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(
            wiener_degree_bound(&k4, BoundMode::General).unwrap(),
            Rational::from_integer(6)
        );
        let p4 = Graph::path(4).unwrap();
        assert_eq!(
            wiener_degree_bound(&p4, BoundMode::General).unwrap(),
            Rational::from_integer(9)
        );
        assert_eq!(wiener(&apsp(&p4).unwrap()), 10);
        let k66 = Graph::complete_bipartite(6, 6).unwrap();
        // W(K_{6,6}) = 36 + 2·2·C(6,2) = 96.
        assert_eq!(wiener(&apsp(&k66).unwrap()), 96);
        assert_eq!(
            wiener_degree_bound(&k66, BoundMode::BalancedBipartite).unwrap(),
            Rational::from_integer(96)
        );
        assert_eq!(
            wiener_degree_bound(&k4, BoundMode::BalancedBipartite),
            Err(DistanceError::ModeMismatch)
        );
        let k2 = Graph::complete(2).unwrap();
        assert!(matches!(
            wiener_degree_bound(&k2.disjoint_union(&k2), BoundMode::General),
            Err(DistanceError::Disconnected(..))
        ));
    }

    #[test]
    fn edge_bound_examples() {
        assert_eq!(spectral_edge_bound(12, BoundMode::General), Rational::from_integer(48));
        assert_eq!(
            spectral_edge_bound(12, BoundMode::BalancedBipartite),
            Rational::from_integer(27)
        );
        assert_eq!(spectral_edge_bound(16, BoundMode::General), Rational::from_integer(96));
        assert_eq!(spectral_ceiling(16, BoundMode::BalancedBipartite), Rational::from_integer(25));
        assert_eq!(spectral_ceiling(10, BoundMode::BalancedBipartite), Rational::from_integer(16));
    }

    #[test]
    fn edge_lower_bound_matches_degree_bound() {
        let g = Graph::complete(7).unwrap().delete_edges(&[(0, 1), (2, 5)]).unwrap();
        let w = wiener_degree_bound(&g, BoundMode::General).unwrap();
        let via_edges = edge_spectral_lower_bound(g.n(), g.m(), BoundMode::General);
        assert_eq!(w * Rational::new(2, g.n() as i64), via_edges);
    }

    #[test]
    fn comparisons() {
        let a = SpectralEstimate { lo: 1.0, hi: 1.5, value: 1.25, iterations: 1, residual: 0.0 };
        let b = SpectralEstimate { lo: 2.0, hi: 2.5, value: 2.25, iterations: 1, residual: 0.0 };
        assert_eq!(compare_le(&a, &b), Comparison::Holds);
        assert_eq!(compare_le(&b, &a), Comparison::Fails);
        assert_eq!(compare_le(&a, &a), Comparison::Indeterminate);
        assert_eq!(compare_lt_exact(&a, &Rational::new(3, 2)), Comparison::Indeterminate);
        assert_eq!(compare_lt_exact(&a, &Rational::new(16, 10)), Comparison::Holds);
        assert_eq!(compare_lt_exact(&b, &Rational::from_integer(2)), Comparison::Fails);
    }

    #[test]
    fn f64_rational_comparison_is_exact() {
        // 0.1f64 is slightly above 1/10.
        assert!(!f64_lt_rational(0.1, &Rational::new(1, 10)));
        assert!(f64_lt_rational(0.3, &Rational::new(3, 10)));
        assert!(f64_lt_rational(f64::NEG_INFINITY, &Rational::from_integer(0)));
        assert!(!f64_lt_rational(f64::INFINITY, &Rational::from_integer(0)));
    }
}
