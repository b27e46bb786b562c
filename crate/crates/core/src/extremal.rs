//! The two extremal families and an exact route to their distance spectral
//! radius.
//!
//! Both constructions have an obvious orbit partition that is equitable for
//! the distance matrix, so the Perron root of `D` equals the Perron root of a
//! 3×3 (resp. 4×4) integer quotient matrix `B`. That root is located by
//! bisection on a dyadic grid using exact integer arithmetic: `x > ρ(B)`
//! exactly when `xI - B` is a nonsingular M-matrix, i.e. when every leading
//! principal minor is positive. The characteristic polynomial of `B` is
//! expanded exactly and its sign change across the final bracket is checked
//! as well.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{
    apsp, compare_lt_exact, rational_ceil_f64, rational_floor_f64, rayleigh_lower_bound, rho_d, BoundMode,
    Comparison, DistanceError, DistanceMatrix, SpectralEstimate,
};
use crate::graph::{Edge, Graph};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtremalError {
    #[error("invalid extremal spec: {0}")]
    InvalidSpec(String),
    #[error("orbit partition is not equitable between blocks {0} and {1}")]
    NotEquitable(usize, usize),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error("quotient interval [{}, {}] and full-matrix interval [{}, {}] disagree", .quotient.lo, .quotient.hi, .full.lo, .full.hi)]
    CrossCheck {
        quotient: SpectralEstimate,
        full: SpectralEstimate,
    },
    #[error("bisection bracket invalid: {0}")]
    Bracket(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalFamily {
    /// `K_{k-1} ∨ (K_{n-k} ∪ K_1)`.
    #[serde(rename = "g1")]
    G1Join,
    /// `K_{n/2,n/2} ∖ E(K_{1,n/2-k+1})`.
    #[serde(rename = "g2")]
    G2Bipartite,
}

impl ExtremalFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtremalFamily::G1Join => "g1",
            ExtremalFamily::G2Bipartite => "g2",
        }
    }

    pub fn bound_mode(self) -> BoundMode {
        match self {
            ExtremalFamily::G1Join => BoundMode::General,
            ExtremalFamily::G2Bipartite => BoundMode::BalancedBipartite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub family: ExtremalFamily,
    pub k: usize,
    pub n: usize,
}

impl ExtremalSpec {
    pub fn new(family: ExtremalFamily, k: usize, n: usize) -> Self {
        Self { family, k, n }
    }

    pub fn validate(&self) -> Result<(), ExtremalError> {
        let Self { family, k, n } = *self;
        if k < 2 {
            return Err(ExtremalError::InvalidSpec(format!("k = {k} must be at least 2")));
        }
        match family {
            ExtremalFamily::G1Join if n < k + 1 => Err(ExtremalError::InvalidSpec(format!(
                "g1 needs n >= k + 1, got n = {n}, k = {k}"
            ))),
            ExtremalFamily::G2Bipartite if n % 2 == 1 => Err(ExtremalError::InvalidSpec(
                format!("g2 needs even n, got {n}"),
            )),
            ExtremalFamily::G2Bipartite if n / 2 < k + 1 => Err(ExtremalError::InvalidSpec(
                format!("g2 needs n/2 >= k + 1, got n = {n}, k = {k}"),
            )),
            _ => Ok(()),
        }
    }

    /// Order hypothesis of the spectral-radius bound for this family:
    /// `n ≥ 2k + 6` (g1) or `n ≥ 4k + 4` (g2).
    pub fn in_lemma_hypothesis(&self) -> bool {
        match self.family {
            ExtremalFamily::G1Join => self.n >= 2 * self.k + 6,
            ExtremalFamily::G2Bipartite => self.n >= 4 * self.k + 4,
        }
    }

    /// `n + 2` for g1, `3n/2 + 1` for g2.
    pub fn spectral_bound(&self) -> Rational {
        crate::distance::spectral_ceiling(self.n, self.family.bound_mode())
    }

    /// Orbit blocks, fixed by the constructor's labelling.
    ///
    /// g1: `K_{k-1}` = `0..k-1`, `K_{n-k}` = `k-1..n-1`, `K_1` = `n-1`.
    /// g2: `u = 0`, `X ∖ u` = `1..h`, removed neighbours `h..2h-k+1`, the
    /// remaining `Y` = `2h-k+1..n`, where `h = n/2`.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let Self { k, n, .. } = *self;
        match self.family {
            ExtremalFamily::G1Join => {
                vec![(0..k - 1).collect(), (k - 1..n - 1).collect(), vec![n - 1]]
            }
            ExtremalFamily::G2Bipartite => {
                let h = n / 2;
                let cut = 2 * h - k + 1;
                vec![vec![0], (1..h).collect(), (h..cut).collect(), (cut..n).collect()]
            }
        }
    }
}

pub fn build_extremal(spec: &ExtremalSpec) -> Result<Graph, ExtremalError> {
    spec.validate()?;
    let ExtremalSpec { k, n, .. } = *spec;
    let g = match spec.family {
        ExtremalFamily::G1Join => {
            let clique = Graph::complete(k - 1).expect("k >= 2");
            let rest = Graph::complete(n - k)
                .expect("n > k")
                .disjoint_union(&Graph::complete(1).expect("K_1"));
            clique.join(&rest)
        }
        ExtremalFamily::G2Bipartite => {
            let h = n / 2;
            let star: Vec<Edge> = (h..2 * h - k + 1).map(|y| (0, y)).collect();
            Graph::complete_bipartite(h, h)
                .expect("h >= 1")
                .delete_edges(&star)
                .expect("star edges exist in K_{h,h}")
        }
    };
    Ok(g)
}

/// Block-to-block row sums of an equitable partition of `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMatrix {
    pub block_sizes: Vec<usize>,
    pub entries: Vec<Vec<u64>>,
}

impl QuotientMatrix {
    pub fn size(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn max_row_sum(&self) -> u64 {
        self.entries.iter().map(|r| r.iter().sum()).max().unwrap_or(0)
    }
}

/// Builds the quotient of `dm` over `blocks`, failing if any vertex of a
/// block sees a different total distance into another block.
pub fn quotient_matrix(
    dm: &DistanceMatrix,
    blocks: &[Vec<usize>],
) -> Result<QuotientMatrix, ExtremalError> {
    let mut entries = vec![vec![0u64; blocks.len()]; blocks.len()];
    for (bi, block) in blocks.iter().enumerate() {
        for (bj, other) in blocks.iter().enumerate() {
            let sum_into = |v: usize| other.iter().map(|&w| dm.get(v, w) as u64).sum::<u64>();
            let first = sum_into(block[0]);
            if block[1..].iter().any(|&v| sum_into(v) != first) {
                return Err(ExtremalError::NotEquitable(bi, bj));
            }
            entries[bi][bj] = first;
        }
    }
    Ok(QuotientMatrix {
        block_sizes: blocks.iter().map(Vec::len).collect(),
        entries,
    })
}

/// Coefficients `c_0, …, c_r` of `det(λI - B)` (so `c_r = 1`), by the
/// Faddeev–LeVerrier recursion in exact integer arithmetic.
pub fn characteristic_polynomial(q: &QuotientMatrix) -> Vec<BigInt> {
    let r = q.size();
    let a: Vec<Vec<BigInt>> = q
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); r + 1];
    coeffs[r] = BigInt::one();
    // M_0 = 0, M_j = A M_{j-1} + c_{r-j+1} I, c_{r-j} = -tr(A M_j) / j.
    let mut m = vec![vec![BigInt::zero(); r]; r];
    for j in 1..=r {
        let mut am = mat_mul(&a, &m);
        for (i, row) in am.iter_mut().enumerate() {
            row[i] += &coeffs[r - j + 1];
        }
        m = am;
        let trace: BigInt = (0..r).map(|i| {
            let row: BigInt = (0..r).map(|l| &a[i][l] * &m[l][i]).sum();
            row
        }).sum();
        let (quot, rem) = (-trace).div_rem(&BigInt::from(j));
        debug_assert!(rem.is_zero(), "Faddeev–LeVerrier division is exact for integer matrices");
        coeffs[r - j] = quot;
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Sign of `p(num / 2^shift)` for integer coefficients, scaled by
/// `2^{shift·deg}` so everything stays integral.
fn poly_sign_at(coeffs: &[BigInt], num: &BigInt, shift: u32) -> i32 {
    let deg = coeffs.len() - 1;
    let mut total = BigInt::zero();
    let mut pow = BigInt::one();
    for (i, c) in coeffs.iter().enumerate() {
        total += (c * &pow) << (shift as usize * (deg - i));
        pow *= num;
    }
    if total.is_positive() {
        1
    } else if total.is_negative() {
        -1
    } else {
        0
    }
}

/// Whether `num/2^shift · I - B` has all leading principal minors positive,
/// which for a nonnegative irreducible `B` is equivalent to
/// `num/2^shift > ρ(B)`.
fn exceeds_perron_root(q: &QuotientMatrix, num: &BigInt, shift: u32) -> bool {
    let r = q.size();
    let scale = BigInt::one() << shift as usize;
    let mut m: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let b = BigInt::from(q.entries[i][j]) * &scale;
                    if i == j {
                        num - b
                    } else {
                        -b
                    }
                })
                .collect()
        })
        .collect();
    // Fraction-free elimination: after step k the pivot m[k][k] is the
    // leading principal minor of order k + 1.
    let mut prev = BigInt::one();
    for k in 0..r {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..r {
            for j in k + 1..r {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    true
}

/// Perron root of `q` bracketed to width at most `tol / 2` on a dyadic grid.
///
/// `lower` must not exceed the root (e.g. `2W/n`); the upper start is the
/// largest row sum plus one.
pub fn quotient_perron_root(
    q: &QuotientMatrix,
    lower: &Rational,
    tol: f64,
) -> Result<SpectralEstimate, ExtremalError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(DistanceError::InvalidTolerance(tol).into());
    }
    let shift = (2.0 / tol).log2().ceil().max(1.0) as u32;
    if shift > 52 {
        return Err(DistanceError::InvalidTolerance(tol).into());
    }
    let scale = BigInt::one() << shift as usize;
    let mut lo = (BigInt::from(*lower.numer()) * &scale).div_floor(&BigInt::from(*lower.denom()));
    let mut hi = BigInt::from(q.max_row_sum() + 1) * &scale;
    if exceeds_perron_root(q, &lo, shift) {
        return Err(ExtremalError::Bracket("lower start already exceeds the root".into()));
    }
    if !exceeds_perron_root(q, &hi, shift) {
        return Err(ExtremalError::Bracket("upper start does not exceed the root".into()));
    }
    let mut steps = 0;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1usize;
        if exceeds_perron_root(q, &mid, shift) {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    let coeffs = characteristic_polynomial(q);
    let (s_lo, s_hi) = (poly_sign_at(&coeffs, &lo, shift), poly_sign_at(&coeffs, &hi, shift));
    if s_hi <= 0 || s_lo > 0 {
        return Err(ExtremalError::Bracket(format!(
            "characteristic polynomial signs ({s_lo}, {s_hi}) do not straddle the root"
        )));
    }
    let grid = |x: &BigInt| {
        Rational::new(
            i64::try_from(x.clone()).expect("grid value fits in i64"),
            1i64 << shift,
        )
    };
    let (flo, fhi) = (rational_floor_f64(&grid(&lo)), rational_ceil_f64(&grid(&hi)));
    Ok(SpectralEstimate {
        lo: flo,
        hi: fhi,
        value: 0.5 * (flo + fhi),
        iterations: steps,
        residual: fhi - flo,
    })
}

/// Distance spectral radius of an extremal graph by two independent routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRho {
    pub spec: ExtremalSpec,
    /// Quotient-matrix bisection interval.
    pub estimate: SpectralEstimate,
    /// Power iteration on the full distance matrix.
    pub full: SpectralEstimate,
    pub quotient: QuotientMatrix,
}

pub fn exact_rho_extremal(spec: &ExtremalSpec, tol: f64) -> Result<ExtremalRho, ExtremalError> {
    let g = build_extremal(spec)?;
    let dm = apsp(&g)?;
    let quotient = quotient_matrix(&dm, &spec.blocks())?;
    let estimate = quotient_perron_root(&quotient, &rayleigh_lower_bound(&dm), tol)?;
    let full = rho_d(&dm, tol)?;
    if !estimate.intersects(&full, 2.0 * tol) {
        return Err(ExtremalError::CrossCheck { quotient: estimate, full });
    }
    Ok(ExtremalRho {
        spec: *spec,
        estimate,
        full,
        quotient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
            Verdict::Error => "ERROR",
        }
    }
}

/// One `(k, n)` row of a spectral-bound sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub family: ExtremalFamily,
    pub k: usize,
    pub n: usize,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub full_lo: Option<f64>,
    pub full_hi: Option<f64>,
    #[serde(with = "rational::serde_rational")]
    pub bound: Rational,
    pub in_hypothesis: bool,
    pub verdict: Verdict,
    pub error: Option<String>,
}

/// Checks `ρ_D < bound` for every `(k, n)` pair; odd `n` is skipped for g2.
/// Rows below the order hypothesis are still evaluated and flagged.
pub fn check_lemma_bounds(
    family: ExtremalFamily,
    ks: &[usize],
    ns: &[usize],
    tol: f64,
) -> Vec<LemmaRow> {
    let specs: Vec<ExtremalSpec> = ks
        .iter()
        .flat_map(|&k| ns.iter().map(move |&n| ExtremalSpec::new(family, k, n)))
        .filter(|s| s.family == ExtremalFamily::G1Join || s.n % 2 == 0)
        .collect();
    specs.par_iter().map(|spec| lemma_row(spec, tol)).collect()
}

fn lemma_row(spec: &ExtremalSpec, tol: f64) -> LemmaRow {
    let mut row = LemmaRow {
        family: spec.family,
        k: spec.k,
        n: spec.n,
        lo: None,
        hi: None,
        full_lo: None,
        full_hi: None,
        bound: spec.spectral_bound(),
        in_hypothesis: spec.in_lemma_hypothesis(),
        verdict: Verdict::Error,
        error: None,
    };
    match exact_rho_extremal(spec, tol) {
        Ok(rho) => {
            row.lo = Some(rho.estimate.lo);
            row.hi = Some(rho.estimate.hi);
            row.full_lo = Some(rho.full.lo);
            row.full_hi = Some(rho.full.hi);
            row.verdict = match compare_lt_exact(&rho.estimate, &row.bound) {
                Comparison::Holds => Verdict::Pass,
                Comparison::Fails => Verdict::Fail,
                Comparison::Indeterminate => Verdict::Indeterminate,
            };
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(k: usize, n: usize) -> ExtremalSpec {
        ExtremalSpec::new(ExtremalFamily::G1Join, k, n)
    }

    fn g2(k: usize, n: usize) -> ExtremalSpec {
        ExtremalSpec::new(ExtremalFamily::G2Bipartite, k, n)
    }

    #[test]
    fn constructor_counts() {
        let g = build_extremal(&g1(2, 12)).unwrap();
        assert_eq!((g.n(), g.m()), (12, 56));
        assert_eq!(g.min_degree(), 1);
        assert_eq!(g.degree(11), 1);

        let g = build_extremal(&g2(2, 12)).unwrap();
        assert_eq!(g.m(), 31);
        assert_eq!(g.degree(0), 1);
        assert!(g.classify().is_balanced_bipartite);

        assert_eq!(build_extremal(&g1(3, 14)).unwrap().m(), 80);
    }

    #[test]
    fn invalid_specs() {
        assert!(build_extremal(&g1(1, 10)).is_err());
        assert!(build_extremal(&g1(5, 5)).is_err());
        assert!(build_extremal(&g2(2, 13)).is_err());
        assert!(build_extremal(&g2(3, 6)).is_err());
        assert!(build_extremal(&g2(3, 8)).is_ok());
    }

    #[test]
    fn diameters_and_pendant_degree() {
        for k in 2..5 {
            for n in 2 * k + 6..2 * k + 10 {
                let g = build_extremal(&g1(k, n)).unwrap();
                let d = apsp(&g).unwrap();
                assert_eq!(d.diameter(), 2);
                assert_eq!((0..n).filter(|&v| g.degree(v) == k - 1).count(), 1);
            }
            for n in (4 * k + 4..4 * k + 10).step_by(2) {
                let g = build_extremal(&g2(k, n)).unwrap();
                let d = apsp(&g).unwrap();
                assert_eq!(d.diameter(), 3);
                assert_eq!((0..n).filter(|&v| g.degree(v) == k - 1).count(), 1);
            }
        }
    }

    #[test]
    fn orbit_partitions_are_equitable() {
        for spec in [g1(2, 12), g1(4, 20), g2(2, 12), g2(5, 30), g2(3, 8)] {
            let dm = apsp(&build_extremal(&spec).unwrap()).unwrap();
            let q = quotient_matrix(&dm, &spec.blocks()).unwrap();
            assert_eq!(q.block_sizes.iter().sum::<usize>(), spec.n);
        }
    }

    #[test]
    fn non_equitable_partition_is_rejected() {
        let dm = apsp(&Graph::path(4).unwrap()).unwrap();
        let err = quotient_matrix(&dm, &[vec![0, 1], vec![2, 3]]).unwrap_err();
        assert_eq!(err, ExtremalError::NotEquitable(0, 1));
    }

    #[test]
    fn characteristic_polynomial_of_small_matrix() {
        // B = [[0, 2], [2, 0]]: λ² - 4.
        let q = QuotientMatrix {
            block_sizes: vec![1, 1],
            entries: vec![vec![0, 2], vec![2, 0]],
        };
        let c = characteristic_polynomial(&q);
        assert_eq!(c, vec![BigInt::from(-4), BigInt::zero(), BigInt::one()]);
        // D(P_3) as its own quotient: λ³ - 6λ - 4.
        let q = QuotientMatrix {
            block_sizes: vec![1, 1, 1],
            entries: vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
        };
        let c = characteristic_polynomial(&q);
        let expect: Vec<BigInt> = [-4, -6, 0, 1].into_iter().map(BigInt::from).collect();
        assert_eq!(c, expect);
        let root = quotient_perron_root(&q, &Rational::new(8, 3), 1e-10).unwrap();
        assert!(root.contains(1.0 + 3f64.sqrt()));
        assert!(root.width() <= 1e-10);
    }

    #[test]
    fn g1_k2_n12_below_bound_and_cross_checked() {
        let rho = exact_rho_extremal(&g1(2, 12), 1e-9).unwrap();
        assert!(rho.estimate.lo > 11.0 && rho.estimate.hi < 14.0);
        assert!(rho.estimate.intersects(&rho.full, 2e-9));
        assert_eq!(rho.quotient.size(), 3);
    }

    #[test]
    fn g2_k2_n12_below_bound() {
        let rho = exact_rho_extremal(&g2(2, 12), 1e-9).unwrap();
        assert!(rho.estimate.hi < 19.0);
        assert_eq!(rho.quotient.size(), 4);
    }

    #[test]
    fn sweeps() {
        let ns: Vec<usize> = (10..=40).collect();
        let rows = check_lemma_bounds(ExtremalFamily::G1Join, &[2], &ns, 1e-9);
        assert_eq!(rows.len(), 31);
        assert!(rows.iter().all(|r| r.verdict == Verdict::Pass && r.in_hypothesis));

        let ns: Vec<usize> = (16..=40).collect();
        let rows = check_lemma_bounds(ExtremalFamily::G2Bipartite, &[3], &ns, 1e-9);
        assert_eq!(rows.len(), 13);
        assert!(rows.iter().all(|r| r.verdict == Verdict::Pass));

        let rows = check_lemma_bounds(ExtremalFamily::G1Join, &[2], &[8], 1e-9);
        assert!(!rows[0].in_hypothesis);
        assert_ne!(rows[0].verdict, Verdict::Error);
    }
}
