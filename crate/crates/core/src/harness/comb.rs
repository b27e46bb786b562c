//! Exhaustive checks of two integer inequalities used in the edge-count
//! arguments.
//!
//! Binomial shift: `C(a,2) + C(b,2) < C(a+1,2) + C(b-1,2)` for `1 ≤ b ≤ a`.
//!
//! Product sum: for `s` pairs of non-negative integers `(a_i, b_i)` with
//! `a_i + b_i ≥ 2`, totals `a = Σ a_i`, `b = Σ b_i` and `b ≥ a`,
//! `Σ a_i b_i ≤ a (b - (s - 1))`.
//!
//! The product-sum check maximises `Σ a_i b_i` for every pair of totals by
//! dynamic programming over the pairs, which covers every tuple with entries
//! up to `value_max` without listing them one by one.

fn choose2(x: i64) -> i64 {
    x * (x - 1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialShiftRow {
    pub a: i64,
    pub checked: u64,
    /// Smallest `rhs - lhs` over `b ∈ [1, a]`.
    pub min_slack: i64,
    pub failures: Vec<i64>,
}

pub fn check_binomial_shift(a_max: i64) -> Vec<BinomialShiftRow> {
    (1..=a_max)
        .map(|a| {
            let mut row = BinomialShiftRow {
                a,
                checked: 0,
                min_slack: i64::MAX,
                failures: Vec::new(),
            };
            for b in 1..=a {
                let lhs = choose2(a) + choose2(b);
                let rhs = choose2(a + 1) + choose2(b - 1);
                row.checked += 1;
                row.min_slack = row.min_slack.min(rhs - lhs);
                if lhs >= rhs {
                    row.failures.push(b);
                }
            }
            row
        })
        .collect()
}

/// Table of `max Σ a_i b_i` over `s`-tuples of admissible pairs with given
/// totals, indexed `[a][b]`; `None` where no tuple has those totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSumTable {
    pub s: usize,
    pub value_max: i64,
    pub best: Vec<Vec<Option<i64>>>,
    /// Last pair of one maximising tuple, for witness reconstruction.
    choice: Vec<Vec<(i64, i64)>>,
}

fn admissible_pairs(value_max: i64) -> Vec<(i64, i64)> {
    (0..=value_max)
        .flat_map(|x| (0..=value_max).map(move |y| (x, y)))
        .filter(|&(x, y)| x + y >= 2)
        .collect()
}

/// Tables for `s = 1..=s_max`.
pub fn product_sum_tables(s_max: usize, value_max: i64) -> Vec<ProductSumTable> {
    let pairs = admissible_pairs(value_max);
    let mut tables: Vec<ProductSumTable> = Vec::with_capacity(s_max);
    for s in 1..=s_max {
        let side = (s as i64 * value_max + 1) as usize;
        let mut best = vec![vec![None; side]; side];
        let mut choice = vec![vec![(0, 0); side]; side];
        match tables.last() {
            None => {
                for &(x, y) in &pairs {
                    best[x as usize][y as usize] = Some(x * y);
                    choice[x as usize][y as usize] = (x, y);
                }
            }
            Some(prev) => {
                for (pa, row) in prev.best.iter().enumerate() {
                    for (pb, cell) in row.iter().enumerate() {
                        let Some(v) = cell else { continue };
                        for &(x, y) in &pairs {
                            let (a, b) = (pa + x as usize, pb + y as usize);
                            let cand = v + x * y;
                            if best[a][b].is_none_or(|cur| cand > cur) {
                                best[a][b] = Some(cand);
                                choice[a][b] = (x, y);
                            }
                        }
                    }
                }
            }
        }
        tables.push(ProductSumTable {
            s,
            value_max,
            best,
            choice,
        });
    }
    tables
}

/// Reconstructs a maximising tuple for totals `(a, b)` at `tables[s-1]`.
pub fn product_sum_witness(tables: &[ProductSumTable], s: usize, a: usize, b: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(s);
    let (mut a, mut b) = (a, b);
    for t in (0..s).rev() {
        let (x, y) = tables[t].choice[a][b];
        out.push((x, y));
        a -= x as usize;
        b -= y as usize;
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSumRow {
    pub s: usize,
    /// Number of `(a, b)` totals with `b ≥ a` reachable by some tuple.
    pub totals_checked: u64,
    pub min_slack: i64,
    pub tight_at: (usize, usize),
    /// Maximising tuples that break the inequality.
    pub failures: Vec<Vec<(i64, i64)>>,
}

pub fn check_product_sum(s_max: usize, value_max: i64) -> Vec<ProductSumRow> {
    let tables = product_sum_tables(s_max, value_max);
    tables
        .iter()
        .map(|t| {
            let mut row = ProductSumRow {
                s: t.s,
                totals_checked: 0,
                min_slack: i64::MAX,
                tight_at: (0, 0),
                failures: Vec::new(),
            };
            for (a, cells) in t.best.iter().enumerate() {
                for (b, cell) in cells.iter().enumerate().skip(a) {
                    let Some(sum) = *cell else { continue };
                    row.totals_checked += 1;
                    let slack = a as i64 * (b as i64 - (t.s as i64 - 1)) - sum;
                    if slack < row.min_slack {
                        row.min_slack = slack;
                        row.tight_at = (a, b);
                    }
                    if slack < 0 {
                        row.failures.push(product_sum_witness(&tables, t.s, a, b));
                    }
                }
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_shift_small() {
        let rows = check_binomial_shift(5);
        assert_eq!(rows.len(), 5);
        // a = b = 1: 0 + 0 < 1 + 0
        assert_eq!(rows[0].min_slack, 1);
        assert!(rows.iter().all(|r| r.failures.is_empty()));
    }

    #[test]
    fn product_sum_boundary_cases() {
        let rows = check_product_sum(2, 3);
        // s = 1, (1, 1): 1 <= 1
        assert_eq!(rows[0].min_slack, 0);
        assert!(rows.iter().all(|r| r.failures.is_empty()));
        let tables = product_sum_tables(2, 3);
        // s = 2, totals (2, 3): best is (1,1) + (1,2) = 3 <= 2·(3-1)
        assert_eq!(tables[1].best[2][3], Some(3));
        let w = product_sum_witness(&tables, 2, 2, 3);
        assert_eq!(w.iter().map(|p| p.0).sum::<i64>(), 2);
        assert_eq!(w.iter().map(|p| p.1).sum::<i64>(), 3);
        assert_eq!(w.iter().map(|p| p.0 * p.1).sum::<i64>(), 3);
    }
}
