//! Exact fractional packing number by partition enumeration.

use super::{partition_ratio, PackingError, Partition};
use crate::graph::Graph;
use crate::rational::Rational;

pub const DEFAULT_MAX_ENUM_N: usize = 12;

struct Search {
    n: usize,
    /// Neighbours of `v` among `0..v`.
    earlier: Vec<u64>,
    rgs: Vec<usize>,
    masks: Vec<u64>,
    best: (u64, usize),
    best_rgs: Vec<usize>,
}

impl Search {
    // a/(s-1) vs b/(t-1)
    fn cmp_ratio(a: u64, s: usize, b: u64, t: usize) -> std::cmp::Ordering {
        (a as u128 * (t as u128 - 1)).cmp(&(b as u128 * (s as u128 - 1)))
    }

    fn better(&self, crossing: u64, s: usize) -> bool {
        use std::cmp::Ordering::*;
        let (bc, bs) = self.best;
        match Self::cmp_ratio(crossing, s, bc, bs) {
            Less => true,
            Greater => false,
            Equal => s < bs || (s == bs && self.rgs < self.best_rgs),
        }
    }

    fn dfs(&mut self, v: usize, blocks: usize, crossing: u64) {
        let remaining = self.n - v;
        let s_max = blocks + remaining;
        if s_max < 2 {
            return;
        }
        let (bc, bs) = self.best;
        if Self::cmp_ratio(crossing, s_max, bc, bs).is_gt() {
            return;
        }
        if v == self.n {
            if self.better(crossing, blocks) {
                self.best = (crossing, blocks);
                self.best_rgs.clone_from(&self.rgs);
            }
            return;
        }
        let nb = self.earlier[v];
        let total = nb.count_ones() as u64;
        for b in 0..=blocks {
            let inside = if b < blocks {
                (nb & self.masks[b]).count_ones() as u64
            } else {
                self.masks.push(0);
                0
            };
            self.rgs[v] = b;
            self.masks[b] |= 1 << v;
            let next_blocks = if b == blocks { blocks + 1 } else { blocks };
            self.dfs(v + 1, next_blocks, crossing + total - inside);
            self.masks[b] &= !(1 << v);
            if b == blocks {
                self.masks.pop();
            }
        }
    }
}

/// Minimises the partition objective over all partitions with at least two
/// blocks. Ties go to the fewest blocks, then to the lexicographically first
/// restricted-growth labelling. Disconnected graphs give 0.
pub fn nu_f_exact(g: &Graph, max_n: usize) -> Result<(Rational, Partition), PackingError> {
    let n = g.n();
    if n < 2 {
        return Err(PackingError::Trivial);
    }
    let limit = max_n.min(64);
    if n > limit {
        return Err(PackingError::TooLarge { n, max: limit });
    }
    let earlier = (0..n)
        .map(|v| g.neighbor_bits(v)[0] & ((1u64 << v) - 1))
        .collect();
    let mut search = Search {
        n,
        earlier,
        rgs: vec![0; n],
        masks: Vec::with_capacity(n),
        // all singletons
        best: (g.m() as u64, n),
        best_rgs: (0..n).collect(),
    };
    search.dfs(0, 0, 0);
    let s = search.best.1;
    let mut blocks = vec![Vec::new(); s];
    for (v, &b) in search.best_rgs.iter().enumerate() {
        blocks[b].push(v);
    }
    let p = partition_ratio(g, &blocks)?;
    Ok((p.objective, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(g: &Graph) -> Rational {
        nu_f_exact(g, DEFAULT_MAX_ENUM_N).unwrap().0
    }

    #[test]
    fn small_families() {
        assert_eq!(nu(&Graph::cycle(4).unwrap()), Rational::new(4, 3));
        assert_eq!(nu(&Graph::complete(4).unwrap()), Rational::from_integer(2));
        assert_eq!(nu(&Graph::complete(2).unwrap()), Rational::from_integer(1));
        for n in 2..=9 {
            assert_eq!(nu(&Graph::path(n).unwrap()), Rational::from_integer(1));
        }
        // K_n: n(n-1)/2 / (n-1) = n/2
        for n in 2..=9 {
            assert_eq!(nu(&Graph::complete(n).unwrap()), Rational::new(n as i64, 2));
        }
        // C_n: n/(n-1)
        for n in 3..=10 {
            assert_eq!(nu(&Graph::cycle(n).unwrap()), Rational::new(n as i64, n as i64 - 1));
        }
    }

    #[test]
    fn tie_break_prefers_fewest_blocks() {
        let (val, p) = nu_f_exact(&Graph::path(4).unwrap(), 12).unwrap();
        assert_eq!(val, Rational::from_integer(1));
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn disconnected_is_zero() {
        let g = Graph::empty(3).unwrap();
        let (val, p) = nu_f_exact(&g, 12).unwrap();
        assert_eq!(val, Rational::from_integer(0));
        assert_eq!(p.block_count(), 2);
    }

    #[test]
    fn size_limits() {
        assert_eq!(nu_f_exact(&Graph::empty(1).unwrap(), 12), Err(PackingError::Trivial));
        assert!(matches!(
            nu_f_exact(&Graph::path(13).unwrap(), 12),
            Err(PackingError::TooLarge { n: 13, max: 12 })
        ));
    }
}
