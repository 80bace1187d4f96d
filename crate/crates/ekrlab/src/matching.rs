//! Perfect matchings of the complete graph on `2n` vertices, in canonical
//! form, with a fixed ranking order.
//!
//! Canonical form: each pair `(a, b)` has `a < b` and pairs are sorted by
//! first coordinate. Rank 0 matches every vertex to its successor; the order
//! recursively matches the smallest unmatched vertex to each larger partner in
//! ascending order.

use crate::budget::RANK_MATCHING_MAX_N;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
}

fn double_factorial_u64(k: i64) -> u64 {
    let mut acc = 1u64;
    let mut t = k;
    while t > 1 {
        acc *= t as u64;
        t -= 2;
    }
    acc
}

impl PerfectMatching {
    /// Builds a matching from `n` pairs covering `{0..2n-1}`, canonicalizing
    /// the representation.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = pairs.len();
        let mut seen = vec![false; 2 * n];
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(n);
        for (a, b) in pairs {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if a == b || b >= 2 * n || seen[a] || seen[b] {
                return Err(Error::InvalidParameter(format!(
                    "pairs do not partition 0..{}",
                    2 * n
                )));
            }
            seen[a] = true;
            seen[b] = true;
            canon.push((a, b));
        }
        canon.sort_unstable();
        Ok(Self { pairs: canon })
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The vertex matched with `v`.
    pub fn partner(&self, v: usize) -> usize {
        for &(a, b) in &self.pairs {
            if a == v {
                return b;
            }
            if b == v {
                return a;
            }
        }
        panic!("vertex {v} outside 0..{}", 2 * self.n());
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        let e = if a < b { (a, b) } else { (b, a) };
        self.pairs.binary_search(&e).is_ok()
    }

    /// Number of shared edges with another matching; 0 means the matchings
    /// are adjacent in the disjointness graph.
    pub fn common_edge_count(&self, other: &PerfectMatching) -> Result<usize> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self
            .pairs
            .iter()
            .filter(|&&(a, b)| other.contains_edge(a, b))
            .count())
    }

    /// Rank in the smallest-partner-first order.
    pub fn rank(&self) -> Result<u64> {
        let n = self.n();
        if n > RANK_MATCHING_MAX_N {
            return Err(Error::BudgetExceeded {
                name: "RANK_MATCHING_MAX_N",
                limit: RANK_MATCHING_MAX_N as u64,
                requested: n as u64,
            });
        }
        let mut free: Vec<usize> = (0..2 * n).collect();
        let mut rank = 0u64;
        while free.len() > 1 {
            let a = free[0];
            let b = self.partner(a);
            let idx = free.iter().position(|&v| v == b).expect("partner free");
            let block = double_factorial_u64(free.len() as i64 - 3);
            rank += (idx as u64 - 1) * block;
            free.retain(|&v| v != a && v != b);
        }
        Ok(rank)
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(n: usize, r: u64) -> Result<PerfectMatching> {
        if n > RANK_MATCHING_MAX_N {
            return Err(Error::BudgetExceeded {
                name: "RANK_MATCHING_MAX_N",
                limit: RANK_MATCHING_MAX_N as u64,
                requested: n as u64,
            });
        }
        let total = double_factorial_u64(2 * n as i64 - 1);
        if r >= total {
            return Err(Error::RankOutOfRange {
                what: "matching",
                rank: r,
                count: total,
            });
        }
        let mut free: Vec<usize> = (0..2 * n).collect();
        let mut pairs = Vec::with_capacity(n);
        let mut r = r;
        while free.len() > 1 {
            let block = double_factorial_u64(free.len() as i64 - 3);
            let idx = (r / block) as usize + 1;
            r %= block;
            let a = free[0];
            let b = free[idx];
            pairs.push((a, b));
            free.retain(|&v| v != a && v != b);
        }
        Ok(PerfectMatching { pairs })
    }
}
