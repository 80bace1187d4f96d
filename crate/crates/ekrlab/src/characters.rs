//! Symmetric-group characters by the Murnaghan-Nakayama recursion.
//!
//! Characters are evaluated through beta-sets (first-column hook lengths):
//! removing a border strip of length `r` corresponds to moving one beta
//! element down by `r`, with sign given by the number of beta elements it
//! jumps over. Values are memoized in a process-wide cache; entries are
//! deterministic, so concurrent recomputation is harmless.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;

use crate::counting::factorial;
use crate::error::{Error, Result};

/// A partition of `n`: non-increasing positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "{parts:?} is not a partition (non-increasing positive parts required)"
            )));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn ones(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }
}

impl std::fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join("+"))
    }
}

/// All partitions of `n`, first part descending (reverse lexicographic).
pub fn partitions_of(n: usize) -> Vec<IntegerPartition> {
    fn go(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
        if remaining == 0 {
            out.push(IntegerPartition {
                parts: prefix.clone(),
            });
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            prefix.push(p);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n.max(1), &mut Vec::new(), &mut out);
    if n == 0 {
        out.push(IntegerPartition { parts: vec![] });
    }
    out
}

/// Partitions of `n` with every part at least 2: the cycle types of
/// fixed-point-free permutations.
pub fn partitions_no_ones(n: usize) -> Vec<IntegerPartition> {
    partitions_of(n)
        .into_iter()
        .filter(|p| p.parts.iter().all(|&x| x >= 2))
        .collect()
}

/// Size of the conjugacy class with the given cycle type: `n! / z_mu` where
/// `z_mu = prod_k k^{m_k} m_k!`.
pub fn class_size(mu: &IntegerPartition) -> BigInt {
    let n = mu.sum();
    let mut z: BigInt = BigInt::from(1);
    let mut run = 1usize;
    for (idx, &p) in mu.parts.iter().enumerate() {
        z *= p as u64;
        if idx + 1 < mu.parts.len() && mu.parts[idx + 1] == p {
            run += 1;
            z *= run as u64;
        } else {
            run = 1;
        }
    }
    factorial(n as u64) / z
}

type CharKey = (Vec<usize>, Vec<usize>);

fn cache() -> &'static RwLock<HashMap<CharKey, i64>> {
    static CACHE: OnceLock<RwLock<HashMap<CharKey, i64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Beta-set of a partition: strictly decreasing first-column hook lengths.
fn beta_set(parts: &[usize]) -> Vec<usize> {
    let k = parts.len();
    parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i))
        .collect()
}

/// Partition recovered from a beta-set (drops zero rows).
fn partition_from_beta(mut beta: Vec<usize>) -> Vec<usize> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    while let Some(&last) = beta.last() {
        // A trailing staircase 0 means an empty row: strip and renormalize.
        if last == 0 {
            beta.pop();
            for b in beta.iter_mut() {
                *b -= 1;
            }
        } else {
            break;
        }
    }
    let k = beta.len();
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (k - 1 - i))
        .collect()
}

fn chi_recursive(lambda: &[usize], mu: &[usize]) -> i64 {
    if lambda.is_empty() {
        return 1; // both sums are zero here
    }
    let key: CharKey = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = cache().read().expect("cache poisoned").get(&key) {
        return v;
    }
    let r = mu[0];
    let rest = &mu[1..];
    let beta = beta_set(lambda);
    let mut total = 0i64;
    for (pos, &h) in beta.iter().enumerate() {
        if h < r {
            continue;
        }
        let target = h - r;
        if beta.contains(&target) {
            continue;
        }
        // Height of the strip = number of beta elements strictly between
        // target and h.
        let height = beta
            .iter()
            .filter(|&&b| b > target && b < h)
            .count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut new_beta = beta.clone();
        new_beta[pos] = target;
        let sub = partition_from_beta(new_beta);
        total += sign * chi_recursive(&sub, rest);
    }
    cache().write().expect("cache poisoned").insert(key, total);
    total
}

/// Irreducible character of the symmetric group: `chi_lambda` evaluated on
/// the conjugacy class of cycle type `mu`.
pub fn mn_character(lambda: &IntegerPartition, mu: &IntegerPartition) -> Result<i64> {
    if lambda.sum() != mu.sum() {
        return Err(Error::SizeMismatch {
            left: lambda.sum(),
            right: mu.sum(),
        });
    }
    Ok(chi_recursive(lambda.parts(), mu.parts()))
}

/// Dimension of the irreducible representation indexed by `lambda`.
pub fn dimension(lambda: &IntegerPartition) -> i64 {
    chi_recursive(lambda.parts(), &vec![1; lambda.sum()])
}
