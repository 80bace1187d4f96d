//! Exact counting for the two graph families.
//!
//! All counts are arbitrary-precision integers; nothing here touches floating
//! point. `d_n` (derangements) follows the integer recurrence
//! `d_n = n*d_{n-1} + (-1)^n`, and the matching valency uses the alternating
//! binomial / double-factorial sum, so every value is exact at every size.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc: BigInt = One::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return Zero::zero();
    }
    let k = k.min(n - k);
    let mut acc: BigInt = One::one();
    for t in 1..=k {
        acc = acc * (n - k + t) / t;
    }
    acc
}

/// Odd double factorial `k!! = k (k-2) (k-4) ... 1`.
///
/// The empty product convention applies for `k` in `{-1, 0, 1}`. Arguments
/// below `-1`, or even arguments of 2 or more, are rejected.
pub fn double_factorial(k: i64) -> Result<BigInt> {
    if k < -1 {
        return Err(Error::InvalidParameter(format!(
            "double_factorial: argument {k} below -1"
        )));
    }
    if k >= 2 && k % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "double_factorial: even argument {k}"
        )));
    }
    let mut acc: BigInt = One::one();
    let mut t = k;
    while t > 1 {
        acc *= t;
        t -= 2;
    }
    Ok(acc)
}

/// `(2n-1)!!`, the number of perfect matchings of the complete graph on `2n`
/// vertices.
pub fn matchings_count(n: u64) -> BigInt {
    double_factorial(2 * n as i64 - 1).expect("2n-1 is odd")
}

/// Number of derangements of an `n`-set, by the integer recurrence
/// `d_n = n*d_{n-1} + (-1)^n` with `d_0 = 1`.
pub fn derangement_count(n: u64) -> BigInt {
    let mut d: BigInt = One::one();
    for k in 1..=n {
        d = d * k + if k % 2 == 0 { 1 } else { -1 };
    }
    d
}

/// Valency of the perfect-matching disjointness graph: the number of perfect
/// matchings of `K_{2n}` sharing no edge with a fixed one, by inclusion and
/// exclusion over the fixed matching's edges.
pub fn matching_derangement_degree(n: u64) -> BigInt {
    let mut acc: BigInt = Zero::zero();
    for i in 0..=n {
        let term = binomial(n, i)
            * double_factorial(2 * (n - i) as i64 - 1).expect("odd argument");
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    debug_assert!(n == 0 || !acc.is_negative());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use num_traits::ToPrimitive;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Oracle: count fixed-point-free permutations by enumeration.
    fn derangements_brute(n: usize) -> u64 {
        (0..n)
            .permutations(n)
            .filter(|p| p.iter().enumerate().all(|(i, &pi)| pi != i))
            .count() as u64
    }

    /// Oracle: all perfect matchings of `{0..2n-1}` (smallest-vertex-first).
    pub(crate) fn all_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
        fn go(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            if free.is_empty() {
                out.push(cur.clone());
                return;
            }
            let a = free[0];
            for idx in 1..free.len() {
                let b = free[idx];
                let mut rest: Vec<usize> = free.clone();
                rest.remove(idx);
                rest.remove(0);
                cur.push((a, b));
                go(&mut rest, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut (0..2 * n).collect(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(-1).unwrap(), big(1));
        assert_eq!(double_factorial(0).unwrap(), big(1));
        assert_eq!(double_factorial(1).unwrap(), big(1));
        assert_eq!(double_factorial(5).unwrap(), big(15));
        assert_eq!(double_factorial(7).unwrap(), big(105));
        assert!(double_factorial(-2).is_err());
        assert!(double_factorial(4).is_err());
    }

    #[test]
    fn derangement_examples_against_enumeration() {
        assert_eq!(derangement_count(1), big(0));
        assert_eq!(derangement_count(4), big(9));
        assert_eq!(derangement_count(6), big(265));
        for n in 0..=7 {
            assert_eq!(
                derangement_count(n as u64).to_u64().unwrap(),
                derangements_brute(n),
                "d_{n}"
            );
        }
    }

    #[test]
    fn derangement_recurrence() {
        // d_n = (n-1)(d_{n-1} + d_{n-2})
        for n in 2u64..=12 {
            let lhs = derangement_count(n);
            let rhs = (derangement_count(n - 1) + derangement_count(n - 2)) * (n - 1);
            assert_eq!(lhs, rhs, "recurrence at n={n}");
        }
    }

    #[test]
    fn matching_degree_examples_against_enumeration() {
        assert_eq!(matching_derangement_degree(2), big(2));
        assert_eq!(matching_derangement_degree(3), big(8));
        assert_eq!(matching_derangement_degree(4), big(60));
        for n in 1..=4usize {
            let ms = all_matchings(n);
            let fixed: std::collections::HashSet<(usize, usize)> =
                ms[0].iter().copied().collect();
            let disjoint = ms
                .iter()
                .filter(|m| m.iter().all(|e| !fixed.contains(e)))
                .count() as u64;
            assert_eq!(
                matching_derangement_degree(n as u64).to_u64().unwrap(),
                disjoint,
                "degree at n={n}"
            );
        }
    }

    #[test]
    fn double_factorial_closed_forms() {
        for n in 1u64..=12 {
            let lhs = matchings_count(n);
            let pow2: BigInt = BigInt::from(2).pow(n as u32 - 1);
            let base = factorial(2 * n - 2) / (pow2 * factorial(n - 1));
            assert_eq!(lhs, base.clone() * (2 * n - 1), "(2n-1)!! identity at n={n}");
            assert_eq!(
                double_factorial(2 * n as i64 - 3).unwrap(),
                base,
                "(2n-3)!! identity at n={n}"
            );
        }
    }

    #[test]
    fn divisibility_needed_for_integer_m() {
        use num_integer::Integer;
        for n in 3u64..=12 {
            let (_, r) = derangement_count(n).div_rem(&big(n as i64 - 1));
            assert!(r.is_zero(), "(n-1) | d_n at n={n}");
        }
        for n in 2u64..=8 {
            let (_, r) = matching_derangement_degree(n).div_rem(&big(2 * n as i64 - 2));
            assert!(r.is_zero(), "(2n-2) | degree at n={n}");
        }
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(8, 2), big(28));
        assert_eq!(binomial(6, 3), big(20));
        assert_eq!(binomial(5, 9), big(0));
    }
}
