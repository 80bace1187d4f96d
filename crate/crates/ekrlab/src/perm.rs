//! Permutations with a fixed lexicographic ranking order.
//!
//! A permutation of `{0..n-1}` is stored as its image sequence; rank 0 is the
//! identity and ranks follow lexicographic order on image sequences. Every
//! module in the crate indexes permutation-graph vertices by this rank.

use crate::budget::RANK_PERM_MAX_N;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

impl Permutation {
    /// Builds a permutation from its image sequence, checking bijectivity.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidParameter(format!(
                    "image sequence {images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&v| self.images[v]).collect(),
        })
    }

    pub fn is_derangement(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v != i)
    }

    /// Lexicographic rank of the image sequence among all permutations of the
    /// same size.
    pub fn rank(&self) -> Result<u64> {
        let n = self.n();
        if n > RANK_PERM_MAX_N {
            return Err(Error::BudgetExceeded {
                name: "RANK_PERM_MAX_N",
                limit: RANK_PERM_MAX_N as u64,
                requested: n as u64,
            });
        }
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count() as u64;
            rank += smaller * factorial_u64(n - 1 - i);
        }
        Ok(rank)
    }

    /// Inverse of [`rank`](Self::rank): the permutation of `{0..n-1}` with the
    /// given lexicographic rank.
    pub fn unrank(n: usize, r: u64) -> Result<Permutation> {
        if n > RANK_PERM_MAX_N {
            return Err(Error::BudgetExceeded {
                name: "RANK_PERM_MAX_N",
                limit: RANK_PERM_MAX_N as u64,
                requested: n as u64,
            });
        }
        let total = factorial_u64(n);
        if r >= total {
            return Err(Error::RankOutOfRange {
                what: "permutation",
                rank: r,
                count: total,
            });
        }
        let mut avail: Vec<usize> = (0..n).collect();
        let mut images = Vec::with_capacity(n);
        let mut r = r;
        for i in 0..n {
            let block = factorial_u64(n - 1 - i);
            let idx = (r / block) as usize;
            r %= block;
            images.push(avail.remove(idx));
        }
        Ok(Permutation { images })
    }
}

/// True when the two permutations disagree at every point, i.e. when their
/// quotient is fixed-point-free. This is the adjacency relation of the
/// derangement graph.
pub fn relative_derangement(a: &Permutation, b: &Permutation) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(a.images
        .iter()
        .zip(&b.images)
        .all(|(&x, &y)| x != y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use itertools::Itertools;

    #[test]
    fn unrank_examples() {
        assert_eq!(
            Permutation::unrank(3, 0).unwrap(),
            Permutation::identity(3)
        );
        // Oracle: all 6 permutations of {0,1,2} in lexicographic order.
        let all: Vec<Vec<usize>> = (0..3).permutations(3).sorted().collect();
        assert_eq!(
            Permutation::unrank(3, 5).unwrap().images(),
            all[5].as_slice()
        );
        assert_eq!(all[5], vec![2, 1, 0]);
        assert_eq!(
            Permutation::unrank(4, 17).unwrap().rank().unwrap(),
            17
        );
        assert!(Permutation::unrank(3, 6).is_err());
    }

    #[test]
    fn rank_unrank_exhaustive_small() {
        for n in 0..=6usize {
            let total = (1..=n as u64).product::<u64>().max(1);
            for r in 0..total {
                let p = Permutation::unrank(n, r).unwrap();
                assert_eq!(p.rank().unwrap(), r, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn relative_derangement_examples() {
        let id3 = Permutation::identity(3);
        let cyc = Permutation::new(vec![1, 2, 0]).unwrap();
        assert!(!relative_derangement(&id3, &id3).unwrap());
        assert!(relative_derangement(&id3, &cyc).unwrap());
        let id4 = Permutation::identity(4);
        let swap = Permutation::new(vec![1, 0, 2, 3]).unwrap();
        assert!(!relative_derangement(&id4, &swap).unwrap());
        assert!(relative_derangement(&id3, &id4).is_err());
    }

    #[test]
    fn relative_derangement_symmetric_on_random_pairs() {
        let mut rng = SplitMix64::new(0x5eed_0001);
        for _ in 0..1000 {
            let n = 2 + (rng.next_u64() % 6) as usize;
            let total = (1..=n as u64).product::<u64>();
            let a = Permutation::unrank(n, rng.next_u64() % total).unwrap();
            let b = Permutation::unrank(n, rng.next_u64() % total).unwrap();
            assert_eq!(
                relative_derangement(&a, &b).unwrap(),
                relative_derangement(&b, &a).unwrap()
            );
        }
    }

    #[test]
    fn compose_inverse_roundtrip() {
        let mut rng = SplitMix64::new(0x5eed_0002);
        for _ in 0..100 {
            let p = Permutation::unrank(5, rng.next_u64() % 120).unwrap();
            assert_eq!(p.compose(&p.inverse()).unwrap(), Permutation::identity(5));
        }
    }

    #[test]
    fn quotient_matches_pointwise_disagreement() {
        // relative_derangement(a, b) must agree with a*b^{-1} having no fixed point.
        let mut rng = SplitMix64::new(0x5eed_0003);
        for _ in 0..200 {
            let a = Permutation::unrank(5, rng.next_u64() % 120).unwrap();
            let b = Permutation::unrank(5, rng.next_u64() % 120).unwrap();
            let quotient = a.compose(&b.inverse()).unwrap();
            assert_eq!(
                relative_derangement(&a, &b).unwrap(),
                quotient.is_derangement()
            );
        }
    }
}
