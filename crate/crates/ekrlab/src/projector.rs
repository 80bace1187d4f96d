//! Exact orthogonal projection onto the star space.
//!
//! The star space `U` is the span of all `K` star indicator vectors. The
//! star basis is linearly dependent (`dim U < K`), so the normal equations
//! `G c = t` (Gram matrix `G`, `t_i = <f, 1_star_i>`) are solved by
//! rank-revealing exact elimination over rationals; free coordinates are set
//! to zero. Any least-squares solution gives the same projection `f1`, which
//! is the quantity of interest. Inner products use the normalized form
//! `<u, v> = (1/V) sum u(x) v(x)`; the Gram system is solved in the V-scaled
//! integer form, which has the same solution set.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::budget::{PROJECTION_MAX_K, PROJECTION_MAX_V};
use crate::error::{Error, Result};
use crate::graph::{GraphView, StarCenter, VertexSet};

/// Dense exact-rational vector indexed by vertex rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetFunction {
    values: Vec<BigRational>,
}

impl SetFunction {
    pub fn zero(v: usize) -> Self {
        Self {
            values: vec![BigRational::zero(); v],
        }
    }

    pub fn from_values(values: Vec<BigRational>) -> Self {
        Self { values }
    }

    pub fn indicator(set: &VertexSet) -> Self {
        let mut values = vec![BigRational::zero(); set.universe()];
        for v in set.members() {
            values[v] = BigRational::one();
        }
        Self { values }
    }

    pub fn constant(v: usize, c: BigRational) -> Self {
        Self {
            values: vec![c; v],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: usize) -> &BigRational {
        &self.values[v]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Normalized inner product `(1/V) * sum self(x) other(x)`.
    pub fn inner(&self, other: &SetFunction) -> BigRational {
        assert_eq!(self.len(), other.len());
        let sum: BigRational = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        sum / BigRational::from_integer(BigInt::from(self.len() as u64))
    }

    /// Normalized squared norm `(1/V) * sum self(x)^2`.
    pub fn norm_sq(&self) -> BigRational {
        self.inner(self)
    }

    /// Mean value `(1/V) * sum self(x)`.
    pub fn mean(&self) -> BigRational {
        let sum: BigRational = self.values.iter().sum();
        sum / BigRational::from_integer(BigInt::from(self.len() as u64))
    }

    /// Mean of the k-th power.
    pub fn mean_pow(&self, k: u32) -> BigRational {
        let sum: BigRational = self
            .values
            .iter()
            .map(|v| {
                let mut acc = BigRational::one();
                for _ in 0..k {
                    acc *= v;
                }
                acc
            })
            .sum();
        sum / BigRational::from_integer(BigInt::from(self.len() as u64))
    }

    pub fn sub(&self, other: &SetFunction) -> SetFunction {
        assert_eq!(self.len(), other.len());
        SetFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &SetFunction) -> SetFunction {
        assert_eq!(self.len(), other.len());
        SetFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> SetFunction {
        SetFunction {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

/// Result of one exact projection.
pub struct Projection {
    /// The projection of `f` onto the star space.
    pub f1: SetFunction,
    /// Star coordinates of `f1` (one least-squares solution; not unique).
    pub coefficients: Vec<BigRational>,
    /// `||f - f1||^2` in the normalized norm.
    pub residual_sq: BigRational,
}

/// Precomputed exact solver for projections onto the star space of one graph.
pub struct StarSpaceProjector {
    v: usize,
    stars: Vec<VertexSet>,
    centers: Vec<StarCenter>,
    /// Row-reduction transform `T` with `T * G` in reduced row echelon form.
    transform: Vec<Vec<BigRational>>,
    /// Pivot column of each row of the RREF, `None` for zero rows.
    pivots: Vec<Option<usize>>,
}

impl StarSpaceProjector {
    pub fn new(view: &GraphView) -> Result<Self> {
        let v = view.vertex_count();
        if v > PROJECTION_MAX_V {
            return Err(Error::BudgetExceeded {
                name: "PROJECTION_MAX_V",
                limit: PROJECTION_MAX_V as u64,
                requested: v as u64,
            });
        }
        let stars_with_centers = view.all_stars()?;
        let k = stars_with_centers.len();
        if k > PROJECTION_MAX_K {
            return Err(Error::BudgetExceeded {
                name: "PROJECTION_MAX_K",
                limit: PROJECTION_MAX_K as u64,
                requested: k as u64,
            });
        }
        let (centers, stars): (Vec<_>, Vec<_>) = stars_with_centers.into_iter().unzip();

        // V-scaled Gram matrix: G[i][j] = |S_i ∩ S_j|.
        let mut gram: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        BigRational::from_integer(BigInt::from(
                            stars[i].intersection_card(&stars[j]) as u64,
                        ))
                    })
                    .collect()
            })
            .collect();

        // Row-reduce [G | I], recording the transform.
        let mut transform: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();

        let mut pivots: Vec<Option<usize>> = vec![None; k];
        let mut row = 0usize;
        for col in 0..k {
            // Find a pivot: first row at or below `row` with a nonzero entry.
            let Some(pivot_row) = (row..k).find(|&r| !gram[r][col].is_zero()) else {
                continue;
            };
            gram.swap(row, pivot_row);
            transform.swap(row, pivot_row);
            let inv = gram[row][col].recip();
            for c in 0..k {
                gram[row][c] = &gram[row][c] * &inv;
                transform[row][c] = &transform[row][c] * &inv;
            }
            for r in 0..k {
                if r != row && !gram[r][col].is_zero() {
                    let factor = gram[r][col].clone();
                    for c in 0..k {
                        let g = &gram[row][c] * &factor;
                        gram[r][c] = &gram[r][c] - g;
                        let t = &transform[row][c] * &factor;
                        transform[r][c] = &transform[r][c] - t;
                    }
                }
            }
            pivots[row] = Some(col);
            row += 1;
            if row == k {
                break;
            }
        }

        Ok(Self {
            v,
            stars,
            centers,
            transform,
            pivots,
        })
    }

    pub fn star_count(&self) -> usize {
        self.stars.len()
    }

    pub fn stars(&self) -> &[VertexSet] {
        &self.stars
    }

    pub fn centers(&self) -> &[StarCenter] {
        &self.centers
    }

    /// V-scaled inner products of `f` with each star indicator.
    fn star_sums(&self, f: &SetFunction) -> Vec<BigRational> {
        self.stars
            .iter()
            .map(|s| s.members().iter().map(|&x| f.value(x)).sum())
            .collect()
    }

    /// Exact projection of `f` onto the star space.
    pub fn project(&self, f: &SetFunction) -> Result<Projection> {
        if f.len() != self.v {
            return Err(Error::SizeMismatch {
                left: f.len(),
                right: self.v,
            });
        }
        let k = self.stars.len();
        let t = self.star_sums(f);
        // y = T * t; consistent normal equations leave zero rows with y = 0.
        let mut coefficients = vec![BigRational::zero(); k];
        for row in 0..k {
            let y: BigRational = (0..k).map(|c| &self.transform[row][c] * &t[c]).sum();
            match self.pivots[row] {
                Some(col) => coefficients[col] = y,
                None => assert!(
                    y.is_zero(),
                    "normal equations inconsistent: zero row with nonzero rhs"
                ),
            }
        }
        let mut f1 = SetFunction::zero(self.v);
        for (c, star) in coefficients.iter().zip(&self.stars) {
            if c.is_zero() {
                continue;
            }
            for x in star.members() {
                f1.values[x] += c;
            }
        }
        let residual_sq = f.sub(&f1).norm_sq();
        debug_assert!(!residual_sq.is_negative());
        Ok(Projection {
            f1,
            coefficients,
            residual_sq,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{FamilyKind, GraphFamily};
    use crate::rng::SplitMix64;
    use num_traits::ToPrimitive;

    fn m3() -> (GraphView, StarSpaceProjector) {
        let view = GraphView::new(GraphFamily::matching(3).unwrap()).unwrap();
        let proj = StarSpaceProjector::new(&view).unwrap();
        (view, proj)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn star_indicator_has_zero_residual() {
        let (view, proj) = m3();
        let star = view.star_set(&proj.centers()[0].clone()).unwrap();
        let p = proj.project(&SetFunction::indicator(&star)).unwrap();
        assert!(p.residual_sq.is_zero());
        assert_eq!(p.f1, SetFunction::indicator(&star));
    }

    #[test]
    fn all_ones_has_zero_residual() {
        let (view, proj) = m3();
        let ones = SetFunction::indicator(&VertexSet::full(view.vertex_count()));
        let p = proj.project(&ones).unwrap();
        assert!(p.residual_sq.is_zero());
    }

    #[test]
    fn single_vertex_residual_in_m3() {
        let (view, proj) = m3();
        let single = SetFunction::indicator(&VertexSet::from_members(view.vertex_count(), [0]));
        let p = proj.project(&single).unwrap();
        // dim U = 10 of 15; residual^2 = (1/V)(1 - dim U / V).
        assert_eq!(p.residual_sq, rat(1, 45));
    }

    #[test]
    fn projector_is_idempotent_and_orthogonal() {
        let (view, proj) = m3();
        let v = view.vertex_count();
        let mut rng = SplitMix64::new(0x5eed_0006);
        for _ in 0..100 {
            let f = SetFunction::from_values(
                (0..v)
                    .map(|_| rat(rng.below(21) as i64 - 10, 1 + rng.below(7) as i64))
                    .collect(),
            );
            let p = proj.project(&f).unwrap();
            let pp = proj.project(&p.f1).unwrap();
            assert_eq!(pp.f1, p.f1, "projection not idempotent");
            assert!(pp.residual_sq.is_zero());
            // The residual is orthogonal to every star indicator.
            let resid = f.sub(&p.f1);
            for star in proj.stars() {
                let ip = resid.inner(&SetFunction::indicator(star));
                assert!(ip.is_zero(), "residual not orthogonal to a star");
            }
            // Pythagoras in exact arithmetic.
            assert_eq!(
                f.norm_sq(),
                p.f1.norm_sq() + p.residual_sq.clone(),
                "norm decomposition failed"
            );
        }
    }

    #[test]
    fn projection_agrees_with_constant_diagonal_argument() {
        // On a vertex-transitive family the projector has constant diagonal
        // dim(U)/V, so single-vertex indicators all have equal residual.
        let (view, proj) = m3();
        let v = view.vertex_count();
        let first = proj
            .project(&SetFunction::indicator(&VertexSet::from_members(v, [0])))
            .unwrap()
            .residual_sq;
        for x in 1..v {
            let r = proj
                .project(&SetFunction::indicator(&VertexSet::from_members(v, [x])))
                .unwrap()
                .residual_sq;
            assert_eq!(r, first);
        }
        let dim_u = 10u64; // 1 + 9 for this family
        let v64 = v as u64;
        assert_eq!(
            first,
            rat((v64 - dim_u) as i64, (v64 * v64) as i64)
        );
        // Cross-check dim U: rank of the Gram system.
        let rank = proj.pivots.iter().filter(|p| p.is_some()).count();
        assert_eq!(rank as u64, dim_u);
        assert_eq!(
            proj.star_count(),
            view.family().params().unwrap().star_count.to_usize().unwrap()
        );
    }
}
