//! Implicit and explicit views of the two graph families: adjacency, stars,
//! superstars, induced edge counts, and the exact parameter pack
//! `(V, d, N, M, K)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::budget::{INDUCED_SET_MAX, MATERIALIZE_MAX_V, PARAMS_MAX_N};
use crate::counting::{
    binomial, derangement_count, double_factorial, factorial, matching_derangement_degree,
    matchings_count,
};
use crate::error::{Error, Result};
use crate::matching::PerfectMatching;
use crate::perm::{relative_derangement, Permutation};

// ============================================================================
// Families and parameter packs
// ============================================================================

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FamilyKind {
    /// Derangement graph on permutations of an `n`-set.
    Permutation,
    /// Disjointness graph on perfect matchings of `K_{2n}`.
    Matching,
}

impl FamilyKind {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::Permutation => "perm",
            FamilyKind::Matching => "pm",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GraphFamily {
    pub kind: FamilyKind,
    pub n: usize,
}

/// Exact parameter pack: vertex count, valency, independence number, absolute
/// value of the least eigenvalue, and number of stars.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphParams {
    pub vertices: BigInt,
    pub valency: BigInt,
    pub independence: BigInt,
    pub tau_abs: BigInt,
    pub star_count: BigInt,
}

impl GraphFamily {
    pub fn permutation(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "permutation family requires n >= 2, got {n}"
            )));
        }
        Ok(Self {
            kind: FamilyKind::Permutation,
            n,
        })
    }

    pub fn matching(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "matching family requires n >= 2, got {n}"
            )));
        }
        Ok(Self {
            kind: FamilyKind::Matching,
            n,
        })
    }

    pub fn new(kind: FamilyKind, n: usize) -> Result<Self> {
        match kind {
            FamilyKind::Permutation => Self::permutation(n),
            FamilyKind::Matching => Self::matching(n),
        }
    }

    pub fn vertex_count_big(&self) -> BigInt {
        match self.kind {
            FamilyKind::Permutation => factorial(self.n as u64),
            FamilyKind::Matching => matchings_count(self.n as u64),
        }
    }

    pub fn vertex_count(&self) -> Result<usize> {
        self.vertex_count_big()
            .to_usize()
            .ok_or(Error::BudgetExceeded {
                name: "vertex_count_usize",
                limit: usize::MAX as u64,
                requested: u64::MAX,
            })
    }

    /// The exact `(V, d, N, M, K)` parameter pack. Pure parameter math; no
    /// enumeration occurs.
    pub fn params(&self) -> Result<GraphParams> {
        let n = self.n;
        if n > PARAMS_MAX_N {
            return Err(Error::BudgetExceeded {
                name: "PARAMS_MAX_N",
                limit: PARAMS_MAX_N as u64,
                requested: n as u64,
            });
        }
        let (vertices, valency, independence, divisor, star_count) = match self.kind {
            FamilyKind::Permutation => (
                factorial(n as u64),
                derangement_count(n as u64),
                factorial(n as u64 - 1),
                BigInt::from(n as u64 - 1),
                BigInt::from((n * n) as u64),
            ),
            FamilyKind::Matching => (
                matchings_count(n as u64),
                matching_derangement_degree(n as u64),
                double_factorial(2 * n as i64 - 3).expect("odd"),
                BigInt::from(2 * n as u64 - 2),
                binomial(2 * n as u64, 2),
            ),
        };
        let (tau_abs, rem) = valency.div_rem(&divisor);
        assert!(rem.is_zero(), "valency must be divisible by {divisor}");
        // Ratio-bound tightness: N * (M + d) = V * M.
        assert_eq!(
            &independence * (&tau_abs + &valency),
            &vertices * &tau_abs,
            "parameter pack violates ratio-bound tightness"
        );
        Ok(GraphParams {
            vertices,
            valency,
            independence,
            tau_abs,
            star_count,
        })
    }

    /// All star centers in canonical order.
    pub fn star_centers(&self) -> Vec<StarCenter> {
        let n = self.n;
        match self.kind {
            FamilyKind::Permutation => {
                let mut out = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        out.push(StarCenter::Arrow { i, j });
                    }
                }
                out
            }
            FamilyKind::Matching => {
                let mut out = Vec::with_capacity(n * (2 * n - 1));
                for a in 0..2 * n {
                    for b in a + 1..2 * n {
                        out.push(StarCenter::Edge { a, b });
                    }
                }
                out
            }
        }
    }
}

// ============================================================================
// Star centers
// ============================================================================

/// Center of a star: `i -> j` for permutations, an edge `{a, b}` of the
/// underlying complete graph for matchings. Vertex labels are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StarCenter {
    Arrow { i: usize, j: usize },
    Edge { a: usize, b: usize },
}

impl StarCenter {
    pub fn edge(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidCenter(format!("degenerate edge ({a},{b})")));
        }
        Ok(StarCenter::Edge {
            a: a.min(b),
            b: a.max(b),
        })
    }
}

impl std::fmt::Display for StarCenter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // 1-based labels in output.
        match self {
            StarCenter::Arrow { i, j } => write!(f, "{}->{}", i + 1, j + 1),
            StarCenter::Edge { a, b } => write!(f, "{{{},{}}}", a + 1, b + 1),
        }
    }
}

// ============================================================================
// Vertex sets
// ============================================================================

/// Dense bit-indexed subset of the vertex ranks of one graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    universe: usize,
    blocks: Vec<u64>,
    card: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        Self {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
            card: 0,
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut s = Self::new(universe);
        for v in members {
            s.insert(v);
        }
        s
    }

    pub fn full(universe: usize) -> Self {
        Self::from_members(universe, 0..universe)
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.universe, "vertex {v} outside universe");
        let (w, b) = (v / 64, v % 64);
        if self.blocks[w] & (1 << b) == 0 {
            self.blocks[w] |= 1 << b;
            self.card += 1;
        }
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.universe);
        let (w, b) = (v / 64, v % 64);
        if self.blocks[w] & (1 << b) != 0 {
            self.blocks[w] &= !(1 << b);
            self.card -= 1;
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.blocks[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn card(&self) -> usize {
        self.card
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn members(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.card);
        for (w, &block) in self.blocks.iter().enumerate() {
            let mut bits = block;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.universe, other.universe);
        let blocks: Vec<u64> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a | b)
            .collect();
        let card = blocks.iter().map(|b| b.count_ones() as usize).sum();
        VertexSet {
            universe: self.universe,
            blocks,
            card,
        }
    }

    pub fn intersection_card(&self, other: &VertexSet) -> usize {
        assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn symmetric_difference_card(&self, other: &VertexSet) -> usize {
        assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }
}

// ============================================================================
// Materialized graph views
// ============================================================================

enum Vertices {
    Perms(Vec<Permutation>),
    Matchings(Vec<PerfectMatching>),
}

/// A graph with its vertex list materialized in rank order. Adjacency stays
/// implicit (computed from the vertex objects); only the vertex list is held
/// in memory, so the budget is on the vertex count.
pub struct GraphView {
    family: GraphFamily,
    verts: Vertices,
}

impl GraphView {
    pub fn new(family: GraphFamily) -> Result<Self> {
        let v_big = family.vertex_count_big();
        let v = v_big.to_usize().filter(|&v| v <= MATERIALIZE_MAX_V).ok_or(
            Error::BudgetExceeded {
                name: "MATERIALIZE_MAX_V",
                limit: MATERIALIZE_MAX_V as u64,
                requested: v_big.to_u64().unwrap_or(u64::MAX),
            },
        )?;
        let verts = match family.kind {
            FamilyKind::Permutation => Vertices::Perms(
                (0..v as u64)
                    .map(|r| Permutation::unrank(family.n, r))
                    .collect::<Result<_>>()?,
            ),
            FamilyKind::Matching => Vertices::Matchings(
                (0..v as u64)
                    .map(|r| PerfectMatching::unrank(family.n, r))
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Self { family, verts })
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn vertex_count(&self) -> usize {
        match &self.verts {
            Vertices::Perms(v) => v.len(),
            Vertices::Matchings(v) => v.len(),
        }
    }

    pub fn permutation(&self, rank: usize) -> &Permutation {
        match &self.verts {
            Vertices::Perms(v) => &v[rank],
            _ => panic!("not a permutation family"),
        }
    }

    pub fn matching(&self, rank: usize) -> &PerfectMatching {
        match &self.verts {
            Vertices::Matchings(v) => &v[rank],
            _ => panic!("not a matching family"),
        }
    }

    fn check_rank(&self, r: usize) -> Result<()> {
        if r >= self.vertex_count() {
            return Err(Error::RankOutOfRange {
                what: "vertex",
                rank: r as u64,
                count: self.vertex_count() as u64,
            });
        }
        Ok(())
    }

    /// Adjacency predicate; irreflexive and symmetric.
    pub fn adjacent(&self, u: usize, v: usize) -> Result<bool> {
        self.check_rank(u)?;
        self.check_rank(v)?;
        if u == v {
            return Ok(false);
        }
        Ok(self.adjacent_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn adjacent_unchecked(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match &self.verts {
            Vertices::Perms(p) => relative_derangement(&p[u], &p[v]).expect("same n"),
            Vertices::Matchings(m) => m[u].common_edge_count(&m[v]).expect("same n") == 0,
        }
    }

    fn center_valid(&self, center: &StarCenter) -> Result<()> {
        let n = self.family.n;
        match (self.family.kind, center) {
            (FamilyKind::Permutation, StarCenter::Arrow { i, j }) if *i < n && *j < n => Ok(()),
            (FamilyKind::Matching, StarCenter::Edge { a, b })
                if *a < *b && *b < 2 * n => Ok(()),
            _ => Err(Error::InvalidCenter(format!(
                "{center:?} invalid for {:?} n={n}",
                self.family.kind
            ))),
        }
    }

    /// The star with the given center: all vertices through the fixed
    /// assignment or edge. Always an independent set of size `N`.
    pub fn star_set(&self, center: &StarCenter) -> Result<VertexSet> {
        self.center_valid(center)?;
        let v = self.vertex_count();
        let mut s = VertexSet::new(v);
        match (center, &self.verts) {
            (StarCenter::Arrow { i, j }, Vertices::Perms(ps)) => {
                for (r, p) in ps.iter().enumerate() {
                    if p.image(*i) == *j {
                        s.insert(r);
                    }
                }
            }
            (StarCenter::Edge { a, b }, Vertices::Matchings(ms)) => {
                for (r, m) in ms.iter().enumerate() {
                    if m.contains_edge(*a, *b) {
                        s.insert(r);
                    }
                }
            }
            _ => unreachable!("validated above"),
        }
        Ok(s)
    }

    /// All stars, indexed in canonical center order.
    pub fn all_stars(&self) -> Result<Vec<(StarCenter, VertexSet)>> {
        self.family
            .star_centers()
            .into_iter()
            .map(|c| self.star_set(&c).map(|s| (c, s)))
            .collect()
    }

    /// Star plus one outside vertex; the only edges it spans are the `M`
    /// edges from `v` into the star.
    pub fn superstar_set(&self, center: &StarCenter, v: usize) -> Result<VertexSet> {
        self.check_rank(v)?;
        let mut s = self.star_set(center)?;
        if s.contains(v) {
            return Err(Error::VertexInStar(v));
        }
        s.insert(v);
        Ok(s)
    }

    /// Exact number of edges inside `S`, by the implicit adjacency predicate.
    /// Refuses (rather than approximates) above the quadratic-cost budget.
    pub fn induced_edge_count(&self, s: &VertexSet) -> Result<u64> {
        if s.card() > INDUCED_SET_MAX {
            return Err(Error::BudgetExceeded {
                name: "INDUCED_SET_MAX",
                limit: INDUCED_SET_MAX as u64,
                requested: s.card() as u64,
            });
        }
        let members = s.members();
        let mut count = 0u64;
        for (idx, &u) in members.iter().enumerate() {
            for &v in &members[idx + 1..] {
                if self.adjacent_unchecked(u, v) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Largest intersection of `A` with any star, with the canonical-smallest
    /// witness center.
    pub fn max_star_overlap(&self, a: &VertexSet) -> Result<(usize, StarCenter)> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = self.family.n;
        match &self.verts {
            Vertices::Perms(ps) => {
                // overlap[i][j] = |{sigma in A : sigma(i) = j}|
                let mut overlap = vec![vec![0usize; n]; n];
                for r in a.members() {
                    let p = &ps[r];
                    for i in 0..n {
                        overlap[i][p.image(i)] += 1;
                    }
                }
                let mut best = (0usize, StarCenter::Arrow { i: 0, j: 0 });
                for i in 0..n {
                    for j in 0..n {
                        if overlap[i][j] > best.0 {
                            best = (overlap[i][j], StarCenter::Arrow { i, j });
                        }
                    }
                }
                Ok(best)
            }
            Vertices::Matchings(ms) => {
                let mut overlap = vec![vec![0usize; 2 * n]; 2 * n];
                for r in a.members() {
                    for &(x, y) in ms[r].pairs() {
                        overlap[x][y] += 1;
                    }
                }
                let mut best = (0usize, StarCenter::Edge { a: 0, b: 1 });
                for x in 0..2 * n {
                    for y in x + 1..2 * n {
                        if overlap[x][y] > best.0 {
                            best = (overlap[x][y], StarCenter::Edge { a: x, b: y });
                        }
                    }
                }
                Ok(best)
            }
        }
    }

    /// True when `A` exceeds the independence number yet contains no full
    /// star: every star keeps a vertex outside `A`.
    pub fn is_faux_star(&self, a: &VertexSet) -> Result<bool> {
        let params = self.family.params()?;
        let n_alpha = params.independence.to_usize().expect("within view budget");
        if a.card() <= n_alpha {
            return Ok(false);
        }
        let (overlap, _) = self.max_star_overlap(a)?;
        Ok(overlap < n_alpha)
    }
}
