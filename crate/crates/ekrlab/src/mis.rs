//! Exact maximum-independent-set computation and enumeration on explicit
//! small graphs.
//!
//! Independent sets are found as cliques of the complement. The optimizer is
//! a branch-and-bound with greedy-coloring upper bounds; branching prefers
//! high complement degree with ties by vertex rank, so runs are deterministic.
//! Enumeration is depth-first in ascending vertex order, which makes output
//! order canonical and diffable.

use crate::budget::{ENUM_CAP, ENUM_MAX_V, MIS_MAX_V};
use crate::error::{Error, Result};
use crate::graph::{GraphView, VertexSet};

// ============================================================================
// Dense bit-matrix graphs
// ============================================================================

/// Explicit graph as a symmetric adjacency bit matrix with zero diagonal.
#[derive(Clone, Debug)]
pub struct DenseGraph {
    v: usize,
    words: usize,
    adj: Vec<u64>,
}

impl DenseGraph {
    pub fn new(v: usize) -> Self {
        let words = v.div_ceil(64).max(1);
        Self {
            v,
            words,
            adj: vec![0; v * words],
        }
    }

    pub fn from_view(view: &GraphView) -> Result<Self> {
        let v = view.vertex_count();
        if v > MIS_MAX_V {
            return Err(Error::BudgetExceeded {
                name: "MIS_MAX_V",
                limit: MIS_MAX_V as u64,
                requested: v as u64,
            });
        }
        let mut g = Self::new(v);
        for u in 0..v {
            for w in u + 1..v {
                if view.adjacent_unchecked(u, w) {
                    g.add_edge(u, w);
                }
            }
        }
        Ok(g)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn add_edge(&mut self, u: usize, w: usize) {
        assert!(u != w && u < self.v && w < self.v);
        self.adj[u * self.words + w / 64] |= 1 << (w % 64);
        self.adj[w * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, w: usize) {
        assert!(u != w && u < self.v && w < self.v);
        self.adj[u * self.words + w / 64] &= !(1 << (w % 64));
        self.adj[w * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj[u * self.words + w / 64] & (1 << (w % 64)) != 0
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.v).map(|u| self.degree(u) as u64).sum::<u64>() / 2
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    /// Complement with zero diagonal.
    pub fn complement(&self) -> DenseGraph {
        let mut g = DenseGraph::new(self.v);
        for u in 0..self.v {
            let row = self.row(u);
            let out = &mut g.adj[u * self.words..(u + 1) * self.words];
            for w in 0..self.words {
                out[w] = !row[w];
            }
            // Mask off the diagonal and the tail beyond v.
            out[u / 64] &= !(1 << (u % 64));
            let tail = self.v % 64;
            if tail != 0 {
                out[self.words - 1] &= (1u64 << tail) - 1;
            }
        }
        g
    }

    /// True when no two members of `set` are adjacent.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        let members = set.members();
        for (i, &u) in members.iter().enumerate() {
            for &w in &members[i + 1..] {
                if self.has_edge(u, w) {
                    return false;
                }
            }
        }
        true
    }
}

// ============================================================================
// Bitset scratch
// ============================================================================

#[derive(Clone)]
struct Bits {
    w: Vec<u64>,
}

impl Bits {
    fn empty(words: usize) -> Self {
        Self {
            w: vec![0; words],
        }
    }

    fn full(n: usize, words: usize) -> Self {
        let mut w = vec![u64::MAX; words];
        let tail = n % 64;
        if tail != 0 {
            w[words - 1] = (1u64 << tail) - 1;
        }
        if n == 0 {
            w.fill(0);
        }
        Self { w }
    }

    #[inline]
    fn insert(&mut self, v: usize) {
        self.w[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    fn remove(&mut self, v: usize) {
        self.w[v / 64] &= !(1 << (v % 64));
    }

    fn count(&self) -> usize {
        self.w.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.w.iter().all(|&b| b == 0)
    }

    fn first(&self) -> Option<usize> {
        for (i, &b) in self.w.iter().enumerate() {
            if b != 0 {
                return Some(i * 64 + b.trailing_zeros() as usize);
            }
        }
        None
    }

    fn and(&self, row: &[u64]) -> Bits {
        Bits {
            w: self.w.iter().zip(row).map(|(a, b)| a & b).collect(),
        }
    }

    fn andnot_assign(&mut self, row: &[u64]) {
        for (a, b) in self.w.iter_mut().zip(row) {
            *a &= !b;
        }
    }

    fn intersection_count(&self, row: &[u64]) -> usize {
        self.w
            .iter()
            .zip(row)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn members(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &b) in self.w.iter().enumerate() {
            let mut bits = b;
            while bits != 0 {
                out.push(i * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

// ============================================================================
// Maximum independent set
// ============================================================================

#[derive(Clone, Debug)]
pub struct MisResult {
    pub size: usize,
    pub witness: VertexSet,
}

struct CliqueSearch<'a> {
    comp: &'a DenseGraph,
    /// relabeled index -> original vertex
    label_to_orig: Vec<usize>,
    /// adjacency rows in relabeled coordinates
    rows: Vec<u64>,
    words: usize,
    best_size: usize,
    best: Option<Vec<usize>>,
}

impl<'a> CliqueSearch<'a> {
    fn new(comp: &'a DenseGraph) -> Self {
        let v = comp.v();
        let words = v.div_ceil(64).max(1);
        // Highest complement degree first, ties by vertex rank.
        let mut order: Vec<usize> = (0..v).collect();
        order.sort_by_key(|&u| (usize::MAX - comp.degree(u), u));
        let mut orig_to_label = vec![0usize; v];
        for (label, &orig) in order.iter().enumerate() {
            orig_to_label[orig] = label;
        }
        let mut rows = vec![0u64; v * words];
        for (label, &orig) in order.iter().enumerate() {
            for w in comp.row(orig).iter().enumerate().flat_map(|(wi, &bits)| {
                let mut bs = bits;
                let mut out = Vec::new();
                while bs != 0 {
                    out.push(wi * 64 + bs.trailing_zeros() as usize);
                    bs &= bs - 1;
                }
                out
            }) {
                let wl = orig_to_label[w];
                rows[label * words + wl / 64] |= 1 << (wl % 64);
            }
        }
        Self {
            comp,
            label_to_orig: order,
            rows,
            words,
            best_size: 0,
            best: None,
        }
    }

    #[inline]
    fn row(&self, label: usize) -> &[u64] {
        &self.rows[label * self.words..(label + 1) * self.words]
    }

    /// Greedy coloring of `p`; returns candidates with their color numbers,
    /// colors non-decreasing.
    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let n = p.count();
        let mut verts = Vec::with_capacity(n);
        let mut colors = Vec::with_capacity(n);
        let mut uncolored = p.clone();
        let mut color = 0usize;
        while !uncolored.is_empty() {
            color += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                uncolored.remove(v);
                class.andnot_assign(self.row(v));
                verts.push(v);
                colors.push(color);
            }
        }
        (verts, colors)
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &Bits) {
        let (verts, colors) = self.color_sort(p);
        let mut p = p.clone();
        for idx in (0..verts.len()).rev() {
            if r.len() + colors[idx] <= self.best_size {
                return;
            }
            let v = verts[idx];
            r.push(v);
            let p2 = p.and(self.row(v));
            if p2.is_empty() {
                if r.len() > self.best_size {
                    self.best_size = r.len();
                    self.best = Some(r.clone());
                }
            } else {
                self.expand(r, &p2);
            }
            r.pop();
            p.remove(v);
        }
    }

    fn run(mut self, lower_hint: usize) -> (usize, Option<Vec<usize>>) {
        self.best_size = lower_hint.saturating_sub(1);
        let p = Bits::full(self.comp.v(), self.words);
        let mut r = Vec::new();
        self.expand(&mut r, &p);
        let witness = self.best.map(|labels| {
            labels
                .into_iter()
                .map(|l| self.label_to_orig[l])
                .collect::<Vec<usize>>()
        });
        (self.best_size, witness)
    }
}

/// Exact independence number with a witness. `lower_hint` must be a valid
/// lower bound on the independence number (0 is always safe); a correct hint
/// primes pruning.
pub fn max_independent_set(g: &DenseGraph, lower_hint: usize) -> Result<MisResult> {
    if g.v() > MIS_MAX_V {
        return Err(Error::BudgetExceeded {
            name: "MIS_MAX_V",
            limit: MIS_MAX_V as u64,
            requested: g.v() as u64,
        });
    }
    if g.v() == 0 {
        return Ok(MisResult {
            size: 0,
            witness: VertexSet::new(0),
        });
    }
    let comp = g.complement();
    let (size, witness) = CliqueSearch::new(&comp).run(lower_hint);
    let Some(witness) = witness else {
        return Err(Error::InvalidParameter(format!(
            "lower_hint {lower_hint} exceeds the independence number"
        )));
    };
    let set = VertexSet::from_members(g.v(), witness);
    debug_assert_eq!(set.card(), size);
    debug_assert!(g.is_independent(&set), "witness spans an edge");
    Ok(MisResult { size, witness: set })
}

// ============================================================================
// Enumeration
// ============================================================================

struct EnumState<'a> {
    rows: &'a [u64],
    words: usize,
    target: usize,
    out: Vec<Vec<usize>>,
}

impl<'a> EnumState<'a> {
    #[inline]
    fn row(&self, v: usize) -> &'a [u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Greedy coloring upper bound on the clique number of `p`.
    fn color_bound(&self, p: &Bits) -> usize {
        let mut uncolored = p.clone();
        let mut color = 0usize;
        while !uncolored.is_empty() {
            color += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                uncolored.remove(v);
                class.andnot_assign(self.row(v));
            }
        }
        color
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &Bits) -> Result<()> {
        if r.len() == self.target {
            if self.out.len() >= ENUM_CAP {
                return Err(Error::BudgetExceeded {
                    name: "ENUM_CAP",
                    limit: ENUM_CAP as u64,
                    requested: self.out.len() as u64 + 1,
                });
            }
            self.out.push(r.clone());
            return Ok(());
        }
        if r.len() + self.color_bound(p) < self.target {
            return Ok(());
        }
        let mut p = p.clone();
        // Ascending order keeps the output canonical: each set is produced
        // exactly once, as its sorted member list.
        while let Some(v) = p.first() {
            p.remove(v);
            if r.len() + 1 + p.intersection_count(self.row(v)) < self.target {
                continue;
            }
            r.push(v);
            let p2 = p.and(self.row(v));
            self.expand(r, &p2)?;
            r.pop();
        }
        Ok(())
    }
}

/// All maximum independent sets, in canonical (lexicographic) order.
pub fn enumerate_maximum_independent_sets(g: &DenseGraph) -> Result<Vec<VertexSet>> {
    if g.v() > ENUM_MAX_V {
        return Err(Error::BudgetExceeded {
            name: "ENUM_MAX_V",
            limit: ENUM_MAX_V as u64,
            requested: g.v() as u64,
        });
    }
    if g.v() == 0 {
        return Ok(vec![VertexSet::new(0)]);
    }
    let alpha = max_independent_set(g, 1)?.size;
    let comp = g.complement();
    let words = comp.words;
    let mut state = EnumState {
        rows: &comp.adj,
        words,
        target: alpha,
        out: Vec::new(),
    };
    let p = Bits::full(g.v(), words);
    state.expand(&mut Vec::new(), &p)?;
    Ok(state
        .out
        .into_iter()
        .map(|m| VertexSet::from_members(g.v(), m))
        .collect())
}

/// Visits every maximal independent set of size at least `t`, in a fixed
/// deterministic order. The callback returns `false` to stop early; the
/// return value says whether the enumeration ran to completion.
pub fn for_each_maximal_independent_ge(
    g: &DenseGraph,
    t: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool> {
    if g.v() > ENUM_MAX_V {
        return Err(Error::BudgetExceeded {
            name: "ENUM_MAX_V",
            limit: ENUM_MAX_V as u64,
            requested: g.v() as u64,
        });
    }
    let comp = g.complement();
    let words = comp.words;
    struct Bk<'a> {
        rows: &'a [u64],
        words: usize,
        t: usize,
        emitted: usize,
    }
    impl<'a> Bk<'a> {
        fn row(&self, v: usize) -> &'a [u64] {
            &self.rows[v * self.words..(v + 1) * self.words]
        }
        fn run(
            &mut self,
            r: &mut Vec<usize>,
            p: &Bits,
            x: &Bits,
            visit: &mut dyn FnMut(&[usize]) -> bool,
        ) -> Result<bool> {
            if r.len() + p.count() < self.t {
                return Ok(true);
            }
            if p.is_empty() && x.is_empty() {
                self.emitted += 1;
                if self.emitted > ENUM_CAP {
                    return Err(Error::BudgetExceeded {
                        name: "ENUM_CAP",
                        limit: ENUM_CAP as u64,
                        requested: self.emitted as u64,
                    });
                }
                return Ok(visit(r));
            }
            // Pivot: maximizes |P ∩ N(u)| over P ∪ X, ties by index.
            let mut pivot = None;
            let mut pivot_score = usize::MAX;
            for u in p.members().into_iter().chain(x.members()) {
                let score = p.count() - p.intersection_count(self.row(u));
                if score < pivot_score {
                    pivot_score = score;
                    pivot = Some(u);
                }
            }
            let mut ext = p.clone();
            if let Some(u) = pivot {
                ext.andnot_assign(self.row(u));
            }
            let mut p = p.clone();
            let mut x = x.clone();
            for v in ext.members() {
                r.push(v);
                let p2 = p.and(self.row(v));
                let x2 = x.and(self.row(v));
                let keep_going = self.run(r, &p2, &x2, visit)?;
                r.pop();
                if !keep_going {
                    return Ok(false);
                }
                p.remove(v);
                x.insert(v);
            }
            Ok(true)
        }
    }
    let mut bk = Bk {
        rows: &comp.adj,
        words,
        t,
        emitted: 0,
    };
    let p = Bits::full(g.v(), words);
    let x = Bits::empty(words);
    bk.run(&mut Vec::new(), &p, &x, visit)
}

/// All maximal independent sets of size at least `t`, plus every independent
/// subset of those with size at least `t`, deduplicated and canonically
/// ordered. Requires `t >= alpha(G) - 3` so the subset expansion stays small.
pub fn enumerate_independent_sets_at_least(g: &DenseGraph, t: usize) -> Result<Vec<VertexSet>> {
    let alpha = max_independent_set(g, 1.min(g.v()))?.size;
    if t + 3 < alpha {
        return Err(Error::InvalidParameter(format!(
            "threshold {t} is below alpha - 3 = {}",
            alpha.saturating_sub(3)
        )));
    }
    let mut seen: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut cap_err = None;
    for_each_maximal_independent_ge(g, t, &mut |members| {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        // All subsets of size >= t of this maximal set.
        let m = sorted.len();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        while let Some((idx, cur)) = stack.pop() {
            if cur.len() + (m - idx) < t {
                continue;
            }
            if idx == m {
                if cur.len() >= t {
                    if seen.len() >= ENUM_CAP {
                        cap_err = Some(Error::BudgetExceeded {
                            name: "ENUM_CAP",
                            limit: ENUM_CAP as u64,
                            requested: seen.len() as u64 + 1,
                        });
                        return false;
                    }
                    seen.insert(cur);
                }
                continue;
            }
            let mut with = cur.clone();
            with.push(sorted[idx]);
            stack.push((idx + 1, with));
            stack.push((idx + 1, cur));
        }
        true
    })?;
    if let Some(e) = cap_err {
        return Err(e);
    }
    Ok(seen
        .into_iter()
        .map(|m| VertexSet::from_members(g.v(), m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{FamilyKind, GraphFamily};
    use crate::rng::SplitMix64;
    use num_traits::ToPrimitive;

    fn family_graph(kind: FamilyKind, n: usize) -> (GraphView, DenseGraph) {
        let view = GraphView::new(GraphFamily::new(kind, n).unwrap()).unwrap();
        let g = DenseGraph::from_view(&view).unwrap();
        (view, g)
    }

    fn random_graph(rng: &mut SplitMix64, v: usize, density_pct: u64) -> DenseGraph {
        let mut g = DenseGraph::new(v);
        for u in 0..v {
            for w in u + 1..v {
                if rng.below(100) < density_pct {
                    g.add_edge(u, w);
                }
            }
        }
        g
    }

    /// Oracle: independence number by subset dynamic programming.
    fn alpha_brute(g: &DenseGraph) -> usize {
        let v = g.v();
        assert!(v <= 24);
        let masks: Vec<u32> = (0..v)
            .map(|u| {
                let mut m = 0u32;
                for w in 0..v {
                    if g.has_edge(u, w) {
                        m |= 1 << w;
                    }
                }
                m
            })
            .collect();
        let mut ind = vec![false; 1usize << v];
        ind[0] = true;
        let mut best = 0;
        for mask in 1usize..(1 << v) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            ind[mask] = ind[rest] && (masks[low] as usize & rest) == 0;
            if ind[mask] {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn empty_graph_alpha_is_v() {
        let g = DenseGraph::new(10);
        let r = max_independent_set(&g, 0).unwrap();
        assert_eq!(r.size, 10);
        assert_eq!(r.witness.card(), 10);
    }

    #[test]
    fn family_alphas() {
        let (_, g3) = family_graph(FamilyKind::Permutation, 3);
        assert_eq!(max_independent_set(&g3, 1).unwrap().size, 2);
        let (_, m4) = family_graph(FamilyKind::Matching, 4);
        assert_eq!(max_independent_set(&m4, 1).unwrap().size, 15);
    }

    #[test]
    fn hint_at_alpha_still_finds_witness() {
        let (_, g4) = family_graph(FamilyKind::Permutation, 4);
        let r = max_independent_set(&g4, 6).unwrap();
        assert_eq!(r.size, 6);
        assert!(g4.is_independent(&r.witness));
        assert!(max_independent_set(&g4, 7).is_err());
    }

    #[test]
    fn solver_matches_brute_force() {
        let mut rng = SplitMix64::new(0x5eed_0007);
        for trial in 0..200 {
            let v = 6 + (rng.below(19)) as usize; // 6..=24
            let density = 10 + rng.below(81);
            let g = random_graph(&mut rng, v, density);
            let r = max_independent_set(&g, 0).unwrap();
            assert!(g.is_independent(&r.witness), "trial {trial}");
            assert_eq!(r.size, alpha_brute(&g), "trial {trial} v={v}");
        }
    }

    #[test]
    fn edge_deletion_never_decreases_alpha() {
        let mut rng = SplitMix64::new(0x5eed_0008);
        for _ in 0..100 {
            let v = 8 + rng.below(13) as usize;
            let mut g = random_graph(&mut rng, v, 50);
            let before = max_independent_set(&g, 0).unwrap().size;
            // pick a random existing edge
            let edges: Vec<(usize, usize)> = (0..v)
                .flat_map(|u| (u + 1..v).map(move |w| (u, w)))
                .filter(|&(u, w)| g.has_edge(u, w))
                .collect();
            if edges.is_empty() {
                continue;
            }
            let (u, w) = edges[rng.below(edges.len() as u64) as usize];
            g.remove_edge(u, w);
            let after = max_independent_set(&g, before).unwrap().size;
            assert!(after >= before);
        }
    }

    #[test]
    fn enumeration_finds_exactly_the_stars() {
        for (kind, n, expected) in [
            (FamilyKind::Permutation, 3, 9usize),
            (FamilyKind::Permutation, 4, 16),
            (FamilyKind::Matching, 3, 15),
        ] {
            let (view, g) = family_graph(kind, n);
            let sets = enumerate_maximum_independent_sets(&g).unwrap();
            assert_eq!(sets.len(), expected, "{kind:?} n={n}");
            let stars: std::collections::HashSet<Vec<usize>> = view
                .all_stars()
                .unwrap()
                .into_iter()
                .map(|(_, s)| s.members())
                .collect();
            for s in &sets {
                assert!(stars.contains(&s.members()), "non-star maximum set");
            }
            // Canonical order: lexicographically sorted member lists.
            let listed: Vec<Vec<usize>> = sets.iter().map(|s| s.members()).collect();
            let mut sorted = listed.clone();
            sorted.sort();
            assert_eq!(listed, sorted);
        }
    }

    #[test]
    fn at_least_examples() {
        let (view, m3) = family_graph(FamilyKind::Matching, 3);
        let sets = enumerate_independent_sets_at_least(&m3, 3).unwrap();
        assert_eq!(sets.len(), 15);
        let stars: std::collections::HashSet<Vec<usize>> = view
            .all_stars()
            .unwrap()
            .into_iter()
            .map(|(_, s)| s.members())
            .collect();
        for s in &sets {
            assert!(stars.contains(&s.members()));
        }

        let sets = enumerate_independent_sets_at_least(&m3, 4).unwrap();
        assert!(sets.is_empty());

        let (_, g3) = family_graph(FamilyKind::Permutation, 3);
        let sets = enumerate_independent_sets_at_least(&g3, 2).unwrap();
        assert_eq!(sets.len(), 9);

        assert!(enumerate_independent_sets_at_least(&m3, 10).unwrap().is_empty());
    }

    #[test]
    fn alpha_of_matching_3() {
        let (_, m3) = family_graph(FamilyKind::Matching, 3);
        let r = max_independent_set(&m3, 3).unwrap();
        assert_eq!(r.size, 3);
    }
}
