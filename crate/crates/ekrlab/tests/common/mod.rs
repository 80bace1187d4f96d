//! Brute-force oracles shared by the integration suites. Everything here is
//! deliberately independent of the library's computation paths: enumeration
//! instead of formulas, subset scans instead of branch and bound.

use ekrlab::graph::GraphView;
use ekrlab::mis::DenseGraph;

/// All permutations of `{0..n-1}` as image vectors, lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    go(n, &mut cur, &mut vec![false; n], &mut out);
    out
}

/// Number of fixed-point-free permutations of `{0..n-1}`, by enumeration.
pub fn derangements_by_enumeration(n: usize) -> u64 {
    all_permutations(n)
        .iter()
        .filter(|p| p.iter().enumerate().all(|(i, &v)| v != i))
        .count() as u64
}

/// All perfect matchings of `{0..2n-1}` (smallest-unmatched-first recursion),
/// each as a sorted pair list.
pub fn all_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        free: &[usize],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free[0];
        for idx in 1..free.len() {
            let b = free[idx];
            let rest: Vec<usize> = free[1..]
                .iter()
                .copied()
                .filter(|&v| v != b)
                .collect();
            cur.push((a, b));
            go(&rest, cur, out);
            cur.pop();
        }
    }
    let verts: Vec<usize> = (0..2 * n).collect();
    let mut out = Vec::new();
    go(&verts, &mut Vec::new(), &mut out);
    out
}

/// Degree of the matching disjointness graph by pairwise comparison.
pub fn matching_degree_by_enumeration(n: usize) -> u64 {
    let ms = all_matchings(n);
    let fixed: std::collections::HashSet<(usize, usize)> = ms[0].iter().copied().collect();
    ms.iter()
        .filter(|m| m.iter().all(|e| !fixed.contains(e)))
        .count() as u64
}

/// Adjacency bitmasks of a graph with at most 25 vertices.
pub fn small_masks(g: &DenseGraph) -> Vec<u32> {
    let v = g.v();
    assert!(v <= 25);
    (0..v)
        .map(|u| {
            let mut m = 0u32;
            for w in 0..v {
                if g.has_edge(u, w) {
                    m |= 1 << w;
                }
            }
            m
        })
        .collect()
}

/// Independence table over all subsets of a graph with at most 25 vertices.
pub fn independence_table(g: &DenseGraph) -> Vec<bool> {
    let v = g.v();
    let masks = small_masks(g);
    let mut ind = vec![false; 1 << v];
    ind[0] = true;
    for mask in 1usize..(1 << v) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        ind[mask] = ind[rest] && (masks[low] as usize & rest) == 0;
    }
    ind
}

/// Star bitmasks of a small materialized family.
pub fn star_masks(view: &GraphView) -> Vec<u32> {
    view.all_stars()
        .unwrap()
        .into_iter()
        .map(|(_, s)| {
            let mut m = 0u32;
            for x in s.members() {
                m |= 1 << x;
            }
            m
        })
        .collect()
}
