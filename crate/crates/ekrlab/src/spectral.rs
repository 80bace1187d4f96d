//! Spectra of the two families and the spectral bounds built on them.
//!
//! For the permutation family the full spectrum comes from symmetric-group
//! characters: the eigenvalue attached to a partition is the normalized
//! character sum over fixed-point-free cycle types, with multiplicity equal
//! to the squared dimension. Dense diagonalization (both families) is the
//! independent cross-check; eigenvalues of these graphs are integers, so the
//! dense route snaps to integers and is audited against exact trace
//! identities before being trusted.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::budget::DENSE_SPECTRUM_MAX_V;
use crate::characters::{
    class_size, dimension, mn_character, partitions_no_ones, partitions_of, IntegerPartition,
};
use crate::error::{Error, Result};
use crate::graph::{FamilyKind, GraphFamily, GraphParams, GraphView, VertexSet};

/// Eigenvalue multiset of one graph: integer eigenvalues in decreasing order
/// with multiplicities summing to the vertex count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spectrum {
    entries: Vec<(i64, u64)>,
}

impl Spectrum {
    fn from_pairs(mut pairs: Vec<(i64, u64)>) -> Self {
        pairs.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut entries: Vec<(i64, u64)> = Vec::new();
        for (ev, mult) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == ev => last.1 += mult,
                _ => entries.push((ev, mult)),
            }
        }
        Self { entries }
    }

    /// `(eigenvalue, multiplicity)` pairs, eigenvalues strictly decreasing.
    pub fn entries(&self) -> &[(i64, u64)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn largest(&self) -> i64 {
        self.entries.first().expect("nonempty spectrum").0
    }

    pub fn least(&self) -> i64 {
        self.entries.last().expect("nonempty spectrum").0
    }

    /// Second smallest distinct eigenvalue.
    pub fn second_smallest(&self) -> Option<i64> {
        let k = self.entries.len();
        (k >= 2).then(|| self.entries[k - 2].0)
    }
}

/// Exact eigenvalue of the derangement graph attached to one partition:
/// the normalized character sum over all fixed-point-free cycle types.
pub fn gamma_eigenvalue(lambda: &IntegerPartition) -> Result<BigRational> {
    let n = lambda.sum();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "gamma_eigenvalue requires n >= 2".into(),
        ));
    }
    let mut acc: BigInt = Zero::zero();
    for mu in partitions_no_ones(n) {
        acc += class_size(&mu) * mn_character(lambda, &mu)?;
    }
    Ok(BigRational::new(acc, BigInt::from(dimension(lambda))))
}

/// Full spectrum of the derangement graph from the character formula; the
/// multiplicity of the eigenvalue attached to `lambda` is `dim(lambda)^2`.
pub fn gamma_spectrum(n: usize) -> Result<Spectrum> {
    let mut pairs = Vec::new();
    for lambda in partitions_of(n) {
        let xi = gamma_eigenvalue(&lambda)?;
        if !xi.is_integer() {
            return Err(Error::SpectrumAudit(format!(
                "character eigenvalue for {lambda} is not an integer: {xi}"
            )));
        }
        let ev = xi.to_integer().to_i64().ok_or_else(|| {
            Error::SpectrumAudit(format!("eigenvalue for {lambda} overflows i64"))
        })?;
        let d = dimension(&lambda) as u64;
        pairs.push((ev, d * d));
    }
    Ok(Spectrum::from_pairs(pairs))
}

/// Raw adjacency eigenvalues by dense symmetric diagonalization, ascending.
pub fn dense_eigenvalues_raw(view: &GraphView) -> Result<Vec<f64>> {
    let v = view.vertex_count();
    if v > DENSE_SPECTRUM_MAX_V {
        return Err(Error::BudgetExceeded {
            name: "DENSE_SPECTRUM_MAX_V",
            limit: DENSE_SPECTRUM_MAX_V as u64,
            requested: v as u64,
        });
    }
    let m = DMatrix::<f64>::from_fn(v, v, |i, j| {
        if view.adjacent_unchecked(i, j) {
            1.0
        } else {
            0.0
        }
    });
    let mut evs: Vec<f64> = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    evs.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(evs)
}

/// Snapping tolerance: eigenvalues of these graphs are integers.
const SNAP_TOL: f64 = 1e-6;

/// Full integer spectrum by dense diagonalization, audited: each eigenvalue
/// must be within `1e-6` of an integer, and the snapped multiset must
/// reproduce `trace = 0` and `trace of square = V*d` exactly.
pub fn dense_spectrum(view: &GraphView) -> Result<Spectrum> {
    let raw = dense_eigenvalues_raw(view)?;
    let mut pairs: Vec<(i64, u64)> = Vec::new();
    for x in raw {
        let snapped = x.round();
        if (x - snapped).abs() > SNAP_TOL {
            return Err(Error::NonIntegralSpectrum(x));
        }
        let ev = snapped as i64;
        match pairs.last_mut() {
            Some(last) if last.0 == ev => last.1 += 1,
            _ => pairs.push((ev, 1)),
        }
    }
    let spec = Spectrum::from_pairs(pairs);

    let params = view.family().params()?;
    let trace: i128 = spec
        .entries()
        .iter()
        .map(|&(ev, m)| ev as i128 * m as i128)
        .sum();
    if trace != 0 {
        return Err(Error::SpectrumAudit(format!(
            "snapped spectrum has trace {trace}, expected 0"
        )));
    }
    let trace_sq: i128 = spec
        .entries()
        .iter()
        .map(|&(ev, m)| (ev as i128) * (ev as i128) * m as i128)
        .sum();
    let expected =
        params.vertices.to_i128().expect("small") * params.valency.to_i128().expect("small");
    if trace_sq != expected {
        return Err(Error::SpectrumAudit(format!(
            "snapped spectrum has square trace {trace_sq}, expected {expected}"
        )));
    }
    if spec.total_multiplicity() != view.vertex_count() as u64 {
        return Err(Error::SpectrumAudit(
            "multiplicities do not sum to the vertex count".into(),
        ));
    }
    Ok(spec)
}

/// Ratio bound on the independence number: `V / (1 + d/M)`, exact.
pub fn hoffman_bound(params: &GraphParams) -> BigRational {
    BigRational::new(
        &params.vertices * &params.tau_abs,
        &params.tau_abs + &params.valency,
    )
}

/// Exact right-hand side of the spectral edge lower bound for a set of the
/// given size: `(V/2) [ (k - tau) s^2 + tau s - (tau - mu) r ]` with
/// `s = |S|/V`, `tau = -M`, and `r` the squared projection residual.
pub fn mixing_edge_lower_bound(
    params: &GraphParams,
    mu: i64,
    set_size: u64,
    residual_sq: &BigRational,
) -> BigRational {
    let v = BigRational::from_integer(params.vertices.clone());
    let k = BigRational::from_integer(params.valency.clone());
    let tau = -BigRational::from_integer(params.tau_abs.clone());
    let mu = BigRational::from_integer(BigInt::from(mu));
    let s = BigRational::new(BigInt::from(set_size), params.vertices.clone());
    let half_v = &v / BigRational::from_integer(BigInt::from(2));
    half_v * ((&k - &tau) * &s * &s + &tau * &s - (&tau - &mu) * residual_sq)
}

/// Guaranteed edges spanned by `(S \ A) ∪ B` when `S` is a maximum
/// independent set meeting the ratio bound: `max(0, |B| (M - |A|))`.
pub fn ratio_isoperimetry_bound(params: &GraphParams, a_size: u64, b_size: u64) -> BigInt {
    let inner = &params.tau_abs - BigInt::from(a_size);
    if inner.is_negative() {
        return Zero::zero();
    }
    inner * BigInt::from(b_size)
}

/// One row of the asymptotic parameter table.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub n: usize,
    pub vertices: BigInt,
    pub valency: BigInt,
    pub independence: BigInt,
    pub tau_abs: BigInt,
    pub star_count: BigInt,
    pub p_c: f64,
    /// `K / (V - N)^{1/2}`.
    pub k_ratio: f64,
}

/// Exact parameter columns plus the floating threshold probability and the
/// star-count ratio `K/(V-N)^{1/2}` for each size in the range.
pub fn asymptotic_table(
    kind: FamilyKind,
    n_lo: usize,
    n_hi: usize,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let family = GraphFamily::new(kind, n)?;
        let params = family.params()?;
        let p_c = crate::sim::critical_probability(family)?;
        let v_minus_n = (&params.vertices - &params.independence)
            .to_f64()
            .expect("fits f64");
        let k = params.star_count.to_f64().expect("fits f64");
        rows.push(TableRow {
            n,
            vertices: params.vertices,
            valency: params.valency,
            independence: params.independence,
            tau_abs: params.tau_abs,
            star_count: params.star_count,
            p_c,
            k_ratio: k / v_minus_n.sqrt(),
        });
    }
    Ok(rows)
}

/// Convenience: exact rational from a ratio of two machine integers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ============================================================================
// Randomized isoperimetry checks
// ============================================================================

/// Outcome of the seeded isoperimetry audit of one graph.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IsoCheckReport {
    pub family: String,
    pub n: usize,
    pub samples: u64,
    /// Second smallest eigenvalue used in the spectral bound.
    pub mu: i64,
    /// Whether `mu - tau >= M/2`, the premise of the projection chain.
    pub projection_chain_premise: bool,
    pub equality_at_star: bool,
    pub equality_at_full_set: bool,
    /// Spectral bound violations over random subsets (expected 0).
    pub mixing_violations: u64,
    /// Ratio-bound violations over random `(A, B)` pairs (expected 0).
    pub ratio_violations: u64,
    /// Projection-chain checks run (0 when the premise fails for this size).
    pub projection_chain_checked: u64,
    pub projection_chain_violations: u64,
}

impl IsoCheckReport {
    pub fn violations(&self) -> u64 {
        let eq = (!self.equality_at_star) as u64 + (!self.equality_at_full_set) as u64;
        eq + self.mixing_violations + self.ratio_violations + self.projection_chain_violations
    }
}

/// Audits the two edge lower bounds on seeded random sets: the spectral
/// bound with the exact projection residual on arbitrary subsets (with the
/// known equality cases), the ratio bound on star-surgery sets, and, when
/// `mu - tau >= M/2` holds, the derived `ed(A) >= (V M / 4) residual` chain
/// on sets of star size.
pub fn iso_check(view: &GraphView, samples: u64, seed: u64) -> Result<IsoCheckReport> {
    use crate::projector::{SetFunction, StarSpaceProjector};
    use crate::rng::SplitMix64;
    use num_rational::BigRational;

    let family = view.family();
    let params = family.params()?;
    let v = view.vertex_count();
    let n_alpha = params.independence.to_usize().expect("within view budget");
    let spec = dense_spectrum(view)?;
    let mu = spec
        .second_smallest()
        .ok_or(Error::SecondEigenvalueUnavailable)?;
    let projector = StarSpaceProjector::new(view)?;
    let mut rng = SplitMix64::new(seed);

    let check_set = |set: &VertexSet| -> Result<(BigRational, u64)> {
        let proj = projector.project(&SetFunction::indicator(set))?;
        let rhs = mixing_edge_lower_bound(&params, mu, set.card() as u64, &proj.residual_sq);
        Ok((rhs, view.induced_edge_count(set)?))
    };

    // Equality cases: a star and the full vertex set.
    let star = view.star_set(&family.star_centers()[0])?;
    let (rhs, ed) = check_set(&star)?;
    let equality_at_star = rhs == BigRational::from_integer(BigInt::from(ed));
    let full = VertexSet::full(v);
    let (rhs, ed) = check_set(&full)?;
    let equality_at_full_set = rhs == BigRational::from_integer(BigInt::from(ed));

    let mut mixing_violations = 0u64;
    for _ in 0..samples {
        let size = rng.below(v as u64 + 1) as usize;
        let set = VertexSet::from_members(v, rng.subset(v, size));
        let (rhs, ed) = check_set(&set)?;
        if rhs > BigRational::from_integer(BigInt::from(ed)) {
            mixing_violations += 1;
        }
    }

    // Ratio bound on T = (S \ A) ∪ B for a maximum independent star S.
    let star_members = star.members();
    let outside: Vec<usize> = (0..v).filter(|&x| !star.contains(x)).collect();
    let mut ratio_violations = 0u64;
    for _ in 0..samples {
        let a_size = rng.below(n_alpha as u64 + 1) as usize;
        let b_size = rng.below(outside.len() as u64 + 1) as usize;
        let drop: std::collections::HashSet<usize> = rng
            .subset(star_members.len(), a_size)
            .into_iter()
            .map(|i| star_members[i])
            .collect();
        let mut t: Vec<usize> = star_members
            .iter()
            .copied()
            .filter(|x| !drop.contains(x))
            .collect();
        t.extend(rng.subset(outside.len(), b_size).into_iter().map(|i| outside[i]));
        let t_set = VertexSet::from_members(v, t);
        let bound = ratio_isoperimetry_bound(&params, a_size as u64, b_size as u64);
        if BigInt::from(view.induced_edge_count(&t_set)?) < bound {
            ratio_violations += 1;
        }
    }

    // Derived chain at |A| = N, valid when mu - tau >= M/2. With tau = -M
    // this reads 2(mu + M) >= M, compared exactly in integers.
    let projection_chain_premise =
        (BigInt::from(mu) + &params.tau_abs) * 2 >= params.tau_abs.clone();
    let mut projection_chain_checked = 0u64;
    let mut projection_chain_violations = 0u64;
    if projection_chain_premise {
        let factor = BigRational::new(
            &params.vertices * &params.tau_abs,
            BigInt::from(4),
        );
        for _ in 0..samples {
            let set = VertexSet::from_members(v, rng.subset(v, n_alpha));
            let proj = projector.project(&SetFunction::indicator(&set))?;
            let bound = &factor * &proj.residual_sq;
            projection_chain_checked += 1;
            if BigRational::from_integer(BigInt::from(view.induced_edge_count(&set)?)) < bound {
                projection_chain_violations += 1;
            }
        }
    }

    Ok(IsoCheckReport {
        family: family.kind.label().to_string(),
        n: family.n,
        samples,
        mu,
        projection_chain_premise,
        equality_at_star,
        equality_at_full_set,
        mixing_violations,
        ratio_violations,
        projection_chain_checked,
        projection_chain_violations,
    })
}

/// Largest `|eigenvalue|` strictly between the valency and the least
/// eigenvalue; `None` when the spectrum has no middle eigenvalues.
pub fn middle_band_max_abs(spec: &Spectrum) -> Option<i64> {
    let k = spec.entries().len();
    if k <= 2 {
        return None;
    }
    spec.entries()[1..k - 1]
        .iter()
        .map(|&(ev, _)| ev.abs())
        .max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::IntegerPartition;

    fn part(parts: &[usize]) -> IntegerPartition {
        IntegerPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn gamma_eigenvalue_examples() {
        assert_eq!(gamma_eigenvalue(&part(&[4])).unwrap(), ratio(9, 1));
        assert_eq!(gamma_eigenvalue(&part(&[3, 1])).unwrap(), ratio(-3, 1));
        assert_eq!(gamma_eigenvalue(&part(&[1, 1, 1])).unwrap(), ratio(2, 1));
    }

    #[test]
    fn gamma_extreme_eigenvalues_closed_form() {
        use crate::counting::derangement_count;
        for n in 3..=10usize {
            let d = derangement_count(n as u64);
            let top = gamma_eigenvalue(&part(&[n])).unwrap();
            assert_eq!(top, BigRational::from_integer(d.clone()), "n={n} valency");
            let low = gamma_eigenvalue(&part(&[n - 1, 1])).unwrap();
            assert_eq!(
                low,
                -BigRational::new(d, BigInt::from(n as u64 - 1)),
                "n={n} least"
            );
        }
    }

    #[test]
    fn dense_spectrum_gamma3() {
        let g = GraphView::new(GraphFamily::permutation(3).unwrap()).unwrap();
        let s = dense_spectrum(&g).unwrap();
        assert_eq!(s.entries(), &[(2, 2), (-1, 4)]);
    }

    #[test]
    fn dense_spectrum_m3() {
        let g = GraphView::new(GraphFamily::matching(3).unwrap()).unwrap();
        let s = dense_spectrum(&g).unwrap();
        assert_eq!(s.entries(), &[(8, 1), (2, 5), (-2, 9)]);
    }

    #[test]
    fn dense_spectrum_gamma4_least() {
        let g = GraphView::new(GraphFamily::permutation(4).unwrap()).unwrap();
        let s = dense_spectrum(&g).unwrap();
        assert_eq!(s.least(), -3);
    }

    #[test]
    fn character_route_matches_dense_route() {
        for n in 3..=5usize {
            let g = GraphView::new(GraphFamily::permutation(n).unwrap()).unwrap();
            assert_eq!(gamma_spectrum(n).unwrap(), dense_spectrum(&g).unwrap());
        }
    }

    #[test]
    fn hoffman_examples() {
        let g4 = GraphFamily::permutation(4).unwrap().params().unwrap();
        assert_eq!(hoffman_bound(&g4), ratio(6, 1));
        let m3 = GraphFamily::matching(3).unwrap().params().unwrap();
        assert_eq!(hoffman_bound(&m3), ratio(3, 1));
        for n in 2..=8usize {
            for kind in [FamilyKind::Permutation, FamilyKind::Matching] {
                let p = GraphFamily::new(kind, n).unwrap().params().unwrap();
                assert_eq!(
                    hoffman_bound(&p),
                    BigRational::from_integer(p.independence.clone()),
                    "{kind:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn ratio_isoperimetry_examples() {
        let g4 = GraphFamily::permutation(4).unwrap().params().unwrap();
        assert_eq!(ratio_isoperimetry_bound(&g4, 1, 2), BigInt::from(4));
        assert_eq!(ratio_isoperimetry_bound(&g4, 3, 7), BigInt::from(0));
        assert_eq!(ratio_isoperimetry_bound(&g4, 5, 7), BigInt::from(0));
        let m4 = GraphFamily::matching(4).unwrap().params().unwrap();
        assert_eq!(ratio_isoperimetry_bound(&m4, 0, 1), BigInt::from(10));
    }

    #[test]
    fn table_ratio_decreasing_from_5() {
        for kind in [FamilyKind::Permutation, FamilyKind::Matching] {
            let rows = asymptotic_table(kind, 5, 10).unwrap();
            for w in rows.windows(2) {
                assert!(
                    w[1].k_ratio < w[0].k_ratio,
                    "{kind:?}: ratio not decreasing at n={}",
                    w[1].n
                );
            }
        }
    }

    #[test]
    fn table_pc_spot_values() {
        let rows = asymptotic_table(FamilyKind::Permutation, 6, 6).unwrap();
        assert!((rows[0].p_c - 0.18831).abs() < 1e-5);
        let rows = asymptotic_table(FamilyKind::Matching, 4, 4).unwrap();
        assert!((rows[0].p_c - 0.78320).abs() < 1e-5);
    }
}
