//! Seeded Monte Carlo for random spanning subgraphs of the two families.
//!
//! Every edge coin is a pure function of `(seed, trial, edge)` where the edge
//! is identified by its ordered rank pair, never by iteration order. Implicit
//! scans and explicit subgraph materialization therefore see the same
//! subgraph, trials parallelize with thread-count-invariant results, and the
//! same trial index yields monotone-coupled subgraphs across probabilities.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::budget::{LOG_CHOOSE_MAX_TERMS, SUPERSTAR_SCAN_MAX, TRIAL_ALPHA_MAX_V};
use crate::error::{Error, Result};
use crate::graph::{FamilyKind, GraphFamily, GraphParams, GraphView, StarCenter, VertexSet};
use crate::mis::{enumerate_independent_sets_at_least, max_independent_set, DenseGraph};
use crate::rng::{mix64, unit_f64};

/// Two-sided 95% normal quantile used by Wilson intervals.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

// ============================================================================
// Edge coins
// ============================================================================

/// The uniform variate attached to one edge of one trial.
#[inline]
pub fn edge_coin(seed: u64, trial: u64, u_rank: u64, v_rank: u64) -> f64 {
    let h = mix64(mix64(mix64(mix64(seed) ^ trial) ^ u_rank) ^ v_rank);
    unit_f64(h)
}

/// Deterministic edge-survival coin: the same quadruple always yields the
/// same answer, within a run and across runs.
#[inline]
pub fn edge_survives(seed: u64, trial: u64, u_rank: u64, v_rank: u64, p: f64) -> bool {
    debug_assert!(u_rank < v_rank, "edge identity is the ordered rank pair");
    edge_coin(seed, trial, u_rank, v_rank) < p
}

// ============================================================================
// Closed-form evaluators
// ============================================================================

/// Threshold probability `ln(K(V-N)) / M`, cross-checked against the
/// family-specific closed form to 1e-12 relative.
pub fn critical_probability(family: GraphFamily) -> Result<f64> {
    if family.n < 3 {
        return Err(Error::InvalidParameter(format!(
            "critical probability requires n >= 3, got {}",
            family.n
        )));
    }
    let params = family.params()?;
    let kvn = (&params.star_count * (&params.vertices - &params.independence))
        .to_f64()
        .ok_or_else(|| Error::InvalidParameter("K(V-N) overflows f64".into()))?;
    let m = params.tau_abs.to_f64().expect("fits f64");
    let general = kvn.ln() / m;

    let n = family.n as f64;
    let closed = match family.kind {
        FamilyKind::Permutation => {
            let v = params.vertices.to_f64().expect("fits f64");
            let d = params.valency.to_f64().expect("fits f64");
            (n - 1.0) * (v * n * (n - 1.0)).ln() / d
        }
        FamilyKind::Matching => {
            let v = params.vertices.to_f64().expect("fits f64");
            let d = params.valency.to_f64().expect("fits f64");
            (2.0 * n - 2.0) * (n * (2.0 * n - 2.0) * v).ln() / d
        }
    };
    assert!(
        (general - closed).abs() <= 1e-12 * closed.abs(),
        "threshold probability forms disagree: {general} vs {closed}"
    );
    Ok(closed)
}

/// Closed-form expected number of surviving superstars `K (V-N) (1-p)^M`.
pub fn expected_superstar_count(family: GraphFamily, p: f64) -> Result<f64> {
    check_probability(p)?;
    let params = family.params()?;
    let k = params.star_count.to_f64().expect("fits f64");
    let vn = (&params.vertices - &params.independence)
        .to_f64()
        .expect("fits f64");
    let m = params.tau_abs.to_f64().expect("fits f64");
    Ok(k * vn * (1.0 - p).powf(m))
}

fn ln_choose(n: f64, k: u64) -> Result<f64> {
    if k as f64 > n {
        return Ok(f64::NEG_INFINITY);
    }
    if k > LOG_CHOOSE_MAX_TERMS {
        return Err(Error::BudgetExceeded {
            name: "LOG_CHOOSE_MAX_TERMS",
            limit: LOG_CHOOSE_MAX_TERMS,
            requested: k,
        });
    }
    let mut acc = 0.0f64;
    for t in 1..=k {
        acc += (n - k as f64 + t as f64).ln() - (t as f64).ln();
    }
    Ok(acc)
}

/// Log-space evaluation of the faux-star expectation bound
/// `K C(N,i) C(V,j) (1-p)^{j(M-i)} (jp)^i`.
pub fn fauxstar_expectation_bound(family: GraphFamily, p: f64, i: u64, j: u64) -> Result<f64> {
    check_probability(p)?;
    let params = family.params()?;
    let n_f = params.independence.to_f64().expect("fits f64");
    if i == 0 || (i as f64) > n_f {
        return Err(Error::InvalidParameter(format!(
            "faux-star bound requires 1 <= i <= N, got i={i}"
        )));
    }
    if j < i {
        return Err(Error::InvalidParameter(format!(
            "faux-star bound requires j >= i, got i={i}, j={j}"
        )));
    }
    if p == 0.0 {
        return Ok(0.0); // (jp)^i vanishes since i >= 1
    }
    let v_f = params.vertices.to_f64().expect("fits f64");
    let k_f = params.star_count.to_f64().expect("fits f64");
    let m_f = params.tau_abs.to_f64().expect("fits f64");
    let mut ln = k_f.ln() + ln_choose(n_f, i)? + ln_choose(v_f, j)?;
    let deleted_exponent = j as f64 * (m_f - i as f64);
    if deleted_exponent != 0.0 {
        ln += deleted_exponent * (1.0 - p).ln();
    }
    ln += i as f64 * (j as f64 * p).ln();
    Ok(ln.exp())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

// ============================================================================
// Per-trial operations
// ============================================================================

/// Outcome of one seeded trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u64,
    /// Number of superstars whose star-to-apex edges were all deleted.
    pub y: u64,
    /// Exact independence number of the surviving subgraph, when computed.
    pub alpha: Option<usize>,
    /// Whether the solver's witness is exactly a star.
    pub witness_is_star: Option<bool>,
    /// `alpha > N` with no surviving superstar implies an independent faux
    /// star exists.
    pub faux_star_implied: Option<bool>,
}

/// Shared per-family state for repeated trials.
pub struct SimContext {
    view: GraphView,
    params: GraphParams,
    n_alpha: usize,
    stars: Vec<(StarCenter, VertexSet)>,
    star_members: Vec<Vec<usize>>,
    base_edges: Vec<(u32, u32)>,
}

impl SimContext {
    pub fn new(family: GraphFamily) -> Result<Self> {
        let view = GraphView::new(family)?;
        let params = family.params()?;
        let n_alpha = params.independence.to_usize().expect("within view budget");
        let stars = view.all_stars()?;
        let star_members = stars.iter().map(|(_, s)| s.members()).collect();
        let v = view.vertex_count();
        let mut base_edges = Vec::new();
        if v <= TRIAL_ALPHA_MAX_V {
            for u in 0..v {
                for w in u + 1..v {
                    if view.adjacent_unchecked(u, w) {
                        base_edges.push((u as u32, w as u32));
                    }
                }
            }
        }
        Ok(Self {
            view,
            params,
            n_alpha,
            stars,
            star_members,
            base_edges,
        })
    }

    pub fn view(&self) -> &GraphView {
        &self.view
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn independence_number(&self) -> usize {
        self.n_alpha
    }

    /// Counts superstars all of whose `M` star-to-apex edges were deleted,
    /// exiting each inner scan at the first surviving edge.
    pub fn superstar_scan(&self, p: f64, seed: u64, trial: u64) -> Result<u64> {
        check_probability(p)?;
        let v = self.view.vertex_count() as u64;
        let scan = self.stars.len() as u64 * (v - self.n_alpha as u64);
        if scan > SUPERSTAR_SCAN_MAX {
            return Err(Error::BudgetExceeded {
                name: "SUPERSTAR_SCAN_MAX",
                limit: SUPERSTAR_SCAN_MAX,
                requested: scan,
            });
        }
        let mut y = 0u64;
        for ((_, star), members) in self.stars.iter().zip(&self.star_members) {
            for w in 0..self.view.vertex_count() {
                if star.contains(w) {
                    continue;
                }
                let mut survives_one = false;
                for &u in members {
                    if !self.view.adjacent_unchecked(u, w) {
                        continue;
                    }
                    let (a, b) = (u.min(w) as u64, u.max(w) as u64);
                    if edge_survives(seed, trial, a, b, p) {
                        survives_one = true;
                        break;
                    }
                }
                if !survives_one {
                    y += 1;
                }
            }
        }
        Ok(y)
    }

    /// Materializes the surviving subgraph of one trial.
    pub fn surviving_subgraph(&self, p: f64, seed: u64, trial: u64) -> Result<DenseGraph> {
        check_probability(p)?;
        let v = self.view.vertex_count();
        if v > TRIAL_ALPHA_MAX_V {
            return Err(Error::BudgetExceeded {
                name: "TRIAL_ALPHA_MAX_V",
                limit: TRIAL_ALPHA_MAX_V as u64,
                requested: v as u64,
            });
        }
        let mut g = DenseGraph::new(v);
        for &(a, b) in &self.base_edges {
            if edge_survives(seed, trial, a as u64, b as u64, p) {
                g.add_edge(a as usize, b as usize);
            }
        }
        Ok(g)
    }

    /// One full trial: exact `alpha` of the surviving subgraph (primed with
    /// the always-valid star lower bound), the superstar count, and derived
    /// flags.
    pub fn trial_alpha(&self, p: f64, seed: u64, trial: u64) -> Result<TrialOutcome> {
        let g = self.surviving_subgraph(p, seed, trial)?;
        let mis = max_independent_set(&g, self.n_alpha)?;
        // A star spans no edges, so it stays independent in every subgraph.
        assert!(
            mis.size >= self.n_alpha,
            "alpha fell below the star lower bound"
        );
        let y = self.superstar_scan(p, seed, trial)?;
        let witness_is_star =
            mis.size == self.n_alpha && self.stars.iter().any(|(_, s)| s == &mis.witness);
        Ok(TrialOutcome {
            trial,
            y,
            alpha: Some(mis.size),
            witness_is_star: Some(witness_is_star),
            faux_star_implied: Some(mis.size > self.n_alpha && y == 0),
        })
    }

    /// Superstar count only; used when the subgraph is too large to solve.
    pub fn trial_scan_only(&self, p: f64, seed: u64, trial: u64) -> Result<TrialOutcome> {
        let y = self.superstar_scan(p, seed, trial)?;
        Ok(TrialOutcome {
            trial,
            y,
            alpha: None,
            witness_is_star: None,
            faux_star_implied: None,
        })
    }

    /// Exhaustive faux-star counters for one trial: for each `i >= 1`, the
    /// number of independent faux stars of the surviving subgraph whose
    /// largest star overlap is `N - i`. Exponential in the subgraph; only
    /// viable at small sizes, guarded by the enumeration budgets.
    pub fn faux_star_counts(
        &self,
        p: f64,
        seed: u64,
        trial: u64,
    ) -> Result<Vec<(usize, u64)>> {
        let g = self.surviving_subgraph(p, seed, trial)?;
        let sets = enumerate_independent_sets_at_least(&g, self.n_alpha + 1)?;
        let mut counts: std::collections::BTreeMap<usize, u64> = Default::default();
        for set in &sets {
            let (overlap, _) = self.view.max_star_overlap(set)?;
            if overlap < self.n_alpha {
                *counts.entry(self.n_alpha - overlap).or_default() += 1;
            }
        }
        Ok(counts.into_iter().collect())
    }
}

/// Convenience wrappers matching the one-shot operation signatures.
pub fn superstar_scan(family: GraphFamily, p: f64, seed: u64, trial: u64) -> Result<u64> {
    SimContext::new(family)?.superstar_scan(p, seed, trial)
}

pub fn trial_alpha(family: GraphFamily, p: f64, seed: u64, trial: u64) -> Result<TrialOutcome> {
    SimContext::new(family)?.trial_alpha(p, seed, trial)
}

// ============================================================================
// Sweeps
// ============================================================================

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub family: GraphFamily,
    pub p_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Rayon thread budget; 0 uses the default. Results are identical for
    /// every value.
    pub threads: usize,
    /// When true each trial solves for exact alpha; when false only the
    /// superstar scan runs and "success" means no superstar survived.
    pub alpha_mode: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_y: f64,
    pub pc: f64,
    pub p_over_pc: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub rows: Vec<SweepRow>,
}

impl ThresholdReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,n,p,trials,successes,p_hat,wilson_lo,wilson_hi,mean_Y,pc,p_over_pc\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                r.family,
                r.n,
                r.p,
                r.trials,
                r.successes,
                r.p_hat,
                r.wilson_lo,
                r.wilson_hi,
                r.mean_y,
                r.pc,
                r.p_over_pc
            ));
        }
        out
    }
}

/// Two-sided Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p_hat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The bounds are exactly 0 and 1 at the boundary counts; computing them
    // through `center +/- half` would lose that to rounding.
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Runs the full sweep: for each grid probability, `trials` seeded trials
/// distributed over the thread budget, aggregated in canonical order.
pub fn threshold_sweep(cfg: &SimConfig) -> Result<ThresholdReport> {
    if cfg.p_grid.is_empty() {
        return Err(Error::InvalidParameter("empty probability grid".into()));
    }
    for &p in &cfg.p_grid {
        check_probability(p)?;
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let ctx = SimContext::new(cfg.family)?;
    let pc = critical_probability(cfg.family)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;

    let mut rows = Vec::with_capacity(cfg.p_grid.len());
    for &p in &cfg.p_grid {
        let outcomes: Result<Vec<TrialOutcome>> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    if cfg.alpha_mode {
                        ctx.trial_alpha(p, cfg.seed, t)
                    } else {
                        ctx.trial_scan_only(p, cfg.seed, t)
                    }
                })
                .collect()
        });
        let outcomes = outcomes?;
        let successes = outcomes
            .iter()
            .filter(|o| match o.alpha {
                Some(alpha) => alpha == ctx.n_alpha,
                None => o.y == 0,
            })
            .count() as u64;
        let mean_y =
            outcomes.iter().map(|o| o.y as f64).sum::<f64>() / cfg.trials as f64;
        let (lo, hi) = wilson_interval(successes, cfg.trials, WILSON_Z);
        rows.push(SweepRow {
            family: cfg.family.kind.label().to_string(),
            n: cfg.family.n,
            p,
            trials: cfg.trials,
            successes,
            p_hat: successes as f64 / cfg.trials as f64,
            wilson_lo: lo,
            wilson_hi: hi,
            mean_y,
            pc,
            p_over_pc: p / pc,
        });
    }
    Ok(ThresholdReport { rows })
}
