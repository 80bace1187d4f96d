//! Named size budgets.
//!
//! Exact computations refuse, rather than approximate, once an instance grows
//! past these limits. Every refusal surfaces as
//! [`Error::BudgetExceeded`](crate::Error::BudgetExceeded) carrying the budget
//! name, so callers can tell a principled refusal from a bug.

/// Largest vertex count for which a graph is materialized explicitly.
pub const MATERIALIZE_MAX_V: usize = 20_000;

/// Largest vertex count accepted by the dense symmetric eigensolver.
pub const DENSE_SPECTRUM_MAX_V: usize = 4_000;

/// Largest vertex count accepted by the exact star-space projector.
pub const PROJECTION_MAX_V: usize = 100_000;

/// Largest star count accepted by the exact star-space projector.
pub const PROJECTION_MAX_K: usize = 1_000;

/// Largest vertex count accepted by the exact independent-set solver.
pub const MIS_MAX_V: usize = 5_000;

/// Largest vertex count accepted by the independent-set enumerators.
pub const ENUM_MAX_V: usize = 1_500;

/// Cap on the number of sets an enumerator may emit.
pub const ENUM_CAP: usize = 1_000_000;

/// Largest set size accepted by the quadratic induced-edge counter.
pub const INDUCED_SET_MAX: usize = 5_000;

/// Largest family size parameter for exact parameter-pack math.
pub const PARAMS_MAX_N: usize = 20;

/// Cap on `K * (V - N)`, the number of superstars scanned per trial.
pub const SUPERSTAR_SCAN_MAX: u64 = 50_000;

/// Largest vertex count for which a per-trial subgraph is materialized and
/// solved exactly.
pub const TRIAL_ALPHA_MAX_V: usize = 200;

/// Largest `n` for which permutation ranks fit in `u64` (20! < 2^64).
pub const RANK_PERM_MAX_N: usize = 20;

/// Largest `n` for which matching ranks fit in `u64` ((2*16-1)!! < 2^64).
pub const RANK_MATCHING_MAX_N: usize = 16;

/// Cap on the summation length used by log-space binomial evaluation.
pub const LOG_CHOOSE_MAX_TERMS: u64 = 10_000_000;
