//! Exact verification laboratory for extremal independent-set structure on two
//! vertex-transitive graph families:
//!
//! * `Γ_n`, the derangement graph on the permutations of an `n`-set (two
//!   permutations adjacent when they disagree everywhere), and
//! * `𝓜_n`, the disjointness graph on the perfect matchings of the complete
//!   graph on `2n` vertices (two matchings adjacent when they share no edge).
//!
//! In both families the maximum independent sets are the "stars" (all
//! permutations mapping a fixed point to a fixed value; all matchings through
//! a fixed edge). The crate computes the relevant combinatorial and spectral
//! quantities exactly over arbitrary-precision rationals, provides an exact
//! branch-and-bound maximum-independent-set solver, checks the identity and
//! inequality suites that govern near-extremal sets, and runs seeded,
//! thread-count-invariant Monte Carlo sweeps estimating when random spanning
//! subgraphs keep the independence number of the full graph.
//!
//! Everything exposed here is deterministic: vertex order is a fixed ranking
//! order, random trials are keyed by `(seed, trial, edge)` counters, and all
//! identity checks are performed with zero tolerance in exact arithmetic.

pub mod budget;
pub mod characters;
pub mod counting;
pub mod error;
pub mod fkn;
pub mod graph;
pub mod matching;
pub mod mis;
pub mod perm;
pub mod projector;
pub mod rng;
pub mod sim;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{FamilyKind, GraphFamily, GraphParams, GraphView, StarCenter, VertexSet};
pub use matching::PerfectMatching;
pub use perm::Permutation;
