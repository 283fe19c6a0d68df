//! Extended latent class analysis (ELCA) for random hypergraphs.
//!
//! A hypergraph on `N` vertices with `M` hyperedges is stored as an `N×M`
//! binary incidence matrix `x`, with `x_ij = 1` iff vertex `i` belongs to
//! hyperedge `j`. Plain latent class analysis (LCA) models each hyperedge as
//! a draw from one of `G` classes, with conditionally independent Bernoulli
//! vertex memberships `p_ig`. The extended model adds an independent second
//! clustering with `K` levels whose label `k` rescales every membership
//! probability by a factor `a_k` (with `a_K = 1` for identifiability), so a
//! hyperedge with labels `(g, k)` contains vertex `i` with probability
//! `a_k φ_ig`. Setting `K = 1` recovers LCA exactly.
//!
//! The crate provides:
//!
//! - [`hypergraph`] — incidence matrices plus ingestion/export in three text
//!   formats (hyperedge lists, bipartite edge lists, dense CSV);
//! - [`model`] — parameter containers, validation, seeded random
//!   initialization, canonical label ordering, and the generative sampler;
//! - [`em`] — maximum-likelihood fitting by EM with
//!   minorize–maximize conditional M-steps (a cubic-root update for `φ`, a
//!   closed-form quadratic-root update for `a`, closed-form mixing weights);
//! - [`sizedist`] — exact Poisson-Binomial hyperedge-size distributions,
//!   closed-form size moments, and Poisson-mixture limits;
//! - [`selection`] — cross-validated likelihood estimation and a greedy
//!   search over `(G, K)`;
//! - [`cli`] — a small command-line front-end producing reproducible,
//!   manifest-stamped runs.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory.

#![warn(missing_docs)]

mod error;

pub mod cli;
pub mod em;
pub mod hypergraph;
pub mod model;
pub mod selection;
pub mod sizedist;

pub use error::{Error, Result};

/// Smallest probability kept strictly inside (0, 1) by the fitting loop.
///
/// Estimated `φ_ig` and `a_k` (for `k < K`) are clamped to
/// `[EPSILON, 1 - EPSILON]`: the minorizer curvature bounds used by the
/// M-steps involve `1/(1-a_k)²` and `1/(1-φ_ig)²`, which are undefined at 1,
/// and log-likelihoods diverge at 0.
pub const EPSILON: f64 = 1e-10;

/// Numerically stable `log(Σ exp(x_i))` via the max-shift trick.
///
/// Returns `-∞` for an empty slice or when every entry is `-∞`.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        // All -inf (zero total mass), or some +inf/NaN already poisoned the
        // input; either way the shift would produce NaN, so return as is.
        return max;
    }
    let sum: f64 = xs.iter().map(|x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Sum of a slice by pairwise (tree) reduction.
///
/// The reduction tree depends only on the slice length, so the result is
/// bitwise reproducible regardless of how the caller schedules surrounding
/// work, and the rounding error grows like `O(log n)` instead of `O(n)`.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
