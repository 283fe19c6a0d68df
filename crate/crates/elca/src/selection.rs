//! Cross-validated likelihood model selection over `(G, K)`.
//!
//! The score of a candidate pair is the held-out log-likelihood averaged
//! over random train/test splits of the hyperedges: each replicate sends
//! every edge to the training set independently with probability `q`,
//! fits on the training edges with multi-start EM, and evaluates the
//! fitted parameters on the held-out edges. Replicate sub-seeds depend
//! only on the configuration seed and the replicate index — never on
//! `(G, K)` — so every candidate pair is scored against the same splits
//! and comparisons are paired.
//!
//! [`greedy_search`] explores the grid the way the score surface is
//! usually shaped: grow `K` at fixed `G` while the score strictly
//! improves, advance `G` while the one-extra-cluster baseline `(G+1, 1)`
//! strictly beats `(G, 1)`, and finally pick the best pair evaluated
//! anywhere along the way.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::em;
use crate::hypergraph::IncidenceMatrix;
use crate::{pairwise_sum, Error, Result, EPSILON};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Controls for cross-validated scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    /// Number of train/test replicates.
    pub n_cv: usize,
    /// Probability that an edge lands in the training set.
    pub q: f64,
    /// EM convergence tolerance.
    pub tol: f64,
    /// EM iteration cap.
    pub max_iter: usize,
    /// Random restarts per fit.
    pub n_restarts: usize,
    /// Master seed; every replicate sub-seed derives from it.
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            n_cv: 20,
            q: 0.7,
            tol: 1e-6,
            max_iter: 2000,
            n_restarts: 10,
            seed: 1,
        }
    }
}

/// Cross-validated score of one `(G, K)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvEstimate {
    /// Mean held-out log-likelihood over the successful replicates.
    pub mean: f64,
    /// Per-replicate held-out log-likelihoods in replicate order;
    /// `None` marks a failed replicate.
    pub replicates: Vec<Option<f64>>,
    /// Number of failed replicates.
    pub n_failed: usize,
}

/// One row of the selection table: a scored `(G, K)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    /// Cluster count.
    pub g: usize,
    /// Additional-cluster count.
    pub k: usize,
    /// Mean held-out log-likelihood.
    pub mean: f64,
    /// Per-replicate values (`None` = failed replicate).
    pub replicates: Vec<Option<f64>>,
    /// Failed-replicate count.
    pub n_failed: usize,
}

/// The full outcome of a greedy search: every pair scored, the winner,
/// and the order of evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSelection {
    /// Scored pairs, sorted by `(g, k)`.
    pub rows: Vec<CvRow>,
    /// Selected cluster count.
    pub g_opt: usize,
    /// Selected additional-cluster count.
    pub k_opt: usize,
    /// Pairs in evaluation order; duplicate-free, starts at `(1, 1)`.
    pub trajectory: Vec<(usize, usize)>,
}

impl CvSelection {
    /// The row for `(g, k)`, if that pair was evaluated.
    pub fn lookup(&self, g: usize, k: usize) -> Option<&CvRow> {
        self.rows.iter().find(|r| r.g == g && r.k == k)
    }

    /// CSV table with one row per evaluated pair: `g`, `k`, the mean, and
    /// one column per replicate (empty cells for failed replicates).
    pub fn to_csv(&self) -> String {
        let n_rep = self.rows.first().map_or(0, |r| r.replicates.len());
        let mut out = String::from("g,k,mean_cv_loglik");
        for r in 1..=n_rep {
            out.push_str(&format!(",rep{r}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{},{},{}", row.g, row.k, row.mean));
            for rep in &row.replicates {
                match rep {
                    Some(v) => out.push_str(&format!(",{v}")),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Stream tag separating split draws from EM seeding in the sub-seed
/// derivation.
const STREAM_SPLIT: u64 = 0x5eed_0001;
const STREAM_EM: u64 = 0x5eed_0002;

/// SplitMix64-style mixer: collapses (seed, replicate, stream) into one
/// well-spread sub-seed. Depends on nothing else, so a replicate's draws
/// are identical for every candidate `(G, K)`.
fn sub_seed(seed: u64, replicate: u64, stream: u64) -> u64 {
    let mut z = seed
        ^ replicate.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ stream.wrapping_mul(0xd1b5_4a32_d192_ed03);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Train/test split for one replicate: every edge goes to train with
/// probability `q`. Degenerate draws (empty train or empty test) are
/// redrawn under an incremented attempt tag.
fn draw_split(n_edges: usize, q: f64, seed: u64, replicate: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    for attempt in 0..10_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(
            seed,
            replicate,
            STREAM_SPLIT.wrapping_add(attempt),
        ));
        let mut train = Vec::new();
        let mut test = Vec::new();
        for j in 0..n_edges {
            if rng.random::<f64>() < q {
                train.push(j);
            } else {
                test.push(j);
            }
        }
        if !train.is_empty() && !test.is_empty() {
            return Ok((train, test));
        }
    }
    Err(Error::Numerical(
        "could not draw a non-degenerate train/test split".into(),
    ))
}

fn check_cfg(cfg: &CvConfig) -> Result<()> {
    if !(cfg.q > 0.0 && cfg.q < 1.0) {
        return Err(Error::InvalidFlag(format!(
            "q must be in (0, 1), got {}",
            cfg.q
        )));
    }
    if cfg.n_cv == 0 {
        return Err(Error::InvalidFlag("n-cv must be at least 1".into()));
    }
    Ok(())
}

/// Cross-validated held-out log-likelihood of the `(G, K)` model.
///
/// Vertices absent from a training split keep no evidence, so their
/// fitted probabilities are set to the lower clamp before scoring the
/// test edges — an unseen vertex is treated as rare rather than as
/// whatever the random initialization left behind. Failed replicates are
/// skipped (and counted); the estimate averages the successes.
pub fn cv_loglik(
    m: &IncidenceMatrix,
    n_clusters: usize,
    n_extra: usize,
    cfg: &CvConfig,
) -> Result<CvEstimate> {
    check_cfg(cfg)?;
    if m.n_edges() < 2 {
        return Err(Error::TooFewEdges(m.n_edges()));
    }
    if n_clusters == 0 || n_extra == 0 {
        return Err(Error::InvalidFlag(
            "cluster counts must be at least 1".into(),
        ));
    }
    let runs: Vec<std::result::Result<f64, String>> = (0..cfg.n_cv)
        .into_par_iter()
        .map(|rep| {
            let replicate = rep as u64 + 1;
            let (train_idx, test_idx) =
                draw_split(m.n_edges(), cfg.q, cfg.seed, replicate).map_err(|e| e.to_string())?;
            let train = m.select_edges(&train_idx);
            let test = m.select_edges(&test_idx);
            let em_seed = sub_seed(cfg.seed, replicate, STREAM_EM);
            let fit = em::fit_restarts(
                &train,
                n_clusters,
                n_extra,
                cfg.tol,
                cfg.max_iter,
                cfg.n_restarts,
                em_seed,
            )
            .map_err(|e| format!("replicate {replicate}: {e}"))?;
            let mut params = fit.params;
            for i in 0..train.n_vertices() {
                if (0..train.n_edges()).all(|j| train.cell(i, j) == 0) {
                    for phi in params.phi[i].iter_mut() {
                        *phi = EPSILON;
                    }
                }
            }
            em::loglik(&test, &params).map_err(|e| format!("replicate {replicate}: {e}"))
        })
        .collect();

    let mut replicates = Vec::with_capacity(cfg.n_cv);
    let mut values = Vec::new();
    let mut n_failed = 0;
    let mut last = String::new();
    for run in runs {
        match run {
            Ok(v) => {
                replicates.push(Some(v));
                values.push(v);
            }
            Err(e) => {
                replicates.push(None);
                n_failed += 1;
                last = e;
            }
        }
    }
    if values.is_empty() {
        return Err(Error::AllReplicatesFailed {
            failed: n_failed,
            last,
        });
    }
    Ok(CvEstimate {
        mean: pairwise_sum(&values) / values.len() as f64,
        replicates,
        n_failed,
    })
}

fn eval_pair(
    m: &IncidenceMatrix,
    cfg: &CvConfig,
    table: &mut BTreeMap<(usize, usize), CvEstimate>,
    trajectory: &mut Vec<(usize, usize)>,
    g: usize,
    k: usize,
) -> Result<f64> {
    if let Some(e) = table.get(&(g, k)) {
        return Ok(e.mean);
    }
    let est = cv_loglik(m, g, k, cfg)?;
    let mean = est.mean;
    table.insert((g, k), est);
    trajectory.push((g, k));
    Ok(mean)
}

/// Greedy search over `(G, K)`.
///
/// Starting from `(1, 1)`: at each accepted `G`, the inner loop evaluates
/// `(G, K+1)` while it strictly improves on `(G, K)`; then `(G+1, 1)` is
/// evaluated and `G` advances while it strictly beats `(G, 1)`, with the
/// `K` search restarting from 1 at the new `G`. The selected pair is the
/// best mean over everything evaluated (ties go to the lexicographically
/// smallest pair), which may lie anywhere on the trajectory.
pub fn greedy_search(m: &IncidenceMatrix, cfg: &CvConfig) -> Result<CvSelection> {
    let mut table = BTreeMap::new();
    let mut trajectory = Vec::new();
    let mut g = 1;
    eval_pair(m, cfg, &mut table, &mut trajectory, 1, 1)?;
    loop {
        // Grow K at this G while strictly improving.
        let mut k = 1;
        let mut current = table[&(g, 1)].mean;
        loop {
            let next = eval_pair(m, cfg, &mut table, &mut trajectory, g, k + 1)?;
            if next > current {
                k += 1;
                current = next;
            } else {
                break;
            }
        }
        // Advance G while the fresh single-K baseline strictly improves.
        let baseline = table[&(g, 1)].mean;
        let next_g = eval_pair(m, cfg, &mut table, &mut trajectory, g + 1, 1)?;
        if next_g > baseline {
            g += 1;
        } else {
            break;
        }
    }
    let (&(g_opt, k_opt), _) = table
        .iter()
        .max_by(|a, b| a.1.mean.partial_cmp(&b.1.mean).unwrap_or(std::cmp::Ordering::Equal))
        .expect("table is non-empty");
    let rows = table
        .iter()
        .map(|(&(g, k), est)| CvRow {
            g,
            k,
            mean: est.mean,
            replicates: est.replicates.clone(),
            n_failed: est.n_failed,
        })
        .collect();
    Ok(CvSelection {
        rows,
        g_opt,
        k_opt,
        trajectory,
    })
}
