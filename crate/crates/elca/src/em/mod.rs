//! EM fitting for the extended latent class model.
//!
//! One outer iteration is: a single E-step producing responsibilities
//! `ζ_jgk`, then four conditional maximizations against those same
//! responsibilities in the fixed order `φ → a → π → τ`. The `φ` and `a`
//! coordinates take one minorize–maximize step each (see [`mm`]); mixing
//! weights have closed forms. Every conditional update is an ascent step
//! on the expected complete-data log-likelihood, so the observed-data
//! log-likelihood trace is non-decreasing.
//!
//! All likelihood arithmetic runs in log space with max-shift
//! normalization, and hyperedge sums exploit sparsity: a per-(g,k) base
//! value assuming an empty edge, corrected by one precomputed adjustment
//! per member vertex, making each (g,k) column linear in the number of
//! incidences rather than in `N·M`.
//!
//! Reductions use fixed-order (pairwise or sequential) summation, so
//! results are bitwise reproducible and independent of thread count; the
//! only parallelism is across restarts in [`fit_restarts`].

pub mod mm;

use crate::hypergraph::IncidenceMatrix;
use crate::model::ElcaParams;
use crate::{log_sum_exp, pairwise_sum, Error, Result, EPSILON};
use serde::{Deserialize, Serialize};

/// Posterior label-pair probabilities `ζ_jgk` for every hyperedge, the
/// output of the E-step.
///
/// Stored flat in row-major `(j, g, k)` order; each edge's `G×K` block
/// sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Responsibilities {
    n_edges: usize,
    n_clusters: usize,
    n_extra: usize,
    zeta: Vec<f64>,
}

impl Responsibilities {
    pub(crate) fn from_flat(
        n_edges: usize,
        n_clusters: usize,
        n_extra: usize,
        zeta: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(zeta.len(), n_edges * n_clusters * n_extra);
        Self {
            n_edges,
            n_clusters,
            n_extra,
            zeta,
        }
    }

    /// Number of hyperedges `M`.
    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Number of primary clusters `G`.
    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    /// Number of additional clusters `K`.
    pub fn n_extra(&self) -> usize {
        self.n_extra
    }

    /// `ζ_jgk`: posterior probability that edge `j` carries label pair
    /// `(g, k)` (0-based indices).
    #[inline]
    pub fn zeta(&self, j: usize, g: usize, k: usize) -> f64 {
        self.zeta[(j * self.n_clusters + g) * self.n_extra + k]
    }

    /// Marginal posterior over primary clusters for edge `j`: `Σ_k ζ_jgk`.
    pub fn cluster_marginals(&self, j: usize) -> Vec<f64> {
        (0..self.n_clusters)
            .map(|g| (0..self.n_extra).map(|k| self.zeta(j, g, k)).sum())
            .collect()
    }

    /// Marginal posterior over additional clusters for edge `j`:
    /// `Σ_g ζ_jgk`.
    pub fn extra_marginals(&self, j: usize) -> Vec<f64> {
        (0..self.n_extra)
            .map(|k| (0..self.n_clusters).map(|g| self.zeta(j, g, k)).sum())
            .collect()
    }

    /// Hard label assignments `(z1, z2)`, 1-based, by per-edge argmax of
    /// the marginal posteriors (first maximum wins ties).
    pub fn hard_labels(&self) -> (Vec<usize>, Vec<usize>) {
        let argmax = |v: &[f64]| {
            v.iter()
                .enumerate()
                .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, &x)| {
                    if x > bv {
                        (i, x)
                    } else {
                        (bi, bv)
                    }
                })
                .0
                + 1
        };
        let z1 = (0..self.n_edges)
            .map(|j| argmax(&self.cluster_marginals(j)))
            .collect();
        let z2 = (0..self.n_edges)
            .map(|j| argmax(&self.extra_marginals(j)))
            .collect();
        (z1, z2)
    }

    /// Responsibilities with cluster axes reordered: entry `(j, r, s)` of
    /// the result is `ζ_{j, g_order[r], k_order[s]}` of `self`.
    pub fn permuted(&self, g_order: &[usize], k_order: &[usize]) -> Self {
        assert_eq!(g_order.len(), self.n_clusters);
        assert_eq!(k_order.len(), self.n_extra);
        let mut zeta = Vec::with_capacity(self.zeta.len());
        for j in 0..self.n_edges {
            for &g in g_order {
                for &k in k_order {
                    zeta.push(self.zeta(j, g, k));
                }
            }
        }
        Self {
            zeta,
            ..self.clone()
        }
    }

    /// Nested `M × G × K` copy, convenient for serialization.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.n_edges)
            .map(|j| {
                (0..self.n_clusters)
                    .map(|g| (0..self.n_extra).map(|k| self.zeta(j, g, k)).collect())
                    .collect()
            })
            .collect()
    }
}

/// Everything a single EM run produces.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Fitted parameters, canonicalized (see
    /// [`ElcaParams::canonicalize`]).
    pub params: ElcaParams,
    /// Responsibilities under the final parameters, axes permuted
    /// consistently with `params`.
    pub resp: Responsibilities,
    /// Observed-data log-likelihood before any update and after each
    /// iteration; non-decreasing up to numerical slack.
    pub loglik_trace: Vec<f64>,
    /// Number of EM iterations performed.
    pub n_iter: usize,
    /// Whether the last improvement fell below the tolerance (as opposed
    /// to hitting the iteration cap).
    pub converged: bool,
    /// Seed of the random initialization (0 for explicit-start fits).
    pub seed: u64,
}

impl FitResult {
    /// Log-likelihood at the fitted parameters.
    pub fn final_loglik(&self) -> f64 {
        *self.loglik_trace.last().unwrap()
    }
}

/// Serializable snapshot of a [`FitResult`]: the parameter document plus
/// the fit trace, hard labels, and (optionally) full responsibilities.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FitDocument {
    /// Vertex display names, row order matching `phi`.
    pub vertex_labels: Vec<String>,
    /// Cluster weights.
    pub pi: Vec<f64>,
    /// Additional-cluster weights.
    pub tau: Vec<f64>,
    /// Scale factors (last entry 1).
    pub a: Vec<f64>,
    /// Vertex-cluster probabilities, `N × G`.
    pub phi: Vec<Vec<f64>>,
    /// Observed-data log-likelihood per iteration.
    pub loglik_trace: Vec<f64>,
    /// Iterations performed.
    pub n_iter: usize,
    /// Convergence flag.
    pub converged: bool,
    /// Initialization seed.
    pub seed: u64,
    /// Hard primary-cluster labels, 1-based.
    pub z1: Vec<usize>,
    /// Hard additional-cluster labels, 1-based.
    pub z2: Vec<usize>,
    /// Full `M × G × K` responsibilities, included on request.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub responsibilities: Option<Vec<Vec<Vec<f64>>>>,
}

impl FitDocument {
    /// Builds the document from a fit, borrowing the vertex labels of the
    /// matrix that produced it.
    pub fn new(fit: &FitResult, vertex_labels: &[String], include_resp: bool) -> Self {
        let (z1, z2) = fit.resp.hard_labels();
        Self {
            vertex_labels: vertex_labels.to_vec(),
            pi: fit.params.pi.clone(),
            tau: fit.params.tau.clone(),
            a: fit.params.a.clone(),
            phi: fit.params.phi.clone(),
            loglik_trace: fit.loglik_trace.clone(),
            n_iter: fit.n_iter,
            converged: fit.converged,
            seed: fit.seed,
            z1,
            z2,
            responsibilities: include_resp.then(|| fit.resp.to_nested()),
        }
    }

    /// Pretty-printed JSON with a trailing newline; floats keep their
    /// exact values (shortest round-trip form).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fit document serializes");
        s.push('\n');
        s
    }

    /// Parses a document produced by [`FitDocument::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_dims(m: &IncidenceMatrix, p: &ElcaParams) -> Result<()> {
    if p.n_vertices() != m.n_vertices() {
        return Err(Error::Dimensions(format!(
            "parameter set covers {} vertices but the matrix has {}",
            p.n_vertices(),
            m.n_vertices()
        )));
    }
    Ok(())
}

/// Per-edge member lists, computed once so that likelihood passes touch
/// only incidences.
fn edge_member_lists(m: &IncidenceMatrix) -> Vec<Vec<usize>> {
    (0..m.n_edges()).map(|j| m.edge_members(j)).collect()
}

/// Log-weight table `log(π_g τ_k Π_i Bern(x_ij; a_k φ_ig))`, flattened in
/// `(j, g, k)` order.
///
/// The fast path computes, per `(g, k)`, the log-probability of an empty
/// edge plus one log-odds adjustment per member vertex. When some cell
/// probability reaches 1 exactly the adjustment is `+∞ − ∞`, so such
/// columns fall back to a dense per-vertex scan whose conditional terms
/// stay well-defined (`−∞` at contradicted cells, never `NaN`).
fn log_weight_table(m: &IncidenceMatrix, p: &ElcaParams, members: &[Vec<usize>]) -> Vec<f64> {
    let (n, big_m) = (m.n_vertices(), m.n_edges());
    let (g_n, k_n) = (p.n_clusters(), p.n_extra());
    let gk = g_n * k_n;
    let mut table = vec![0.0; big_m * gk];
    let mut base_terms = vec![0.0; n];
    let mut adj = vec![0.0; n];
    for g in 0..g_n {
        for k in 0..k_n {
            let lw_mix = p.pi[g].ln() + p.tau[k].ln();
            let mut dense = false;
            for i in 0..n {
                let q = p.a[k] * p.phi[i][g];
                if q >= 1.0 {
                    dense = true;
                    break;
                }
                base_terms[i] = (1.0 - q).ln();
                adj[i] = q.ln() - base_terms[i];
            }
            if !dense {
                let base = lw_mix + pairwise_sum(&base_terms);
                for (j, mem) in members.iter().enumerate() {
                    let mut lw = base;
                    for &i in mem {
                        lw += adj[i];
                    }
                    table[j * gk + g * k_n + k] = lw;
                }
            } else {
                let log_cell: Vec<(f64, f64)> = (0..n)
                    .map(|i| {
                        let q = p.a[k] * p.phi[i][g];
                        (q.ln(), (1.0 - q).ln())
                    })
                    .collect();
                for j in 0..big_m {
                    let mut lw = lw_mix;
                    for (i, &(l1, l0)) in log_cell.iter().enumerate() {
                        lw += if m.cell(i, j) == 1 { l1 } else { l0 };
                    }
                    table[j * gk + g * k_n + k] = lw;
                }
            }
        }
    }
    table
}

fn loglik_from_table(table: &[f64], n_edges: usize) -> f64 {
    let gk = table.len() / n_edges.max(1);
    let per_edge: Vec<f64> = (0..n_edges)
        .map(|j| log_sum_exp(&table[j * gk..(j + 1) * gk]))
        .collect();
    pairwise_sum(&per_edge)
}

fn resp_from_table(
    table: &[f64],
    n_edges: usize,
    n_clusters: usize,
    n_extra: usize,
) -> Result<Responsibilities> {
    let gk = n_clusters * n_extra;
    let mut zeta = vec![0.0; table.len()];
    for j in 0..n_edges {
        let row = &table[j * gk..(j + 1) * gk];
        let lse = log_sum_exp(row);
        if lse == f64::NEG_INFINITY {
            return Err(Error::DegenerateEdge(j));
        }
        for (t, &lw) in zeta[j * gk..(j + 1) * gk].iter_mut().zip(row) {
            *t = (lw - lse).exp();
        }
    }
    Ok(Responsibilities::from_flat(
        n_edges, n_clusters, n_extra, zeta,
    ))
}

/// Observed-data log-likelihood of the matrix under the parameters.
///
/// Computed in log space with max-shift normalization; returns `−∞` (not
/// an error) when some hyperedge has zero likelihood under every label
/// pair, which can only happen with boundary probabilities contradicting
/// the data.
pub fn loglik(m: &IncidenceMatrix, p: &ElcaParams) -> Result<f64> {
    p.require_valid()?;
    check_dims(m, p)?;
    let members = edge_member_lists(m);
    let table = log_weight_table(m, p, &members);
    Ok(loglik_from_table(&table, m.n_edges()))
}

/// Complete-data log-likelihood: the observed-data terms with the latent
/// label pair of each edge fixed to `(z1_j, z2_j)` (1-based labels).
pub fn complete_loglik(m: &IncidenceMatrix, p: &ElcaParams, z1: &[usize], z2: &[usize]) -> Result<f64> {
    p.require_valid()?;
    check_dims(m, p)?;
    if z1.len() != m.n_edges() || z2.len() != m.n_edges() {
        return Err(Error::InvalidLabels(format!(
            "expected {} labels per axis, got {} and {}",
            m.n_edges(),
            z1.len(),
            z2.len()
        )));
    }
    let mut per_edge = Vec::with_capacity(m.n_edges());
    for j in 0..m.n_edges() {
        let (g1, k1) = (z1[j], z2[j]);
        if g1 < 1 || g1 > p.n_clusters() {
            return Err(Error::InvalidLabels(format!(
                "z1[{j}] = {g1} is outside 1..={}",
                p.n_clusters()
            )));
        }
        if k1 < 1 || k1 > p.n_extra() {
            return Err(Error::InvalidLabels(format!(
                "z2[{j}] = {k1} is outside 1..={}",
                p.n_extra()
            )));
        }
        let (g, k) = (g1 - 1, k1 - 1);
        let mut lw = p.pi[g].ln() + p.tau[k].ln();
        for i in 0..m.n_vertices() {
            if m.cell(i, j) == 1 {
                lw += p.a[k].ln() + p.phi[i][g].ln();
            } else {
                lw += (1.0 - p.a[k] * p.phi[i][g]).ln();
            }
        }
        per_edge.push(lw);
    }
    Ok(pairwise_sum(&per_edge))
}

/// E-step: posterior responsibilities
/// `ζ_jgk ∝ π_g τ_k Π_i Bern(x_ij; a_k φ_ig)`, normalized per edge.
///
/// Fails with a degenerate-edge error naming the first edge whose total
/// unnormalized mass is zero (impossible once parameters are clamped away
/// from the boundary, as the fitting loop guarantees).
pub fn e_step(m: &IncidenceMatrix, p: &ElcaParams) -> Result<Responsibilities> {
    p.require_valid()?;
    check_dims(m, p)?;
    let members = edge_member_lists(m);
    let table = log_weight_table(m, p, &members);
    resp_from_table(&table, m.n_edges(), p.n_clusters(), p.n_extra())
}

/// Responsibility-weighted incidence counts shared by the M-steps.
///
/// `colsum[g][k] = Σ_j ζ_jgk` and `s1[i][g][k] = Σ_{j ∋ i} ζ_jgk`; the
/// 0-cell mass at `(i, g, k)` is then `colsum − s1`, so both M-step
/// coefficient sets assemble in time linear in the incidence count.
struct SuffStats {
    n_clusters: usize,
    n_extra: usize,
    colsum: Vec<f64>,
    s1: Vec<f64>,
}

impl SuffStats {
    #[inline]
    fn colsum(&self, g: usize, k: usize) -> f64 {
        self.colsum[g * self.n_extra + k]
    }

    #[inline]
    fn s1(&self, i: usize, g: usize, k: usize) -> f64 {
        self.s1[(i * self.n_clusters + g) * self.n_extra + k]
    }

    /// 0-cell responsibility mass at `(i, g, k)`, clamped against the
    /// tiny negatives floating-point cancellation can produce.
    #[inline]
    fn zero_mass(&self, i: usize, g: usize, k: usize) -> f64 {
        (self.colsum(g, k) - self.s1(i, g, k)).max(0.0)
    }
}

fn suff_stats(n_vertices: usize, resp: &Responsibilities, members: &[Vec<usize>]) -> SuffStats {
    let (g_n, k_n) = (resp.n_clusters, resp.n_extra);
    let gk = g_n * k_n;
    let mut colsum = vec![0.0; gk];
    let mut s1 = vec![0.0; n_vertices * gk];
    for (j, mem) in members.iter().enumerate() {
        let row = &resp.zeta[j * gk..(j + 1) * gk];
        for (c, &z) in colsum.iter_mut().zip(row) {
            *c += z;
        }
        for &i in mem {
            for (t, &z) in s1[i * gk..(i + 1) * gk].iter_mut().zip(row) {
                *t += z;
            }
        }
    }
    SuffStats {
        n_clusters: g_n,
        n_extra: k_n,
        colsum,
        s1,
    }
}

fn check_resp_dims(m: &IncidenceMatrix, p: &ElcaParams, resp: &Responsibilities) -> Result<()> {
    check_dims(m, p)?;
    if resp.n_edges != m.n_edges()
        || resp.n_clusters != p.n_clusters()
        || resp.n_extra != p.n_extra()
    {
        return Err(Error::Dimensions(format!(
            "responsibilities are {}×{}×{} but expected {}×{}×{}",
            resp.n_edges,
            resp.n_clusters,
            resp.n_extra,
            m.n_edges(),
            p.n_clusters(),
            p.n_extra()
        )));
    }
    Ok(())
}

fn check_interior_for_m_step(p: &ElcaParams) -> Result<()> {
    for k in 0..p.n_extra() - 1 {
        if p.a[k] >= 1.0 {
            return Err(Error::Numerical(format!(
                "M-step needs a_{} < 1 for the curvature bound; clamp the parameters first",
                k + 1
            )));
        }
    }
    for (i, row) in p.phi.iter().enumerate() {
        for (g, &phi) in row.iter().enumerate() {
            if !(phi > 0.0 && phi < 1.0) {
                return Err(Error::Numerical(format!(
                    "M-step needs phi[{},{}] strictly inside (0,1), got {phi}; clamp the parameters first",
                    i + 1,
                    g + 1
                )));
            }
        }
    }
    Ok(())
}

fn phi_updates(p: &ElcaParams, stats: &SuffStats) -> Vec<Vec<f64>> {
    let (g_n, k_n) = (p.n_clusters(), p.n_extra());
    let mut phi = vec![vec![0.0; g_n]; p.n_vertices()];
    for (i, row) in phi.iter_mut().enumerate() {
        for (g, slot) in row.iter_mut().enumerate() {
            let a1: f64 = (0..k_n).map(|k| stats.s1(i, g, k)).sum();
            let w: Vec<f64> = (0..k_n).map(|k| stats.zero_mass(i, g, k)).collect();
            if a1 == 0.0 && w.iter().all(|&x| x == 0.0) {
                // No responsibility mass touches (i, g): keep the iterate.
                *slot = p.phi[i][g];
                continue;
            }
            let upd = mm::PhiUpdate {
                a1,
                w,
                a: p.a.clone(),
                phi_t: p.phi[i][g],
            };
            *slot = upd.step();
        }
    }
    phi
}

fn a_updates(p: &ElcaParams, stats: &SuffStats) -> Vec<f64> {
    let (n, g_n, k_n) = (p.n_vertices(), p.n_clusters(), p.n_extra());
    let mut a = p.a.clone();
    for (k, slot) in a.iter_mut().enumerate().take(k_n - 1) {
        let a_coef: f64 = (0..n)
            .map(|i| (0..g_n).map(|g| stats.s1(i, g, k)).sum::<f64>())
            .sum();
        let mut v = Vec::with_capacity(n * g_n);
        let mut phis = Vec::with_capacity(n * g_n);
        for i in 0..n {
            for g in 0..g_n {
                v.push(stats.zero_mass(i, g, k));
                phis.push(p.phi[i][g]);
            }
        }
        if a_coef == 0.0 && v.iter().all(|&x| x == 0.0) {
            continue; // dead additional cluster: keep the iterate
        }
        let upd = mm::AUpdate {
            a_coef,
            v,
            phis,
            a_t: p.a[k],
        };
        *slot = upd.step();
    }
    a
}

/// One MM update for every `φ_ig`, holding `a`, `π`, `τ`, and the
/// responsibilities fixed.
///
/// Requires interior parameters (`φ ∈ (0,1)` and `a_k < 1` for `k < K`),
/// which the fitting loop guarantees by clamping.
pub fn m_step_phi(
    m: &IncidenceMatrix,
    p: &ElcaParams,
    resp: &Responsibilities,
) -> Result<Vec<Vec<f64>>> {
    check_resp_dims(m, p, resp)?;
    check_interior_for_m_step(p)?;
    let members = edge_member_lists(m);
    let stats = suff_stats(m.n_vertices(), resp, &members);
    Ok(phi_updates(p, &stats))
}

/// One MM update for every scale factor `a_k`, `k < K`, conditioning on
/// the `φ` stored in `p`; `a_K` stays 1.
pub fn m_step_a(m: &IncidenceMatrix, p: &ElcaParams, resp: &Responsibilities) -> Result<Vec<f64>> {
    check_resp_dims(m, p, resp)?;
    check_interior_for_m_step(p)?;
    let members = edge_member_lists(m);
    let stats = suff_stats(m.n_vertices(), resp, &members);
    Ok(a_updates(p, &stats))
}

/// Closed-form mixing-weight updates: `π_g ∝ Σ_{j,k} ζ_jgk` and
/// `τ_k ∝ Σ_{j,g} ζ_jgk`, both renormalized.
pub fn m_step_mixing(resp: &Responsibilities) -> (Vec<f64>, Vec<f64>) {
    let mut pi = vec![0.0; resp.n_clusters];
    let mut tau = vec![0.0; resp.n_extra];
    for j in 0..resp.n_edges {
        for (g, p) in pi.iter_mut().enumerate() {
            for k in 0..resp.n_extra {
                *p += resp.zeta(j, g, k);
            }
        }
        for (k, t) in tau.iter_mut().enumerate() {
            for g in 0..resp.n_clusters {
                *t += resp.zeta(j, g, k);
            }
        }
    }
    let norm = |v: &mut Vec<f64>| {
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            for x in v.iter_mut() {
                *x /= s;
            }
        }
    };
    norm(&mut pi);
    norm(&mut tau);
    (pi, tau)
}

fn clamp_interior(p: &mut ElcaParams) {
    for row in p.phi.iter_mut() {
        for phi in row.iter_mut() {
            *phi = phi.clamp(EPSILON, 1.0 - EPSILON);
        }
    }
    let k_n = p.a.len();
    for a in p.a.iter_mut().take(k_n - 1) {
        *a = a.clamp(EPSILON, 1.0 - EPSILON);
    }
}

/// Runs EM from an explicit starting point.
///
/// `φ` and the free entries of `a` are first clamped to
/// `[EPSILON, 1−EPSILON]`, which keeps every cell probability interior
/// and the whole run free of degenerate edges. Stops when the absolute
/// change in observed-data log-likelihood falls below `tol`, or after
/// `max_iter` iterations. The trace records the log-likelihood of the
/// (clamped) start and of each iterate, so its length is `n_iter + 1`.
/// Returned parameters are canonicalized, with responsibilities permuted
/// to match; the seed field is 0 (no randomness is involved).
pub fn fit_from(
    m: &IncidenceMatrix,
    init: &ElcaParams,
    tol: f64,
    max_iter: usize,
) -> Result<FitResult> {
    init.require_valid()?;
    check_dims(m, init)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidFlag(format!("tol must be > 0, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidFlag("max-iter must be at least 1".into()));
    }
    let (g_n, k_n) = (init.n_clusters(), init.n_extra());
    let mut p = init.clone();
    clamp_interior(&mut p);
    let members = edge_member_lists(m);
    let mut table = log_weight_table(m, &p, &members);
    let mut trace = vec![loglik_from_table(&table, m.n_edges())];
    let mut converged = false;
    let mut n_iter = 0;
    while n_iter < max_iter {
        let resp = resp_from_table(&table, m.n_edges(), g_n, k_n)
            .map_err(|e| Error::Numerical(format!("EM iteration {}: {e}", n_iter + 1)))?;
        let stats = suff_stats(m.n_vertices(), &resp, &members);
        p.phi = phi_updates(&p, &stats);
        p.a = a_updates(&p, &stats);
        let (pi, tau) = mixing_from_stats(&stats);
        p.pi = pi;
        p.tau = tau;
        n_iter += 1;
        table = log_weight_table(m, &p, &members);
        let ll = loglik_from_table(&table, m.n_edges());
        trace.push(ll);
        if (ll - trace[trace.len() - 2]).abs() < tol {
            converged = true;
            break;
        }
    }
    let resp = resp_from_table(&table, m.n_edges(), g_n, k_n)
        .map_err(|e| Error::Numerical(format!("final responsibilities: {e}")))?;
    let (g_order, k_order) = p.canonical_orders();
    Ok(FitResult {
        params: p.permuted(&g_order, &k_order),
        resp: resp.permuted(&g_order, &k_order),
        loglik_trace: trace,
        n_iter,
        converged,
        seed: 0,
    })
}

fn mixing_from_stats(stats: &SuffStats) -> (Vec<f64>, Vec<f64>) {
    let mut pi = vec![0.0; stats.n_clusters];
    let mut tau = vec![0.0; stats.n_extra];
    for (g, p) in pi.iter_mut().enumerate() {
        for (k, t) in tau.iter_mut().enumerate() {
            let c = stats.colsum(g, k);
            *p += c;
            *t += c;
        }
    }
    let pi_sum: f64 = pi.iter().sum();
    let tau_sum: f64 = tau.iter().sum();
    for x in pi.iter_mut() {
        *x /= pi_sum;
    }
    for x in tau.iter_mut() {
        *x /= tau_sum;
    }
    (pi, tau)
}

/// Fits the model from a random initialization drawn with `seed`.
pub fn fit(
    m: &IncidenceMatrix,
    n_clusters: usize,
    n_extra: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<FitResult> {
    if n_clusters == 0 || n_extra == 0 {
        return Err(Error::InvalidFlag(
            "cluster counts must be at least 1".into(),
        ));
    }
    let init = ElcaParams::random_init(m.n_vertices(), n_clusters, n_extra, seed);
    let mut fr = fit_from(m, &init, tol, max_iter)?;
    fr.seed = seed;
    Ok(fr)
}

/// Runs [`fit`] once per seed in `seed..seed+n_restarts` (in parallel)
/// and returns the run with the highest final log-likelihood; exact ties
/// go to the lowest seed.
///
/// Per-restart results are bitwise independent of the number of threads:
/// each run is internally sequential and the winner is chosen by a
/// sequential scan in seed order.
pub fn fit_restarts(
    m: &IncidenceMatrix,
    n_clusters: usize,
    n_extra: usize,
    tol: f64,
    max_iter: usize,
    n_restarts: usize,
    seed: u64,
) -> Result<FitResult> {
    use rayon::prelude::*;
    if n_restarts == 0 {
        return Err(Error::InvalidFlag("restarts must be at least 1".into()));
    }
    let runs: Vec<(u64, Result<FitResult>)> = (0..n_restarts)
        .into_par_iter()
        .map(|r| {
            let s = seed.wrapping_add(r as u64);
            (s, fit(m, n_clusters, n_extra, tol, max_iter, s))
        })
        .collect();
    let mut best: Option<FitResult> = None;
    let mut failed = 0usize;
    let mut last = String::new();
    for (s, run) in runs {
        match run {
            Ok(fr) if fr.final_loglik().is_nan() => {
                failed += 1;
                last = format!("seed {s}: final log-likelihood is NaN");
            }
            Ok(fr) => {
                let better = match &best {
                    None => true,
                    Some(b) => fr.final_loglik() > b.final_loglik(),
                };
                if better {
                    best = Some(fr);
                }
            }
            Err(e) => {
                failed += 1;
                last = format!("seed {s}: {e}");
            }
        }
    }
    best.ok_or(Error::AllRestartsFailed {
        tried: failed,
        last,
    })
}
