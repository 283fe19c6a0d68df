//! Model parameters: containers, validation, initialization, canonical
//! ordering, the generative sampler, and the bridge between the plain and
//! extended parameterizations.
//!
//! The extended model is θ = (π, τ, φ, a): hyperedge `j` draws a cluster
//! label `g ~ π` and an independent additional-cluster label `k ~ τ`, and
//! then contains vertex `i` with probability `a_k φ_ig`. The scale factors
//! satisfy `a_K = 1` so the parameterization is identifiable; `K = 1`
//! recovers plain latent class analysis with `p = φ`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hypergraph::IncidenceMatrix;
use crate::{Error, Result};

/// Parameters of the extended model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElcaParams {
    /// A-priori cluster weights π (simplex of length `G`).
    pub pi: Vec<f64>,
    /// Additional-cluster weights τ (simplex of length `K`).
    pub tau: Vec<f64>,
    /// Scale factors `a`, each in (0, 1], with `a_K = 1`.
    pub a: Vec<f64>,
    /// `N×G` vertex-probability matrix, row `i` holding `φ_i1..φ_iG`.
    pub phi: Vec<Vec<f64>>,
}

/// Parameters of plain latent class analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcaParams {
    /// Cluster weights π (simplex of length `G`).
    pub pi: Vec<f64>,
    /// `N×G` matrix of membership probabilities `p_ig`.
    pub p: Vec<Vec<f64>>,
}

/// A simulated hypergraph together with the latent labels that generated it.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    /// The sampled incidence matrix.
    pub matrix: IncidenceMatrix,
    /// Per-hyperedge cluster labels, 1-based in `1..=G`.
    pub z1: Vec<usize>,
    /// Per-hyperedge additional-cluster labels, 1-based in `1..=K`.
    pub z2: Vec<usize>,
}

/// How far a simplex may drift from summing to one before validation
/// complains.
const SIMPLEX_TOL: f64 = 1e-12;

pub(crate) fn check_simplex(name: &str, w: &[f64], out: &mut Vec<String>) {
    if w.is_empty() {
        out.push(format!("{name} is empty"));
        return;
    }
    for (i, &v) in w.iter().enumerate() {
        if v.is_nan() || v < 0.0 {
            out.push(format!("{name}[{}] = {v} is not ≥ 0", i + 1));
        }
    }
    let sum: f64 = w.iter().sum();
    let deviation = (sum - 1.0).abs();
    if deviation.is_nan() || deviation > SIMPLEX_TOL {
        out.push(format!("{name} sums to {sum}, not 1"));
    }
}

impl ElcaParams {
    /// Number of vertices `N`.
    pub fn n_vertices(&self) -> usize {
        self.phi.len()
    }

    /// Number of clusters `G`.
    pub fn n_clusters(&self) -> usize {
        self.pi.len()
    }

    /// Number of additional clusters `K`.
    pub fn n_extra(&self) -> usize {
        self.tau.len()
    }

    /// Checks every model constraint and returns the list of violations
    /// (empty when the parameters are valid): π and τ are simplexes, `a`
    /// has `a_K = 1` and entries in (0, 1], and every `φ_ig` lies in [0, 1].
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        check_simplex("pi", &self.pi, &mut v);
        check_simplex("tau", &self.tau, &mut v);
        if self.a.len() != self.tau.len() {
            v.push(format!(
                "a has length {}, tau has length {}",
                self.a.len(),
                self.tau.len()
            ));
        }
        for (k, &ak) in self.a.iter().enumerate() {
            if !(ak > 0.0 && ak <= 1.0) {
                v.push(format!("a[{}] = {ak} is not in (0, 1]", k + 1));
            }
        }
        match self.a.last() {
            Some(&last) => {
                if last != 1.0 {
                    v.push(format!("a_K = {last} ≠ 1"));
                }
            }
            None => v.push("a is empty".into()),
        }
        if self.phi.is_empty() {
            v.push("phi has no rows".into());
        }
        let g = self.pi.len();
        for (i, row) in self.phi.iter().enumerate() {
            if row.len() != g {
                v.push(format!(
                    "phi row {} has {} entries, expected {g}",
                    i + 1,
                    row.len()
                ));
                continue;
            }
            for (c, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    v.push(format!("phi[{},{}] = {p} is not in [0, 1]", i + 1, c + 1));
                }
            }
        }
        v
    }

    /// `validate` folded into a `Result` for call sites that just need a
    /// pass/fail gate.
    pub fn require_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(violations.join("; ")))
        }
    }

    /// Draws random parameters for the given dimensions, deterministically
    /// per seed: π and τ from a flat Dirichlet, `φ_ig` uniform on
    /// [0.05, 0.95], and `a_k` uniform on [0.1, 0.9] for `k < K` with
    /// `a_K = 1`. The windows keep every Bernoulli probability away from
    /// {0, 1} so the first E-step of a fit is finite.
    pub fn random_init(n: usize, g: usize, k: usize, seed: u64) -> ElcaParams {
        assert!(n >= 1 && g >= 1 && k >= 1, "dimensions must be at least 1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pi = dirichlet_flat(g, &mut rng);
        let tau = dirichlet_flat(k, &mut rng);
        let phi = (0..n)
            .map(|_| (0..g).map(|_| rng.random_range(0.05..=0.95)).collect())
            .collect();
        let mut a: Vec<f64> = (0..k - 1).map(|_| rng.random_range(0.1..=0.9)).collect();
        a.push(1.0);
        ElcaParams { pi, tau, a, phi }
    }

    /// The permutations that canonical ordering would apply, as
    /// `(cluster_order, extra_order)`: new position `r` takes old index
    /// `order[r]`. Clusters are ordered by non-increasing π with ties broken
    /// by the φ column lexicographically; additional clusters by
    /// non-decreasing `a` with the `a_K = 1` entry kept last among equals
    /// (stable sort).
    pub fn canonical_orders(&self) -> (Vec<usize>, Vec<usize>) {
        let g = self.n_clusters();
        let mut g_order: Vec<usize> = (0..g).collect();
        g_order.sort_by(|&x, &y| {
            self.pi[y]
                .partial_cmp(&self.pi[x])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| {
                    for row in &self.phi {
                        match row[x].partial_cmp(&row[y]) {
                            Some(std::cmp::Ordering::Equal) | None => continue,
                            Some(ord) => return ord,
                        }
                    }
                    std::cmp::Ordering::Equal
                })
        });
        let mut k_order: Vec<usize> = (0..self.n_extra()).collect();
        k_order.sort_by(|&x, &y| {
            self.a[x]
                .partial_cmp(&self.a[y])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        (g_order, k_order)
    }

    /// Applies explicit cluster / additional-cluster permutations: new
    /// position `r` takes old index `g_order[r]` (resp. `k_order[r]`).
    pub fn permuted(&self, g_order: &[usize], k_order: &[usize]) -> ElcaParams {
        ElcaParams {
            pi: g_order.iter().map(|&g| self.pi[g]).collect(),
            tau: k_order.iter().map(|&k| self.tau[k]).collect(),
            a: k_order.iter().map(|&k| self.a[k]).collect(),
            phi: self
                .phi
                .iter()
                .map(|row| g_order.iter().map(|&g| row[g]).collect())
                .collect(),
        }
    }

    /// Reorders labels into the canonical form described by
    /// [`canonical_orders`](Self::canonical_orders). Relabeling components
    /// never changes the observed-data likelihood, and the operation is
    /// idempotent.
    pub fn canonicalize(&self) -> ElcaParams {
        let (g_order, k_order) = self.canonical_orders();
        self.permuted(&g_order, &k_order)
    }

    /// The plain-LCA parameters this model induces marginally over the
    /// additional clusters: `p_ig = φ_ig · Σ_k a_k τ_k`, π unchanged.
    pub fn implied_lca(&self) -> LcaParams {
        let scale: f64 = self.a.iter().zip(&self.tau).map(|(a, t)| a * t).sum();
        LcaParams {
            pi: self.pi.clone(),
            p: self
                .phi
                .iter()
                .map(|row| row.iter().map(|phi| phi * scale).collect())
                .collect(),
        }
    }

    /// Draws `m` hyperedges from the generative model, deterministically
    /// per seed: for each hyperedge independently, `g ~ π`, `k ~ τ`, then
    /// `x_ij ~ Bernoulli(a_k φ_ig)` independently per vertex. Labels in the
    /// returned sample are 1-based.
    pub fn sample(&self, m: usize, seed: u64) -> Result<LabeledSample> {
        self.require_valid()?;
        if m == 0 {
            return Err(Error::Dimensions("sample needs at least one hyperedge".into()));
        }
        let n = self.n_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z1 = Vec::with_capacity(m);
        let mut z2 = Vec::with_capacity(m);
        let mut rows = vec![vec![0u8; m]; n];
        for j in 0..m {
            let g = draw_categorical(&self.pi, &mut rng);
            let k = draw_categorical(&self.tau, &mut rng);
            z1.push(g + 1);
            z2.push(k + 1);
            let ak = self.a[k];
            for (i, row) in rows.iter_mut().enumerate() {
                let p = ak * self.phi[i][g];
                if rng.random::<f64>() < p {
                    row[j] = 1;
                }
            }
        }
        let matrix = IncidenceMatrix::from_rows(rows)?;
        Ok(LabeledSample { matrix, z1, z2 })
    }
}

impl LcaParams {
    /// Number of vertices `N`.
    pub fn n_vertices(&self) -> usize {
        self.p.len()
    }

    /// Number of clusters `G`.
    pub fn n_clusters(&self) -> usize {
        self.pi.len()
    }

    /// Checks the simplex and probability-bound constraints, returning the
    /// list of violations (empty when valid).
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        check_simplex("pi", &self.pi, &mut v);
        if self.p.is_empty() {
            v.push("p has no rows".into());
        }
        let g = self.pi.len();
        for (i, row) in self.p.iter().enumerate() {
            if row.len() != g {
                v.push(format!(
                    "p row {} has {} entries, expected {g}",
                    i + 1,
                    row.len()
                ));
                continue;
            }
            for (c, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    v.push(format!("p[{},{}] = {p} is not in [0, 1]", i + 1, c + 1));
                }
            }
        }
        v
    }

    /// `validate` folded into a `Result`.
    pub fn require_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(violations.join("; ")))
        }
    }

    /// Views plain-LCA parameters as the `K = 1` special case of the
    /// extended model (`a = (1)`, `φ = p`).
    pub fn into_elca(self) -> ElcaParams {
        ElcaParams {
            pi: self.pi,
            tau: vec![1.0],
            a: vec![1.0],
            phi: self.p,
        }
    }
}

/// On-disk form of [`ElcaParams`]: the parameter arrays plus the vertex
/// labels they refer to. Serialized as JSON; floating-point values use the
/// shortest decimal form that parses back to the identical bits, so a
/// write/read cycle is exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDocument {
    /// Vertex labels matching the rows of `phi`.
    pub vertex_labels: Vec<String>,
    /// Cluster weights π.
    pub pi: Vec<f64>,
    /// Additional-cluster weights τ.
    pub tau: Vec<f64>,
    /// Scale factors `a`.
    pub a: Vec<f64>,
    /// Vertex-probability matrix φ, one row per vertex label.
    pub phi: Vec<Vec<f64>>,
}

impl ParamsDocument {
    /// Bundles parameters with the vertex labels they describe.
    pub fn new(params: &ElcaParams, vertex_labels: &[String]) -> Result<Self> {
        if vertex_labels.len() != params.n_vertices() {
            return Err(Error::Dimensions(format!(
                "{} vertex labels for {} phi rows",
                vertex_labels.len(),
                params.n_vertices()
            )));
        }
        Ok(Self {
            vertex_labels: vertex_labels.to_vec(),
            pi: params.pi.clone(),
            tau: params.tau.clone(),
            a: params.a.clone(),
            phi: params.phi.clone(),
        })
    }

    /// The parameters stored in the document, validated.
    pub fn params(&self) -> Result<ElcaParams> {
        let params = ElcaParams {
            pi: self.pi.clone(),
            tau: self.tau.clone(),
            a: self.a.clone(),
            phi: self.phi.clone(),
        };
        params.require_valid()?;
        if self.vertex_labels.len() != params.n_vertices() {
            return Err(Error::Dimensions(format!(
                "{} vertex labels for {} phi rows",
                self.vertex_labels.len(),
                params.n_vertices()
            )));
        }
        Ok(params)
    }

    /// Serializes to pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a document previously produced by [`to_json`](Self::to_json).
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A flat-Dirichlet draw: normalized unit-exponential variates.
fn dirichlet_flat(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let draws: Vec<f64> = (0..len)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / sum).collect()
}

/// Samples an index from a categorical distribution by inverse CDF.
fn draw_categorical(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (idx, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return idx;
        }
    }
    weights.len() - 1
}
