//! Hyperedge-size distributions: exact Poisson-Binomial pmfs, their
//! mixtures under either parameterization, closed-form size moments, and
//! Poisson-mixture limits.
//!
//! Within a hyperedge of class `g` the vertex memberships are independent
//! Bernoulli draws, so the hyperedge size follows a Poisson-Binomial
//! distribution with parameters `(p_1g, …, p_Ng)`; marginally the size is a
//! π-mixture (or π⊗τ-mixture) of such distributions. When the comparability
//! condition `p_ig = φ_ig Σ_k a_k τ_k` links the two parameterizations, the
//! mixtures share their mean while the extended model's variance exceeds
//! the plain model's by a closed-form non-negative gap — the extra spread
//! that lets the extended model track over-dispersed size histograms.

use serde::{Deserialize, Serialize};

use crate::hypergraph::SizeHistogram;
use crate::model::{ElcaParams, LcaParams};
use crate::{pairwise_sum, Error, Result};

/// A probability mass function on sizes `{0, 1, …}`.
///
/// Exact pmfs sum to 1 up to rounding; truncated Poisson mixtures sum to
/// `1 − tail`, with `tail` bounded by [`tail_bound`](Self::tail_bound).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    probs: Vec<f64>,
    tail_bound: f64,
}

impl Pmf {
    fn exact(probs: Vec<f64>) -> Self {
        Self {
            probs,
            tail_bound: 0.0,
        }
    }

    /// Probability of each size, starting at size 0.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest size carried by the pmf (the truncation point for truncated
    /// mixtures).
    pub fn max_size(&self) -> usize {
        self.probs.len().saturating_sub(1)
    }

    /// Upper bound on the probability mass beyond
    /// [`max_size`](Self::max_size); zero for exact pmfs.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Whether mass beyond the stored support was cut off.
    pub fn is_truncated(&self) -> bool {
        self.tail_bound > 0.0
    }

    /// Mean size `Σ s·p(s)`.
    pub fn mean(&self) -> f64 {
        let terms: Vec<f64> = self
            .probs
            .iter()
            .enumerate()
            .map(|(s, p)| s as f64 * p)
            .collect();
        pairwise_sum(&terms)
    }

    /// Variance `Σ s²·p(s) − mean²`.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let terms: Vec<f64> = self
            .probs
            .iter()
            .enumerate()
            .map(|(s, p)| (s as f64 - mean).powi(2) * p)
            .collect();
        pairwise_sum(&terms)
    }

    /// Total variation distance `½ Σ_s |p(s) − q(s)|`, aligning supports by
    /// treating missing sizes as zero probability.
    pub fn tv_distance(&self, other: &Pmf) -> f64 {
        let len = self.probs.len().max(other.probs.len());
        let diffs: Vec<f64> = (0..len)
            .map(|s| {
                let p = self.probs.get(s).copied().unwrap_or(0.0);
                let q = other.probs.get(s).copied().unwrap_or(0.0);
                (p - q).abs()
            })
            .collect();
        0.5 * pairwise_sum(&diffs)
    }

    /// Two-column CSV rendering (`size,probability`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,probability\n");
        for (s, p) in self.probs.iter().enumerate() {
            out.push_str(&format!("{s},{p}\n"));
        }
        out
    }

    /// Empirical size pmf of a histogram over support `{0..N}`.
    pub fn from_histogram(h: &SizeHistogram, n_vertices: usize) -> Result<Pmf> {
        if h.total() == 0 {
            return Err(Error::EmptyHypergraph(
                "empty histogram has no empirical pmf".into(),
            ));
        }
        let mut probs = vec![0.0; n_vertices + 1];
        for (&size, &count) in h.counts() {
            if size > n_vertices {
                return Err(Error::Dimensions(format!(
                    "histogram size {size} exceeds vertex count {n_vertices}"
                )));
            }
            probs[size] = count as f64 / h.total() as f64;
        }
        Ok(Pmf::exact(probs))
    }
}

/// Exact pmf of a sum of independent Bernoulli variables with the given
/// success probabilities, by iterative convolution in `O(N²)` time.
pub fn poisson_binomial_pmf(probs: &[f64]) -> Result<Pmf> {
    for (i, &p) in probs.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!(
                "success probability {} = {p} is not in [0, 1]",
                i + 1
            )));
        }
    }
    let mut pmf = vec![0.0; probs.len() + 1];
    pmf[0] = 1.0;
    for (step, &p) in probs.iter().enumerate() {
        // After `step` factors only sizes 0..=step carry mass; walk sizes
        // downward so each value is read before it is overwritten.
        for s in (0..=step + 1).rev() {
            let stay = pmf[s] * (1.0 - p);
            let up = if s > 0 { pmf[s - 1] * p } else { 0.0 };
            pmf[s] = stay + up;
        }
    }
    Ok(Pmf::exact(pmf))
}

/// Size pmf under plain latent class analysis: the π-mixture of the
/// per-class Poisson-Binomial pmfs with parameters `(p_1g, …, p_Ng)`.
pub fn size_pmf_lca(params: &LcaParams) -> Result<Pmf> {
    params.require_valid()?;
    let n = params.n_vertices();
    let mut mix = vec![0.0; n + 1];
    for (g, &w) in params.pi.iter().enumerate() {
        let probs: Vec<f64> = params.p.iter().map(|row| row[g]).collect();
        let comp = poisson_binomial_pmf(&probs)?;
        for (s, &p) in comp.probs().iter().enumerate() {
            mix[s] += w * p;
        }
    }
    Ok(Pmf::exact(mix))
}

/// Size pmf under the extended model: the π⊗τ-mixture of Poisson-Binomial
/// pmfs with per-component parameters `(a_k φ_1g, …, a_k φ_Ng)`.
pub fn size_pmf_elca(params: &ElcaParams) -> Result<Pmf> {
    params.require_valid()?;
    let n = params.n_vertices();
    let mut mix = vec![0.0; n + 1];
    for (g, &wg) in params.pi.iter().enumerate() {
        for (k, &wk) in params.tau.iter().enumerate() {
            let probs: Vec<f64> = params.phi.iter().map(|row| params.a[k] * row[g]).collect();
            let comp = poisson_binomial_pmf(&probs)?;
            for (s, &p) in comp.probs().iter().enumerate() {
                mix[s] += wg * wk * p;
            }
        }
    }
    Ok(Pmf::exact(mix))
}

/// Closed-form mean and variance of the size distribution under both
/// parameterizations, plus the variance gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// Mean size under plain latent class analysis.
    pub mean_lca: f64,
    /// Size variance under plain latent class analysis.
    pub var_lca: f64,
    /// Mean size under the extended model.
    pub mean_elca: f64,
    /// Size variance under the extended model.
    pub var_elca: f64,
    /// `var_elca − var_lca`; non-negative (up to rounding) whenever the
    /// comparability condition holds.
    pub var_gap: f64,
}

/// Tolerance for the comparability condition `p_ig = φ_ig Σ_k a_k τ_k`.
const CONDITION_TOL: f64 = 1e-10;

/// Agreement required between the directly-differenced and factored forms
/// of the variance gap.
const GAP_CROSSCHECK_TOL: f64 = 1e-9;

/// Closed-form size moments for a comparable pair of parameterizations.
///
/// Requires the comparability condition `p_ig = φ_ig Σ_k a_k τ_k` (with
/// matching π) to hold within `1e-10` per cell; the two models then share
/// their mean. The variance gap is computed twice — once as
/// `var_elca − var_lca` and once in the factored form
/// `2 Σ_{i<i'} Σ_g φ_ig φ_i'g (Σ_k a_k²τ_k − (Σ_k a_kτ_k)²) π_g` — and the
/// two routes must agree within `1e-9`.
pub fn moments(lca: &LcaParams, elca: &ElcaParams) -> Result<MomentReport> {
    lca.require_valid()?;
    elca.require_valid()?;
    let n = lca.n_vertices();
    let g_count = lca.n_clusters();
    if n != elca.n_vertices() || g_count != elca.n_clusters() {
        return Err(Error::Dimensions(format!(
            "plain model is {}×{}, extended model is {}×{}",
            n,
            g_count,
            elca.n_vertices(),
            elca.n_clusters()
        )));
    }
    for (g, (&pa, &pb)) in lca.pi.iter().zip(&elca.pi).enumerate() {
        if (pa - pb).abs() > CONDITION_TOL {
            return Err(Error::ConditionViolated(format!(
                "pi[{}] differs between the models: {pa} vs {pb}",
                g + 1
            )));
        }
    }
    // s1 = Σ_k a_k τ_k and s2 = Σ_k a_k² τ_k: first two moments of the
    // scale factor of a randomly labeled hyperedge.
    let s1: f64 = elca.a.iter().zip(&elca.tau).map(|(a, t)| a * t).sum();
    let s2: f64 = elca.a.iter().zip(&elca.tau).map(|(a, t)| a * a * t).sum();
    for i in 0..n {
        for g in 0..g_count {
            let implied = elca.phi[i][g] * s1;
            if (lca.p[i][g] - implied).abs() > CONDITION_TOL {
                return Err(Error::ConditionViolated(format!(
                    "p[{},{}] = {} but φ·Σaτ = {implied}",
                    i + 1,
                    g + 1,
                    lca.p[i][g]
                )));
            }
        }
    }

    // Marginal cell probabilities q_i = Σ_g p_ig π_g (plain) and
    // r_i = Σ_{g,k} a_k φ_ig π_g τ_k = s1 Σ_g φ_ig π_g (extended).
    let q: Vec<f64> = (0..n)
        .map(|i| (0..g_count).map(|g| lca.p[i][g] * lca.pi[g]).sum())
        .collect();
    let r: Vec<f64> = (0..n)
        .map(|i| s1 * (0..g_count).map(|g| elca.phi[i][g] * elca.pi[g]).sum::<f64>())
        .collect();
    let mean_lca = pairwise_sum(&q);
    let mean_elca = pairwise_sum(&r);

    // Pairwise co-membership sums via the square-of-sums identity:
    // 2 Σ_{i<i'} v_i v_i' = (Σ v)² − Σ v².
    let pair_sum = |v: &[f64]| -> f64 {
        let total = pairwise_sum(v);
        let squares: Vec<f64> = v.iter().map(|x| x * x).collect();
        total * total - pairwise_sum(&squares)
    };

    // 2 Σ_{i<i'} E[x_i x_i'] under each model: within a class the two cells
    // are independent, so E[x_i x_i' | g] = p_ig p_i'g (plain) and
    // E[x_i x_i' | g, k] = a_k² φ_ig φ_i'g (extended).
    let mut co_lca = 0.0;
    let mut co_elca = 0.0;
    let mut gap_factored = 0.0;
    for g in 0..g_count {
        let p_col: Vec<f64> = (0..n).map(|i| lca.p[i][g]).collect();
        let phi_col: Vec<f64> = (0..n).map(|i| elca.phi[i][g]).collect();
        let phi_pairs = pair_sum(&phi_col);
        co_lca += lca.pi[g] * pair_sum(&p_col);
        co_elca += elca.pi[g] * s2 * phi_pairs;
        gap_factored += elca.pi[g] * (s2 - s1 * s1) * phi_pairs;
    }

    let bernoulli_var_lca: f64 = pairwise_sum(&q.iter().map(|q| q * (1.0 - q)).collect::<Vec<_>>());
    let bernoulli_var_elca: f64 =
        pairwise_sum(&r.iter().map(|r| r * (1.0 - r)).collect::<Vec<_>>());
    let var_lca = bernoulli_var_lca + co_lca - pair_sum(&q);
    let var_elca = bernoulli_var_elca + co_elca - pair_sum(&r);
    let var_gap = var_elca - var_lca;

    let scale = 1.0_f64.max(var_lca.abs()).max(var_elca.abs());
    if (var_gap - gap_factored).abs() > GAP_CROSSCHECK_TOL * scale {
        return Err(Error::Numerical(format!(
            "variance-gap cross-check failed: differenced {var_gap} vs factored {gap_factored}"
        )));
    }

    Ok(MomentReport {
        mean_lca,
        var_lca,
        mean_elca,
        var_elca,
        var_gap,
    })
}

/// Upper bound on `P(X ≥ t)` for `X ~ Poisson(λ)` and `t > λ`
/// (the standard exponential-moment bound).
fn poisson_tail_bound(lambda: f64, t: f64) -> f64 {
    (-lambda + t * (1.0 + lambda.ln() - t.ln())).exp()
}

/// Smallest truncation point `T` such that the bound on `P(X > T)` for the
/// largest rate drops below `1e-12`.
fn auto_truncation(max_rate: f64) -> usize {
    let mut t = max_rate.ceil() as usize + 1;
    while poisson_tail_bound(max_rate, (t + 1) as f64) >= 1e-12 {
        t += 1;
    }
    t
}

fn check_mixture_weights(name: &str, w: &[f64]) -> Result<()> {
    let mut v = Vec::new();
    crate::model::check_simplex(name, w, &mut v);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParams(v.join("; ")))
    }
}

/// Truncated pmf of `Σ_g π_g Poisson(λ_g)` — the limiting size
/// distribution of the plain model when per-vertex probabilities shrink
/// like `λ_g / N`.
///
/// Pass `trunc` to fix the truncation point, or `None` to choose the
/// smallest point whose tail bound is below `1e-12`.
pub fn poisson_mixture_limit_lca(
    pi: &[f64],
    lambdas: &[f64],
    trunc: Option<usize>,
) -> Result<Pmf> {
    check_mixture_weights("pi", pi)?;
    if lambdas.len() != pi.len() {
        return Err(Error::Dimensions(format!(
            "{} rates for {} weights",
            lambdas.len(),
            pi.len()
        )));
    }
    poisson_mixture(&pi.iter().copied().zip(lambdas.iter().copied()).collect::<Vec<_>>(), trunc)
}

/// Truncated pmf of `Σ_{g,k} π_g τ_k Poisson(λ_gk)` — the limiting size
/// distribution of the extended model, with one component per `(g, k)`
/// pair. `lambdas[g][k]` is the rate of component `(g, k)`.
pub fn poisson_mixture_limit_elca(
    pi: &[f64],
    tau: &[f64],
    lambdas: &[Vec<f64>],
    trunc: Option<usize>,
) -> Result<Pmf> {
    check_mixture_weights("pi", pi)?;
    check_mixture_weights("tau", tau)?;
    if lambdas.len() != pi.len() || lambdas.iter().any(|row| row.len() != tau.len()) {
        return Err(Error::Dimensions(format!(
            "rate matrix must be {}×{}",
            pi.len(),
            tau.len()
        )));
    }
    let mut components = Vec::with_capacity(pi.len() * tau.len());
    for (g, &wg) in pi.iter().enumerate() {
        for (k, &wk) in tau.iter().enumerate() {
            components.push((wg * wk, lambdas[g][k]));
        }
    }
    poisson_mixture(&components, trunc)
}

/// Weighted Poisson mixture over the given `(weight, rate)` components,
/// evaluated termwise up to the truncation point.
fn poisson_mixture(components: &[(f64, f64)], trunc: Option<usize>) -> Result<Pmf> {
    let mut max_rate: f64 = 0.0;
    for &(_, rate) in components {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "Poisson rate {rate} is not positive and finite"
            )));
        }
        max_rate = max_rate.max(rate);
    }
    let t = trunc.unwrap_or_else(|| auto_truncation(max_rate));
    let mut mix = vec![0.0; t + 1];
    for &(w, rate) in components {
        // p(0) = e^{-λ}, then p(s+1) = p(s)·λ/(s+1).
        let mut p = (-rate).exp();
        for (s, slot) in mix.iter_mut().enumerate() {
            *slot += w * p;
            p *= rate / (s + 1) as f64;
        }
    }
    Ok(Pmf {
        probs: mix,
        tail_bound: poisson_tail_bound(max_rate, (t + 1) as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ElcaParams;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_fair_coins() {
        let pmf = poisson_binomial_pmf(&[0.5, 0.5]).unwrap();
        assert_eq!(pmf.probs(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn deterministic_trials_give_point_mass() {
        let pmf = poisson_binomial_pmf(&[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(pmf.probs(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn rejects_out_of_range_probability() {
        assert!(poisson_binomial_pmf(&[0.5, 1.5]).is_err());
    }

    /// Brute-force pmf by enumerating all 2^N outcomes.
    fn enumerate_pmf(probs: &[f64]) -> Vec<f64> {
        let n = probs.len();
        let mut pmf = vec![0.0; n + 1];
        for mask in 0u32..(1 << n) {
            let mut prob = 1.0;
            let mut size = 0;
            for (i, &p) in probs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prob *= p;
                    size += 1;
                } else {
                    prob *= 1.0 - p;
                }
            }
            pmf[size] += prob;
        }
        pmf
    }

    #[test]
    fn convolution_matches_exhaustive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let probs: Vec<f64> = (0..10).map(|_| rng.random::<f64>()).collect();
            let pmf = poisson_binomial_pmf(&probs).unwrap();
            let brute = enumerate_pmf(&probs);
            for (a, b) in pmf.probs().iter().zip(&brute) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pmf_moments_match_bernoulli_sums() {
        let probs = [0.1, 0.7, 0.3, 0.9, 0.5];
        let pmf = poisson_binomial_pmf(&probs).unwrap();
        let mean: f64 = probs.iter().sum();
        let var: f64 = probs.iter().map(|p| p * (1.0 - p)).sum();
        assert_relative_eq!(pmf.mean(), mean, epsilon = 1e-10);
        assert_relative_eq!(pmf.variance(), var, epsilon = 1e-10);
    }

    #[test]
    fn single_class_mixture_is_plain_poisson_binomial() {
        let params = LcaParams {
            pi: vec![1.0],
            p: vec![vec![0.2], vec![0.8], vec![0.5]],
        };
        let mix = size_pmf_lca(&params).unwrap();
        let plain = poisson_binomial_pmf(&[0.2, 0.8, 0.5]).unwrap();
        assert_eq!(mix.probs(), plain.probs());
    }

    #[test]
    fn extended_pmf_reduces_to_plain_when_k_is_one() {
        let params = ElcaParams::random_init(6, 2, 1, 3);
        let elca = size_pmf_elca(&params).unwrap();
        let lca = size_pmf_lca(&params.implied_lca()).unwrap();
        for (a, b) in elca.probs().iter().zip(lca.probs()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn extended_pmf_matches_monte_carlo_histogram() {
        let params = ElcaParams {
            pi: vec![0.6, 0.4],
            tau: vec![0.7, 0.3],
            a: vec![0.35, 1.0],
            phi: vec![
                vec![0.9, 0.1],
                vec![0.8, 0.2],
                vec![0.7, 0.15],
                vec![0.1, 0.85],
                vec![0.2, 0.9],
                vec![0.15, 0.8],
            ],
        };
        let exact = size_pmf_elca(&params).unwrap();
        let sample = params.sample(100_000, 31).unwrap();
        let empirical =
            Pmf::from_histogram(&sample.matrix.size_histogram(), 6).unwrap();
        let tv = exact.tv_distance(&empirical);
        assert!(tv < 0.01, "total variation {tv}");
    }

    #[test]
    fn moments_k1_gap_is_zero() {
        let params = ElcaParams::random_init(5, 3, 1, 8);
        let report = moments(&params.implied_lca(), &params).unwrap();
        assert_relative_eq!(report.var_gap, 0.0, epsilon = 1e-12);
        assert_relative_eq!(report.mean_lca, report.mean_elca, epsilon = 1e-12);
    }

    #[test]
    fn moments_match_exact_pmf_moments() {
        for seed in 0..20 {
            let params = ElcaParams::random_init(7, 2, 3, seed);
            let lca = params.implied_lca();
            let report = moments(&lca, &params).unwrap();
            let pmf_lca = size_pmf_lca(&lca).unwrap();
            let pmf_elca = size_pmf_elca(&params).unwrap();
            assert_relative_eq!(report.mean_lca, pmf_lca.mean(), epsilon = 1e-9);
            assert_relative_eq!(report.var_lca, pmf_lca.variance(), epsilon = 1e-9);
            assert_relative_eq!(report.mean_elca, pmf_elca.mean(), epsilon = 1e-9);
            assert_relative_eq!(report.var_elca, pmf_elca.variance(), epsilon = 1e-9);
            assert!(report.var_gap >= -1e-12);
        }
    }

    #[test]
    fn moments_reject_incomparable_parameters() {
        let elca = ElcaParams::random_init(4, 2, 2, 5);
        let mut lca = elca.implied_lca();
        lca.p[0][0] = (lca.p[0][0] + 0.3).min(1.0);
        assert!(matches!(
            moments(&lca, &elca),
            Err(Error::ConditionViolated(_))
        ));
    }

    #[test]
    fn poisson_at_zero_is_exp_minus_lambda() {
        let pmf = poisson_mixture_limit_lca(&[1.0], &[1.0], None).unwrap();
        assert_relative_eq!(pmf.probs()[0], (-1.0f64).exp(), epsilon = 1e-14);
        assert!(pmf.is_truncated());
        assert!(pmf.tail_bound() < 1e-12);
        let total: f64 = pmf.probs().iter().sum();
        assert!((1.0 - total).abs() < 1e-12);
    }

    #[test]
    fn equal_components_collapse_to_single_poisson() {
        let two = poisson_mixture_limit_lca(&[0.5, 0.5], &[2.5, 2.5], Some(40)).unwrap();
        let one = poisson_mixture_limit_lca(&[1.0], &[2.5], Some(40)).unwrap();
        for (a, b) in two.probs().iter().zip(one.probs()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_nonpositive_rate() {
        assert!(poisson_mixture_limit_lca(&[1.0], &[0.0], None).is_err());
        assert!(poisson_mixture_limit_lca(&[1.0], &[-2.0], None).is_err());
    }

    #[test]
    fn sparse_limit_converges_to_poisson() {
        // With p_i = λ/N for all vertices the size is Binomial(N, λ/N),
        // which approaches Poisson(λ) as N grows.
        let lambda = 3.0;
        let target = poisson_mixture_limit_lca(&[1.0], &[lambda], None).unwrap();
        let mut last = f64::INFINITY;
        for n in [20usize, 80, 320] {
            let params = LcaParams {
                pi: vec![1.0],
                p: vec![vec![lambda / n as f64]; n],
            };
            let tv = size_pmf_lca(&params).unwrap().tv_distance(&target);
            assert!(tv < last, "tv not decreasing at N={n}: {tv} vs {last}");
            last = tv;
        }
        assert!(last < 0.02, "tv at N=320: {last}");
    }

    #[test]
    fn extended_limit_with_grid_of_components() {
        let pi = [0.6, 0.4];
        let tau = [0.5, 0.5];
        let a = [0.5, 1.0];
        let lambda_g = [2.0, 5.0];
        let rates: Vec<Vec<f64>> = lambda_g
            .iter()
            .map(|lg| a.iter().map(|ak| ak * lg).collect())
            .collect();
        let target = poisson_mixture_limit_elca(&pi, &tau, &rates, None).unwrap();
        let mut last = f64::INFINITY;
        for n in [25usize, 100, 400] {
            let params = ElcaParams {
                pi: pi.to_vec(),
                tau: tau.to_vec(),
                a: a.to_vec(),
                phi: vec![lambda_g.iter().map(|lg| lg / n as f64).collect(); n],
            };
            let tv = size_pmf_elca(&params).unwrap().tv_distance(&target);
            assert!(tv < last, "tv not decreasing at N={n}: {tv} vs {last}");
            last = tv;
        }
        assert!(last < 0.02, "tv at N=400: {last}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_mixture_pmf_sums_to_one(seed in 0u64..1000) {
            let params = ElcaParams::random_init(6, 3, 2, seed);
            let pmf = size_pmf_elca(&params).unwrap();
            let total: f64 = pmf.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
            prop_assert!(pmf.probs().iter().all(|&p| p >= 0.0));
        }

        #[test]
        fn prop_comparable_pairs_share_mean_with_nonnegative_gap(seed in 0u64..1000) {
            let params = ElcaParams::random_init(5, 2, 3, seed);
            let report = moments(&params.implied_lca(), &params).unwrap();
            prop_assert!((report.mean_lca - report.mean_elca).abs() < 1e-10);
            prop_assert!(report.var_gap >= -1e-12);
        }
    }
}
