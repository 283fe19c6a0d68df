//! Minorize–maximize machinery for the conditional M-steps.
//!
//! Each M-step maximizes the expected complete-data log-likelihood in one
//! coordinate while holding the others fixed. The `φ` and `a` coordinates
//! have no closed-form maximizer, so each conditional objective is replaced
//! by a touching quadratic-bounded minorizer: terms `log(1 − c·θ)` are
//! bounded below by a second-order expansion around the current iterate
//! whose curvature constant `−c²/(1−c)²` under-estimates the true second
//! derivative everywhere on (0, 1). Maximizing the minorizer — a cubic root
//! for `φ`, a quadratic root for `a` — can then never decrease the original
//! objective (the transfer guarantee).
//!
//! The structs here expose the objective, the minorizer, and the update in
//! separable form so both the fitting loop and the verification tests drive
//! exactly the same arithmetic.

use crate::EPSILON;

/// The conditional objective for a single `φ_ig`, everything else fixed.
///
/// Up to an additive constant, the expected complete-data log-likelihood as
/// a function of `φ = φ_ig` alone is
///
/// ```text
///   f(φ) = a1·log φ + Σ_k w_k·log(1 − a_k·φ)
/// ```
///
/// where `a1` is the responsibility-weighted count of 1-cells at `(i, g)`,
/// `w_k` the responsibility-weighted count of 0-cells attributed to
/// additional cluster `k`, and `a_K = 1` (so the last term is
/// `w_K·log(1 − φ)`).
#[derive(Debug, Clone)]
pub struct PhiUpdate {
    /// Weight on `log φ` (responsibility mass of 1-cells).
    pub a1: f64,
    /// Per-`k` weights on `log(1 − a_k φ)` (responsibility mass of
    /// 0-cells), length `K`.
    pub w: Vec<f64>,
    /// Scale factors, length `K`, last entry 1.
    pub a: Vec<f64>,
    /// Current iterate `φ^(t)`, strictly inside (0, 1).
    pub phi_t: f64,
}

impl PhiUpdate {
    /// The exact conditional objective `f(φ)`.
    pub fn exact(&self, phi: f64) -> f64 {
        let mut f = xlog(self.a1, phi);
        for (wk, ak) in self.w.iter().zip(&self.a) {
            f += xlog(*wk, 1.0 - ak * phi);
        }
        f
    }

    /// The touching minorizer of `f` at `φ^(t)`.
    ///
    /// The `k = K` term (`a_K = 1`) is kept exactly; each `k < K` term is
    /// bounded below by its second-order expansion with curvature constant
    /// `−a_k²/(1−a_k)²`, which is valid because `1 − a_k φ ≥ 1 − a_k` on
    /// `φ ∈ (0, 1)`.
    pub fn minorizer(&self) -> PhiMinorizer {
        let kk = self.w.len();
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        let mut offset = 0.0;
        for k in 0..kk.saturating_sub(1) {
            let (wk, ak) = (self.w[k], self.a[k]);
            offset += xlog(wk, 1.0 - ak * self.phi_t);
            b1 -= wk * ak / (1.0 - ak * self.phi_t);
            b2 -= 0.5 * wk * ak * ak / ((1.0 - ak) * (1.0 - ak));
        }
        PhiMinorizer {
            a1: self.a1,
            a2: if kk > 0 { self.w[kk - 1] } else { 0.0 },
            b1,
            b2,
            phi_t: self.phi_t,
            offset,
        }
    }

    /// One MM update: the maximizer of the minorizer over
    /// `[EPSILON, 1−EPSILON]`.
    pub fn step(&self) -> f64 {
        self.minorizer().maximize()
    }

    /// Iterates the MM update to its fixed point, which is the stationary
    /// point of the exact conditional objective (minorizer and objective
    /// share their gradient at the touch point).
    ///
    /// The iteration contracts at a rate governed by how much the
    /// curvature bound over-estimates the true curvature, so the cap is
    /// generous; typical cases converge in well under a hundred steps.
    pub fn solve_to_convergence(&self) -> f64 {
        let mut current = self.clone();
        for _ in 0..50_000 {
            let next = current.step();
            if (next - current.phi_t).abs() < 1e-12 {
                return next;
            }
            current.phi_t = next;
        }
        current.phi_t
    }
}

/// The quadratic-bounded minorizer of a [`PhiUpdate`] objective:
///
/// ```text
///   q(φ) = a1·log φ + a2·log(1−φ) + b1·(φ−φt) + b2·(φ−φt)² + offset
/// ```
///
/// with `b1, b2 ≤ 0`. `q` touches the exact objective at `φt`, lies below
/// it everywhere on (0, 1), and is strictly concave whenever any weight is
/// positive.
#[derive(Debug, Clone)]
pub struct PhiMinorizer {
    /// Weight on `log φ`.
    pub a1: f64,
    /// Weight on `log(1−φ)` (the exactly-kept `a_K = 1` term).
    pub a2: f64,
    /// Linear coefficient (≤ 0): `−Σ_{k<K} w_k a_k / (1 − a_k φt)`.
    pub b1: f64,
    /// Quadratic coefficient (≤ 0): `−½ Σ_{k<K} w_k a_k² / (1 − a_k)²`.
    pub b2: f64,
    /// Expansion point `φ^(t)`.
    pub phi_t: f64,
    /// Constant making the bound touch the objective at `φt`.
    pub offset: f64,
}

/// Relative threshold under which a quadratic/cubic coefficient is treated
/// as structurally zero.
const COEF_TINY: f64 = 1e-13;

impl PhiMinorizer {
    /// Minorizer value at `φ`.
    pub fn q(&self, phi: f64) -> f64 {
        let d = phi - self.phi_t;
        xlog(self.a1, phi) + xlog(self.a2, 1.0 - phi) + self.b1 * d + self.b2 * d * d + self.offset
    }

    /// Minorizer derivative at `φ`.
    pub fn dq(&self, phi: f64) -> f64 {
        self.a1 / phi - self.a2 / (1.0 - phi) + self.b1 + 2.0 * self.b2 * (phi - self.phi_t)
    }

    /// Monic cubic whose roots are the stationary points of `q`, as
    /// coefficients `[c2, c1, c0]` of `φ³ + c2φ² + c1φ + c0`; `None` when
    /// `b2` is (relatively) zero and the stationarity condition is at most
    /// quadratic.
    ///
    /// Multiplying `dq = 0` by `φ(1−φ)` and writing `c = b1 − 2·b2·φt`
    /// gives `φ³ − ((2b2−c)/2b2)·φ² − ((c−a1−a2)/2b2)·φ − a1/2b2 = 0`.
    pub fn cubic(&self) -> Option<[f64; 3]> {
        let scale = self.a1.abs() + self.a2.abs() + self.b1.abs() + 1.0;
        if self.b2.abs() <= COEF_TINY * scale {
            return None;
        }
        let c = self.b1 - 2.0 * self.b2 * self.phi_t;
        Some([
            -(2.0 * self.b2 - c) / (2.0 * self.b2),
            -(c - self.a1 - self.a2) / (2.0 * self.b2),
            -self.a1 / (2.0 * self.b2),
        ])
    }

    /// Maximizer of `q` over `[EPSILON, 1−EPSILON]`.
    ///
    /// Stationary points come from the closed-form cubic (or its quadratic
    /// and weighted-Bernoulli degenerations); the returned value is the
    /// best of the clamped feasible roots, the interval endpoints, and the
    /// current iterate, so the update can never decrease `q` below
    /// `q(φt)`. If no closed-form root lands in (0, 1) even though the
    /// derivative changes sign — lost-precision territory — a bisection on
    /// the strictly decreasing derivative recovers the stationary point.
    pub fn maximize(&self) -> f64 {
        let lo = EPSILON;
        let hi = 1.0 - EPSILON;
        let mut candidates = vec![lo, hi, self.phi_t];
        let roots = match self.cubic() {
            Some([c2, c1, c0]) => solve_cubic(c2, c1, c0),
            None => {
                let scale = self.a1.abs() + self.a2.abs() + 1.0;
                if self.b1.abs() > COEF_TINY * scale {
                    // b2 = 0: stationarity is b1φ² − (b1−a1−a2)φ − a1 = 0.
                    solve_quadratic(self.b1, -(self.b1 - self.a1 - self.a2), -self.a1)
                } else if self.a1 + self.a2 > 0.0 {
                    // Pure weighted-Bernoulli objective.
                    vec![self.a1 / (self.a1 + self.a2)]
                } else {
                    // No mass at all: the objective is flat.
                    vec![]
                }
            }
        };
        let mut any_interior = false;
        for r in roots {
            if r.is_finite() && r > 0.0 && r < 1.0 {
                any_interior = true;
                candidates.push(r.clamp(lo, hi));
            }
        }
        if !any_interior && self.dq(lo) > 0.0 && self.dq(hi) < 0.0 {
            candidates.push(bisect_decreasing(|x| self.dq(x), lo, hi));
        }
        *candidates
            .iter()
            .max_by(|x, y| {
                self.q(**x)
                    .partial_cmp(&self.q(**y))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap()
    }
}

/// The conditional objective for a single scale factor `a_k` (`k < K`),
/// everything else fixed:
///
/// ```text
///   f(a) = a_coef·log a + Σ_m v_m·log(1 − a·φ_m)
/// ```
///
/// where the index `m` runs over `(i, g)` pairs, `a_coef` is the
/// responsibility-weighted count of 1-cells attributed to `k`, and `v_m`
/// the matching 0-cell mass at that `(i, g)`.
#[derive(Debug, Clone)]
pub struct AUpdate {
    /// Weight on `log a` (responsibility mass of 1-cells).
    pub a_coef: f64,
    /// Weights on `log(1 − a φ_m)`, one per `(i, g)` pair.
    pub v: Vec<f64>,
    /// Vertex probabilities `φ_m`, matching `v`, strictly inside (0, 1).
    pub phis: Vec<f64>,
    /// Current iterate `a^(t)`.
    pub a_t: f64,
}

impl AUpdate {
    /// The exact conditional objective `f(a)`.
    pub fn exact(&self, a: f64) -> f64 {
        let mut f = xlog(self.a_coef, a);
        for (vm, pm) in self.v.iter().zip(&self.phis) {
            f += xlog(*vm, 1.0 - a * pm);
        }
        f
    }

    /// The touching minorizer of `f` at `a^(t)`: each log term is bounded
    /// below by its second-order expansion with curvature constant
    /// `−φ_m²/(1−φ_m)²`, valid because `1 − a φ_m ≥ 1 − φ_m` on `a ∈ (0, 1)`.
    pub fn minorizer(&self) -> AMinorizer {
        let mut lin = 0.0;
        let mut quad = 0.0;
        let mut offset = 0.0;
        for (vm, pm) in self.v.iter().zip(&self.phis) {
            offset += xlog(*vm, 1.0 - self.a_t * pm);
            lin -= vm * pm / (1.0 - self.a_t * pm);
            quad -= 0.5 * vm * pm * pm / ((1.0 - pm) * (1.0 - pm));
        }
        AMinorizer {
            a_coef: self.a_coef,
            lin,
            quad,
            a_t: self.a_t,
            offset,
        }
    }

    /// One MM update: the closed-form maximizer of the minorizer over
    /// `[EPSILON, 1−EPSILON]`.
    pub fn step(&self) -> f64 {
        self.minorizer().maximize()
    }

    /// Iterates the MM update to its fixed point — the maximizer of the
    /// exact conditional objective (clamped to the feasible interval).
    ///
    /// The contraction slows as any `φ_m` approaches 1 (the curvature
    /// bound `1/(1−φ_m)²` grows), hence the generous cap.
    pub fn solve_to_convergence(&self) -> f64 {
        let mut current = self.clone();
        for _ in 0..50_000 {
            let next = current.step();
            if (next - current.a_t).abs() < 1e-12 {
                return next;
            }
            current.a_t = next;
        }
        current.a_t
    }
}

/// The quadratic-bounded minorizer of an [`AUpdate`] objective:
///
/// ```text
///   q(a) = a_coef·log a + lin·(a−at) + quad·(a−at)² + offset
/// ```
///
/// with `lin, quad ≤ 0`.
#[derive(Debug, Clone)]
pub struct AMinorizer {
    /// Weight on `log a`.
    pub a_coef: f64,
    /// Linear coefficient (≤ 0): `−Σ_m v_m φ_m / (1 − a_t φ_m)`.
    pub lin: f64,
    /// Quadratic coefficient (≤ 0): `−½ Σ_m v_m φ_m² / (1 − φ_m)²`.
    pub quad: f64,
    /// Expansion point `a^(t)`.
    pub a_t: f64,
    /// Constant making the bound touch the objective at `a_t`.
    pub offset: f64,
}

impl AMinorizer {
    /// Minorizer value at `a`.
    pub fn q(&self, a: f64) -> f64 {
        let d = a - self.a_t;
        xlog(self.a_coef, a) + self.lin * d + self.quad * d * d + self.offset
    }

    /// Minorizer derivative at `a`.
    pub fn dq(&self, a: f64) -> f64 {
        self.a_coef / a + self.lin + 2.0 * self.quad * (a - self.a_t)
    }

    /// Maximizer of `q` over `[EPSILON, 1−EPSILON]`.
    ///
    /// Setting `dq = 0` and multiplying by `a` gives the quadratic
    /// `a² + D·a − E = 0` with `D = lin/(2·quad) − a_t` and
    /// `E = −a_coef/(2·quad)`, whose positive root is
    /// `√(E + D²/4) − D/2`. When the quadratic coefficient is
    /// (relatively) zero the objective degrades to `a_coef·log a + lin·a`,
    /// maximized at the upper clamp if `lin ≥ 0` and at `−a_coef/lin`
    /// otherwise.
    pub fn maximize(&self) -> f64 {
        let lo = EPSILON;
        let hi = 1.0 - EPSILON;
        let mut candidates = vec![lo, hi, self.a_t];
        let scale = self.a_coef.abs() + self.lin.abs() + 1.0;
        if self.quad.abs() > COEF_TINY * scale {
            let d = self.lin / (2.0 * self.quad) - self.a_t;
            let e = -self.a_coef / (2.0 * self.quad);
            let disc = e + d * d / 4.0;
            if disc >= 0.0 {
                candidates.push((disc.sqrt() - d / 2.0).clamp(lo, hi));
            }
        } else if self.lin < 0.0 {
            candidates.push((-self.a_coef / self.lin).clamp(lo, hi));
        } else {
            // lin ≥ 0 and quad ≈ 0: q is non-decreasing, take the upper clamp
            // (already among the candidates).
        }
        *candidates
            .iter()
            .max_by(|x, y| {
                self.q(**x)
                    .partial_cmp(&self.q(**y))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap()
    }
}

/// `w·log(x)` with the convention `0·log(anything) = 0`, so zero-weight
/// terms never poison a sum with `NaN` or `−∞`.
#[inline]
fn xlog(w: f64, x: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * x.ln()
    }
}

/// Real roots of the monic cubic `x³ + c2·x² + c1·x + c0`, polished by a
/// few Newton steps.
///
/// Uses the trigonometric form when the depressed cubic has three real
/// roots and the numerically stable single-cbrt form otherwise.
pub fn solve_cubic(c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    // Depress: x = t − c2/3 turns the cubic into t³ + p·t + q.
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let shift = -c2 / 3.0;
    let disc = -4.0 * p * p * p - 27.0 * q * q;

    let mut roots = Vec::with_capacity(3);
    if disc > 0.0 {
        // Three distinct real roots; p < 0 is implied.
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        for k in 0..3 {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            roots.push(t + shift);
        }
    } else if p == 0.0 && q == 0.0 {
        roots.push(shift);
    } else {
        // One real root (possibly with a double root at disc == 0): take the
        // cbrt branch that avoids cancellation, then recover the second
        // factor through p/(3u).
        let half_disc = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let w = if q >= 0.0 {
            -q / 2.0 - half_disc
        } else {
            -q / 2.0 + half_disc
        };
        let t = if w == 0.0 {
            0.0
        } else {
            let u = w.cbrt();
            u - p / (3.0 * u)
        };
        roots.push(t + shift);
        if disc == 0.0 && p != 0.0 {
            // Double root at -t/2 in depressed coordinates.
            roots.push(-t / 2.0 + shift);
        }
    }

    // Newton polish against the original monic cubic.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + c2) * *r + c1) * *r + c0;
            let df = (3.0 * *r + 2.0 * c2) * *r + c1;
            if df.abs() < 1e-300 {
                break;
            }
            let step = f / df;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    roots
}

/// Real roots of `a·x² + b·x + c = 0` (with `a ≠ 0`), via the
/// cancellation-free formulation.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    let qq = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![];
    if qq != 0.0 {
        roots.push(qq / a);
        roots.push(c / qq);
    } else {
        // qq = 0 forces b = 0 and disc = 0, so 0 is a double root.
        roots.push(0.0);
    }
    roots
}

/// Root of a strictly decreasing function on `[lo, hi]` by bisection;
/// requires `f(lo) ≥ 0 ≥ f(hi)`.
pub fn bisect_decreasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (lo, hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cubic_recovers_known_roots() {
        // (x−1)(x−2)(x−3) = x³ − 6x² + 11x − 6
        let mut roots = solve_cubic(-6.0, 11.0, -6.0);
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(roots.len(), 3);
        for (r, expect) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert_relative_eq!(*r, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn cubic_single_real_root() {
        // x³ + x + 1 has one real root near −0.6823.
        let roots = solve_cubic(0.0, 1.0, 1.0);
        assert_eq!(roots.len(), 1);
        let r = roots[0];
        assert!((r * r * r + r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_avoids_cancellation() {
        // x² − 1e8·x + 1 has roots ~1e8 and ~1e-8.
        let mut roots = solve_quadratic(1.0, -1e8, 1.0);
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(roots[0], 1e-8, max_relative = 1e-10);
        assert_relative_eq!(roots[1], 1e8, max_relative = 1e-10);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let x = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0);
        assert_relative_eq!(x, 0.3, epsilon = 1e-9);
    }

    fn random_phi_update(rng: &mut ChaCha8Rng) -> PhiUpdate {
        let kk = rng.random_range(1..=3usize);
        let mut a: Vec<f64> = (0..kk - 1).map(|_| rng.random_range(0.1..0.9)).collect();
        a.push(1.0);
        let w: Vec<f64> = (0..kk).map(|_| rng.random_range(0.0..40.0)).collect();
        PhiUpdate {
            a1: if rng.random::<f64>() < 0.1 {
                0.0
            } else {
                rng.random_range(0.0..40.0)
            },
            w,
            a,
            phi_t: rng.random_range(0.02..0.98),
        }
    }

    #[test]
    fn phi_minorizer_touches_and_lies_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let upd = random_phi_update(&mut rng);
            let min = upd.minorizer();
            assert_relative_eq!(min.q(upd.phi_t), upd.exact(upd.phi_t), epsilon = 1e-9);
            for t in 1..=20 {
                let phi = t as f64 / 21.0;
                assert!(
                    min.q(phi) <= upd.exact(phi) + 1e-9,
                    "minorizer above objective at {phi}: {} vs {}",
                    min.q(phi),
                    upd.exact(phi)
                );
            }
        }
    }

    #[test]
    fn phi_step_never_decreases_minorizer_or_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let upd = random_phi_update(&mut rng);
            let min = upd.minorizer();
            let new = upd.step();
            assert!(min.q(new) >= min.q(upd.phi_t) - 1e-9);
            // Transfer guarantee: objective gain ≥ minorizer gain ≥ 0.
            assert!(upd.exact(new) >= upd.exact(upd.phi_t) - 1e-9);
        }
    }

    #[test]
    fn phi_cubic_root_residual_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        for _ in 0..400 {
            let upd = random_phi_update(&mut rng);
            let min = upd.minorizer();
            if let Some([c2, c1, c0]) = min.cubic() {
                let new = upd.step();
                // Only interior solutions are cubic roots; clamps are not.
                if new > EPSILON && new < 1.0 - EPSILON {
                    let res = ((new + c2) * new + c1) * new + c0;
                    assert!(res.abs() < 1e-9, "cubic residual {res} at {new}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 100, "too few interior cubic cases: {checked}");
    }

    #[test]
    fn phi_k1_step_is_weighted_bernoulli_mle() {
        let upd = PhiUpdate {
            a1: 30.0,
            w: vec![70.0],
            a: vec![1.0],
            phi_t: 0.5,
        };
        assert_relative_eq!(upd.step(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn phi_all_ones_pushes_to_upper_clamp() {
        let upd = PhiUpdate {
            a1: 25.0,
            w: vec![0.0, 0.0],
            a: vec![0.5, 1.0],
            phi_t: 0.4,
        };
        assert_relative_eq!(upd.step(), 1.0 - EPSILON, epsilon = 1e-15);
    }

    #[test]
    fn phi_fixed_point_matches_golden_section_on_exact_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let upd = random_phi_update(&mut rng);
            if upd.a1 == 0.0 && upd.w.iter().all(|w| *w == 0.0) {
                continue;
            }
            let fixed = upd.solve_to_convergence();
            let golden = golden_section_max(|x| upd.exact(x), EPSILON, 1.0 - EPSILON);
            assert!(
                (fixed - golden).abs() < 2e-3,
                "fixed point {fixed} vs golden section {golden}"
            );
        }
    }

    fn random_a_update(rng: &mut ChaCha8Rng) -> AUpdate {
        let m = rng.random_range(1..=8usize);
        AUpdate {
            a_coef: if rng.random::<f64>() < 0.1 {
                0.0
            } else {
                rng.random_range(0.0..40.0)
            },
            v: (0..m).map(|_| rng.random_range(0.0..20.0)).collect(),
            phis: (0..m).map(|_| rng.random_range(0.02..0.98)).collect(),
            a_t: rng.random_range(0.05..0.95),
        }
    }

    #[test]
    fn a_minorizer_touches_and_lies_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..200 {
            let upd = random_a_update(&mut rng);
            let min = upd.minorizer();
            assert_relative_eq!(min.q(upd.a_t), upd.exact(upd.a_t), epsilon = 1e-9);
            for t in 1..=20 {
                let a = t as f64 / 21.0;
                assert!(min.q(a) <= upd.exact(a) + 1e-9);
            }
        }
    }

    #[test]
    fn a_step_never_decreases_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let upd = random_a_update(&mut rng);
            let new = upd.step();
            assert!(upd.exact(new) >= upd.exact(upd.a_t) - 1e-9);
            let min = upd.minorizer();
            assert!(min.q(new) >= min.q(upd.a_t) - 1e-9);
        }
    }

    #[test]
    fn a_fixed_point_matches_golden_section() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let upd = random_a_update(&mut rng);
            let fixed = upd.solve_to_convergence();
            let golden = golden_section_max(|x| upd.exact(x), EPSILON, 1.0 - EPSILON);
            assert!(
                (fixed - golden).abs() < 2e-3,
                "fixed point {fixed} vs golden {golden} (a_coef={}, v={:?})",
                upd.a_coef,
                upd.v
            );
        }
    }

    #[test]
    fn a_no_onecell_mass_converges_to_lower_clamp() {
        let upd = AUpdate {
            a_coef: 0.0,
            v: vec![5.0, 3.0],
            phis: vec![0.4, 0.7],
            a_t: 0.6,
        };
        assert_relative_eq!(upd.solve_to_convergence(), EPSILON, epsilon = 1e-12);
    }

    #[test]
    fn a_symmetric_statistics_give_equal_updates() {
        let a = AUpdate {
            a_coef: 12.0,
            v: vec![4.0, 6.0],
            phis: vec![0.3, 0.6],
            a_t: 0.5,
        };
        let b = a.clone();
        assert_eq!(a.step(), b.step());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn prop_cubic_roots_satisfy_polynomial(c2 in -5.0..5.0f64, c1 in -5.0..5.0f64, c0 in -5.0..5.0f64) {
            for r in solve_cubic(c2, c1, c0) {
                let res = ((r + c2) * r + c1) * r + c0;
                let scale = 1.0 + r.abs().powi(3) + (c2 * r * r).abs() + (c1 * r).abs() + c0.abs();
                prop_assert!(res.abs() <= 1e-10 * scale, "residual {res} at root {r}");
            }
        }

        #[test]
        fn prop_cubic_finds_all_roots_of_factored_form(r1 in -3.0..3.0f64, r2 in -3.0..3.0f64, r3 in -3.0..3.0f64) {
            // (x−r1)(x−r2)(x−r3), requiring reasonable separation.
            prop_assume!((r1 - r2).abs() > 1e-3 && (r1 - r3).abs() > 1e-3 && (r2 - r3).abs() > 1e-3);
            let c2 = -(r1 + r2 + r3);
            let c1 = r1 * r2 + r1 * r3 + r2 * r3;
            let c0 = -r1 * r2 * r3;
            let roots = solve_cubic(c2, c1, c0);
            prop_assert_eq!(roots.len(), 3);
            for target in [r1, r2, r3] {
                prop_assert!(
                    roots.iter().any(|r| (r - target).abs() < 1e-6),
                    "missing root {} in {:?}", target, roots
                );
            }
        }
    }
}
