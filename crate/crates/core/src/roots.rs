//! The gamma1 constraint that puts the two-level family in the
//! one-real/one-complex eigenvalue class.
//!
//! With `y = gamma1 + gamma2`, the class condition is
//!
//! ```text
//! y^2 + gamma1 * gamma2 * (y^2 + delta_omega^2) = 0
//! ```
//!
//! which expands to a real cubic in `gamma1`:
//!
//! ```text
//! gamma2 * g^3 + (1 + 2 gamma2^2) * g^2
//!   + gamma2 * (2 + gamma2^2 + delta_omega^2) * g + gamma2^2 = 0
//! ```
//!
//! `delta_omega` enters only squared, so the root set is invariant under its
//! sign. The cubic degenerates at `gamma2 = 0` (forcing `y = 0`), and the
//! family itself is rejected at `delta_omega = 0`; both are errors here.

use crate::error::{Error, Result};

/// Roots with `|sigma_gamma|` at or below this are useless for the split
/// (the complex eigenvalue collapses onto the real axis) and are flagged
/// invalid.
pub const SIGMA_GAMMA_MIN: f64 = 1e-9;

/// Back-substitution residual bound, relative to `max(1, delta_omega^2)`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

/// One real solution of the class cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRoot {
    /// The solved on-site gamma of site 1.
    pub gamma1: f64,
    /// `gamma1 + gamma2`; sign selects decay (< 0) vs amplification (> 0).
    pub sigma_gamma: f64,
    /// `|y^2 + gamma1*gamma2*(y^2 + delta_omega^2)|` at the root.
    pub residual: f64,
    /// Residual within tolerance and `|sigma_gamma| > 1e-9`.
    pub valid: bool,
}

/// All real roots of the class cubic at one `(delta_omega, gamma2)` point,
/// sorted ascending by `gamma1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRootSet {
    pub delta_omega: f64,
    pub gamma2: f64,
    pub roots: Vec<GammaRoot>,
}

impl GammaRootSet {
    pub fn valid_roots(&self) -> impl Iterator<Item = &GammaRoot> {
        self.roots.iter().filter(|r| r.valid)
    }

    /// Valid root with the most negative `sigma_gamma`, if any decays.
    pub fn decay_root(&self) -> Option<GammaRoot> {
        self.valid_roots()
            .filter(|r| r.sigma_gamma < 0.0)
            .min_by(|a, b| a.sigma_gamma.total_cmp(&b.sigma_gamma))
            .copied()
    }

    /// Valid root with the most positive `sigma_gamma`, if any amplifies.
    pub fn amplify_root(&self) -> Option<GammaRoot> {
        self.valid_roots()
            .filter(|r| r.sigma_gamma > 0.0)
            .max_by(|a, b| a.sigma_gamma.total_cmp(&b.sigma_gamma))
            .copied()
    }

    /// Valid root with the largest `gamma1`.
    pub fn largest_root(&self) -> Option<GammaRoot> {
        self.valid_roots().last().copied()
    }
}

/// Class-constraint residual `y^2 + gamma1*gamma2*(y^2 + delta_omega^2)`.
pub fn constraint_residual(delta_omega: f64, gamma2: f64, gamma1: f64) -> f64 {
    let y = gamma1 + gamma2;
    y * y + gamma1 * gamma2 * (y * y + delta_omega * delta_omega)
}

/// Solve the class cubic for `gamma1`.
///
/// Returns every real root (up to three), each Newton-polished and tagged
/// with its residual and validity. A real cubic always has at least one real
/// root, so the set is never empty.
pub fn gamma1_roots(delta_omega: f64, gamma2: f64) -> Result<GammaRootSet> {
    if !delta_omega.is_finite() || !gamma2.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "root solve needs finite inputs, got delta_omega={delta_omega}, gamma2={gamma2}"
        )));
    }
    if delta_omega == 0.0 {
        return Err(Error::UnsupportedRegime(
            "delta_omega must be nonzero: the one-real/one-complex split has no admissible \
             Hamiltonian at delta_omega = 0"
                .into(),
        ));
    }
    if gamma2 == 0.0 {
        return Err(Error::UnsupportedRegime(
            "gamma2 must be nonzero: at gamma2 = 0 the class cubic degenerates to gamma1^2 = 0 \
             and the split collapses"
                .into(),
        ));
    }

    // delta_omega only enters squared.
    let dw2 = delta_omega * delta_omega;
    let a3 = gamma2;
    let a2 = 1.0 + 2.0 * gamma2 * gamma2;
    let a1 = gamma2 * (2.0 + gamma2 * gamma2 + dw2);
    let a0 = gamma2 * gamma2;

    let mut roots: Vec<f64> = solve_cubic_monic(a2 / a3, a1 / a3, a0 / a3);
    for r in roots.iter_mut() {
        *r = polish_root(a3, a2, a1, a0, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0));

    let scale = dw2.max(1.0);
    let records = roots
        .into_iter()
        .map(|gamma1| {
            let sigma_gamma = gamma1 + gamma2;
            let residual = constraint_residual(delta_omega, gamma2, gamma1).abs();
            let valid =
                residual <= ROOT_RESIDUAL_TOL * scale && sigma_gamma.abs() > SIGMA_GAMMA_MIN;
            GammaRoot { gamma1, sigma_gamma, residual, valid }
        })
        .collect();

    Ok(GammaRootSet { delta_omega, gamma2, roots: records })
}

/// Real roots of `x^3 + b x^2 + c x + d`, by the trigonometric/Cardano
/// method on the depressed cubic.
fn solve_cubic_monic(b: f64, c: f64, d: f64) -> Vec<f64> {
    // x = t - b/3 removes the quadratic term: t^3 + p t + q.
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let half_q = q / 2.0;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    if disc > 0.0 {
        // One real root.
        let s = disc.sqrt();
        let u = cbrt(-half_q + s);
        let v = cbrt(-half_q - s);
        vec![u + v - shift]
    } else if p == 0.0 && q == 0.0 {
        vec![-shift]
    } else {
        // Three real roots (disc <= 0 implies p < 0 here).
        let m = 2.0 * (-third_p).sqrt();
        let ratio = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = ratio.acos() / 3.0;
        let two_thirds_pi = 2.0 * std::f64::consts::FRAC_PI_3;
        (0..3)
            .map(|k| m * (theta - two_thirds_pi * k as f64).cos() - shift)
            .collect()
    }
}

fn cbrt(x: f64) -> f64 {
    x.signum() * x.abs().powf(1.0 / 3.0)
}

/// A few Newton steps on the full cubic, keeping the best iterate.
fn polish_root(a3: f64, a2: f64, a1: f64, a0: f64, x0: f64) -> f64 {
    let f = |x: f64| ((a3 * x + a2) * x + a1) * x + a0;
    let fp = |x: f64| (3.0 * a3 * x + 2.0 * a2) * x + a1;
    let mut x = x0;
    let mut best = x;
    let mut best_abs = f(x).abs();
    for _ in 0..8 {
        let d = fp(x);
        if d == 0.0 {
            break;
        }
        x -= f(x) / d;
        let fx = f(x).abs();
        if fx < best_abs {
            best_abs = fx;
            best = x;
        }
        if fx == 0.0 {
            break;
        }
    }
    best
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values, digits kept verbatim
mod tests {
    use super::*;

    // Frozen from an independent companion-matrix solve with Newton polish.
    const G3_AT_10_M095: f64 = 0.009234479239802923;
    const G2_AT_M001_M025: f64 = 3.999971555326311;

    #[test]
    fn unique_real_root_at_strong_detuning() {
        let set = gamma1_roots(10.0, -0.95).unwrap();
        assert_eq!(set.roots.len(), 1, "complex pair must be filtered out");
        let r = set.roots[0];
        assert!(r.valid);
        assert!((r.gamma1 - G3_AT_10_M095).abs() < 1e-12);
        assert!(r.sigma_gamma < 0.0);
    }

    #[test]
    fn three_real_roots_near_degenerate_pair() {
        let set = gamma1_roots(-0.01, -0.25).unwrap();
        assert_eq!(set.roots.len(), 3);
        let largest = set.largest_root().unwrap();
        assert!((largest.gamma1 - G2_AT_M001_M025).abs() < 1e-9);
        // Matches the reported peak gain magnitude within 1%.
        assert!((largest.gamma1 - 3.99).abs() / 3.99 < 0.01);
        // The near-degenerate small pair straddles 0.25.
        assert!((set.roots[0].gamma1 - 0.24743218447689086).abs() < 1e-7);
        assert!((set.roots[1].gamma1 - 0.25259626019679854).abs() < 1e-7);
    }

    #[test]
    fn detuning_sign_is_irrelevant() {
        let a = gamma1_roots(-0.01, -0.25).unwrap();
        let b = gamma1_roots(0.01, -0.25).unwrap();
        assert_eq!(a.roots, b.roots);
        let c = gamma1_roots(10.0, -0.95).unwrap();
        let d = gamma1_roots(-10.0, -0.95).unwrap();
        assert_eq!(c.roots, d.roots);
    }

    #[test]
    fn degenerate_regimes_are_rejected() {
        assert!(matches!(gamma1_roots(0.0, -0.5), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(gamma1_roots(1.0, 0.0), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(gamma1_roots(f64::NAN, -0.5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn residuals_are_tiny_after_polish() {
        for &(dw, g2) in &[(10.0, -0.95), (-0.01, -0.25), (2.0, -1.5), (0.5, -0.05)] {
            let set = gamma1_roots(dw, g2).unwrap();
            for r in &set.roots {
                assert!(
                    r.residual <= ROOT_RESIDUAL_TOL * dw.powi(2).max(1.0),
                    "residual {} too large at ({dw}, {g2})",
                    r.residual
                );
            }
        }
    }

    #[test]
    fn roots_sorted_ascending() {
        let set = gamma1_roots(-0.01, -0.25).unwrap();
        for w in set.roots.windows(2) {
            assert!(w[0].gamma1 < w[1].gamma1);
        }
    }
}
