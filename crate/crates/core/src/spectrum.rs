//! Validated eigenstructure for 2x2 and 3x3 complex matrices, plus the
//! closed-form spectrum of the two-level family.
//!
//! Right eigenvectors are unit-norm columns; left eigenvectors are the rows
//! of the inverse of the right-vector matrix, so the pairing
//! `pair(left_i, right_j) = delta_ij` uses the plain bilinear dot product
//! (no conjugation). Expansion coefficients of a state are then
//! `c_i = pair(left_i, psi)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianMatrix, TwoLevelParams};
use crate::roots::SIGMA_GAMMA_MIN;

/// Minimum pairwise eigenvalue separation; closer spectra are treated as
/// exceptional points where the biorthogonal normalization diverges.
pub const EP_SEPARATION: f64 = 1e-8;

/// Eigen-residual bound, relative to the Frobenius norm of the matrix.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Biorthogonality defect bound.
pub const BIORTH_TOL: f64 = 1e-10;

/// Trace-sum defect bound (relative to `max(1, |trace|)`).
pub const TRACE_TOL: f64 = 1e-12;

/// Eigenvalues with biorthogonally normalized right/left eigenvectors,
/// ordered by ascending real part (ties by imaginary part).
#[derive(Debug, Clone)]
pub struct Eigenstructure {
    eigenvalues: Vec<Complex64>,
    right: Vec<Vec<Complex64>>,
    left: Vec<Vec<Complex64>>,
}

impl Eigenstructure {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Unit-norm right eigenvector for eigenvalue `i`.
    pub fn right_vector(&self, i: usize) -> &[Complex64] {
        &self.right[i]
    }

    /// Left (bra) row vector for eigenvalue `i`; pairs bilinearly with kets.
    pub fn left_vector(&self, i: usize) -> &[Complex64] {
        &self.left[i]
    }

    /// `sum_i c_i * right_i` for the given coefficients.
    pub fn reconstruct(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (c, v) in coeffs.iter().zip(&self.right) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// Index of the eigenvector with the largest overlap magnitude with
    /// `state` (standard sesquilinear overlap).
    pub fn max_overlap_index(&self, state: &[Complex64]) -> usize {
        let overlap = |v: &[Complex64]| -> f64 {
            v.iter()
                .zip(state)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                .norm()
        };
        (0..self.dim())
            .max_by(|&i, &j| overlap(&self.right[i]).total_cmp(&overlap(&self.right[j])))
            .expect("non-empty spectrum")
    }
}

/// Bilinear dot product (no conjugation) used for left/right pairing.
pub fn pair(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter().zip(ket).map(|(a, b)| a * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues and validated biorthogonal eigenvectors of a 2x2 or 3x3
/// complex matrix.
pub fn eigenstructure_general(h: &HamiltonianMatrix) -> Result<Eigenstructure> {
    let dim = h.dim();
    let mut eigenvalues = match dim {
        2 => eigenvalues_2(h),
        3 => eigenvalues_3(h),
        other => {
            return Err(Error::InvalidParameter(format!(
                "eigensolver supports dim 2 and 3, got {other}"
            )))
        }
    };
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut min_sep = f64::INFINITY;
    for i in 0..dim {
        for j in i + 1..dim {
            min_sep = min_sep.min((eigenvalues[i] - eigenvalues[j]).norm());
        }
    }
    if min_sep <= EP_SEPARATION {
        return Err(Error::ExceptionalPoint {
            separation: min_sep,
            min_separation: EP_SEPARATION,
        });
    }

    let right: Vec<Vec<Complex64>> = eigenvalues
        .iter()
        .map(|&l| right_null_vector(h, l))
        .collect::<Result<_>>()?;
    let left = invert_columns(&right)?;

    let es = Eigenstructure { eigenvalues, right, left };
    validate(h, &es)?;
    Ok(es)
}

fn eigenvalues_2(h: &HamiltonianMatrix) -> Vec<Complex64> {
    let (a, b, c, d) = (h.get(0, 0), h.get(0, 1), h.get(1, 0), h.get(1, 1));
    let mean = (a + d) * 0.5;
    let s = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    vec![mean + s, mean - s]
}

/// Roots of the cubic characteristic polynomial via complex Cardano with a
/// cancellation-safe branch choice, then Newton polish.
fn eigenvalues_3(h: &HamiltonianMatrix) -> Vec<Complex64> {
    let tr = h.trace();
    // Sum of principal 2x2 minors.
    let minors = h.get(0, 0) * h.get(1, 1) - h.get(0, 1) * h.get(1, 0)
        + h.get(0, 0) * h.get(2, 2)
        - h.get(0, 2) * h.get(2, 0)
        + h.get(1, 1) * h.get(2, 2)
        - h.get(1, 2) * h.get(2, 1);
    let det = h.get(0, 0) * (h.get(1, 1) * h.get(2, 2) - h.get(1, 2) * h.get(2, 1))
        - h.get(0, 1) * (h.get(1, 0) * h.get(2, 2) - h.get(1, 2) * h.get(2, 0))
        + h.get(0, 2) * (h.get(1, 0) * h.get(2, 1) - h.get(1, 1) * h.get(2, 0));

    // lambda^3 + a2 lambda^2 + a1 lambda + a0
    let a2 = -tr;
    let a1 = minors;
    let a0 = -det;

    let third = Complex64::new(1.0 / 3.0, 0.0);
    let shift = a2 * third;
    let p = a1 - a2 * a2 * third;
    let q = a2 * a2 * a2 * Complex64::new(2.0 / 27.0, 0.0) - a2 * a1 * third + a0;

    let half_q = q * 0.5;
    let disc = (half_q * half_q + p * p * p / 27.0).sqrt();
    // Pick the branch that avoids cancellation in -q/2 +- disc.
    let w = if (-half_q + disc).norm() >= (-half_q - disc).norm() {
        -half_q + disc
    } else {
        -half_q - disc
    };
    let u = w.cbrt();

    let omega = Complex64::new(-0.5, 0.75f64.sqrt());
    let raw: Vec<Complex64> = if u.norm() < 1e-300 {
        // p and q both vanish: triple root.
        vec![-shift; 3]
    } else {
        let v = -p / (u * 3.0);
        (0..3)
            .map(|k| {
                let w1 = omega.powu(k);
                let w2 = omega.powu((3 - k) % 3);
                u * w1 + v * w2 - shift
            })
            .collect()
    };

    let poly = |x: Complex64| ((x + a2) * x + a1) * x + a0;
    let dpoly = |x: Complex64| (x * 3.0 + a2 * 2.0) * x + a1;
    raw.into_iter()
        .map(|mut x| {
            let mut best = x;
            let mut best_abs = poly(x).norm();
            for _ in 0..6 {
                let d = dpoly(x);
                if d.norm() == 0.0 {
                    break;
                }
                x -= poly(x) / d;
                let fx = poly(x).norm();
                if fx < best_abs {
                    best_abs = fx;
                    best = x;
                }
            }
            best
        })
        .collect()
}

/// Unit-norm null vector of `h - lambda*I`, phase-fixed so the
/// largest-magnitude component is real positive.
fn right_null_vector(h: &HamiltonianMatrix, lambda: Complex64) -> Result<Vec<Complex64>> {
    let dim = h.dim();
    let a = |i: usize, j: usize| {
        let d = if i == j { lambda } else { Complex64::new(0.0, 0.0) };
        h.get(i, j) - d
    };
    let candidates: Vec<Vec<Complex64>> = if dim == 2 {
        vec![
            vec![a(0, 1), -a(0, 0)],
            vec![-a(1, 1), a(1, 0)],
        ]
    } else {
        let row = |i: usize| [a(i, 0), a(i, 1), a(i, 2)];
        let cross = |u: [Complex64; 3], v: [Complex64; 3]| {
            vec![
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]
        };
        vec![
            cross(row(0), row(1)),
            cross(row(0), row(2)),
            cross(row(1), row(2)),
        ]
    };
    let best = candidates
        .into_iter()
        .max_by(|u, v| norm(u).total_cmp(&norm(v)))
        .expect("candidate list non-empty");
    let n = norm(&best);
    if n < 1e-14 {
        return Err(Error::SpectralValidation(format!(
            "null space of (H - lambda I) is numerically degenerate at lambda = {lambda}"
        )));
    }
    let mut v: Vec<Complex64> = best.into_iter().map(|z| z / n).collect();
    let k = (0..v.len())
        .max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()))
        .expect("non-empty vector");
    let phase = v[k].conj() / v[k].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    Ok(v)
}

/// Rows of the inverse of the matrix whose columns are `cols`.
fn invert_columns(cols: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let dim = cols.len();
    let rows: Vec<Vec<Complex64>>;
    let det: Complex64;
    if dim == 2 {
        det = cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1];
        rows = vec![
            vec![cols[1][1], -cols[1][0]],
            vec![-cols[0][1], cols[0][0]],
        ];
    } else {
        let cross = |u: &[Complex64], v: &[Complex64]| {
            vec![
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]
        };
        let r0 = cross(&cols[1], &cols[2]);
        det = pair(&r0, &cols[0]);
        rows = vec![r0, cross(&cols[2], &cols[0]), cross(&cols[0], &cols[1])];
    }
    if det.norm() < 1e-12 {
        return Err(Error::ExceptionalPoint {
            separation: det.norm(),
            min_separation: 1e-12,
        });
    }
    Ok(rows
        .into_iter()
        .map(|r| r.into_iter().map(|z| z / det).collect())
        .collect())
}

fn validate(h: &HamiltonianMatrix, es: &Eigenstructure) -> Result<()> {
    let dim = es.dim();
    let h_norm = h.frobenius_norm();
    for i in 0..dim {
        let hv = h.apply(&es.right[i]);
        let res: f64 = hv
            .iter()
            .zip(&es.right[i])
            .map(|(a, v)| (a - es.eigenvalues[i] * v).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > RESIDUAL_TOL * h_norm {
            return Err(Error::SpectralValidation(format!(
                "eigen-residual {res:.3e} exceeds {:.1e} for eigenvalue {}",
                RESIDUAL_TOL * h_norm,
                es.eigenvalues[i]
            )));
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            let delta = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            let defect = (pair(&es.left[i], &es.right[j]) - delta).norm();
            if defect > BIORTH_TOL {
                return Err(Error::SpectralValidation(format!(
                    "biorthogonality defect {defect:.3e} at ({i},{j})"
                )));
            }
        }
    }
    let sum: Complex64 = es.eigenvalues.iter().sum();
    let tr = h.trace();
    if (sum - tr).norm() > TRACE_TOL * tr.norm().max(1.0) {
        return Err(Error::SpectralValidation(format!(
            "eigenvalue sum {sum} deviates from trace {tr}"
        )));
    }
    Ok(())
}

/// Closed-form eigenvalues of the family at parameters satisfying the class
/// constraint: one strictly real, one with imaginary part `sigma_gamma`.
///
/// The root-membership precondition is the caller's contract; only the
/// `sigma_gamma = 0` singularity is checked here.
pub fn eigenvalues_closed_form(params: &TwoLevelParams) -> Result<(Complex64, Complex64)> {
    let y = params.sigma_gamma();
    if y.abs() <= SIGMA_GAMMA_MIN {
        return Err(Error::SingularParameter(format!(
            "gamma1 + gamma2 = {y:.3e} is too close to zero for the closed-form spectrum"
        )));
    }
    let (w1, g1) = (params.site1().omega(), params.site1().gamma());
    let (w2, g2) = (params.site2().omega(), params.site2().gamma());
    let x1 = (w1 * g1 + w2 * g2) / y;
    let x2 = (w1 * g2 + w2 * g1) / y;
    Ok((Complex64::new(x1, y), Complex64::new(x2, 0.0)))
}

/// Closed-form unit-norm eigenvectors of the family at class parameters:
/// the complex-eigenvalue vector first, then the real-eigenvalue vector.
pub fn eigenvectors_closed_form(
    params: &TwoLevelParams,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let y = params.sigma_gamma();
    let g1 = params.site1().gamma();
    let g2 = params.site2().gamma();
    if g1 == 0.0 || g2 == 0.0 {
        return Err(Error::SingularParameter(
            "closed-form eigenvectors need nonzero gamma on both sites".into(),
        ));
    }
    if y.abs() <= SIGMA_GAMMA_MIN {
        return Err(Error::SingularParameter(format!(
            "gamma1 + gamma2 = {y:.3e} is too close to zero for closed-form eigenvectors"
        )));
    }
    let dw = params.delta_omega();
    let iy = Complex64::new(0.0, y);
    let first = vec![
        Complex64::new(y, 0.0) / (Complex64::new(g2, 0.0) * (iy - dw)),
        Complex64::new(1.0, 0.0),
    ];
    let second = vec![
        Complex64::new(1.0, 0.0),
        -Complex64::new(g1, 0.0) * (Complex64::new(dw, 0.0) + iy) / y,
    ];
    let unit = |v: Vec<Complex64>| {
        let n = norm(&v);
        v.into_iter().map(|z| z / n).collect::<Vec<_>>()
    };
    Ok((unit(first), unit(second)))
}

/// Whether the complex eigenvalue's component decays or amplifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicMode {
    Decay,
    Amplify,
}

/// Outcome of testing a spectrum for the one-real/one-complex class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitReport {
    /// Exactly one real and one complex eigenvalue (two-level class).
    InClass {
        real_index: usize,
        complex_index: usize,
        mode: DynamicMode,
    },
    /// Any other pattern, including every 3x3 spectrum.
    NotInClass { real_count: usize },
}

/// Classify a spectrum against the one-real/one-complex class with the given
/// realness tolerance on `|Im lambda|`.
pub fn classify_split(es: &Eigenstructure, tol: f64) -> SplitReport {
    let real: Vec<usize> = (0..es.dim())
        .filter(|&i| es.eigenvalues()[i].im.abs() <= tol)
        .collect();
    if es.dim() == 2 && real.len() == 1 {
        let real_index = real[0];
        let complex_index = 1 - real_index;
        let mode = if es.eigenvalues()[complex_index].im > 0.0 {
            DynamicMode::Amplify
        } else {
            DynamicMode::Decay
        };
        SplitReport::InClass { real_index, complex_index, mode }
    } else {
        SplitReport::NotInClass { real_count: real.len() }
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values, digits kept verbatim
mod tests {
    use super::*;
    use crate::hamiltonian::build_hamiltonian_2;
    use crate::roots::gamma1_roots;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn family(omega1: f64, gamma1: f64, omega2: f64, gamma2: f64) -> HamiltonianMatrix {
        build_hamiltonian_2(&TwoLevelParams::from_raw(omega1, gamma1, omega2, gamma2).unwrap())
    }

    fn decay_params() -> TwoLevelParams {
        let root = gamma1_roots(10.0, -0.95).unwrap().decay_root().unwrap();
        TwoLevelParams::from_raw(0.0, root.gamma1, -10.0, -0.95).unwrap()
    }

    #[test]
    fn sigma_x_spectrum() {
        let h = family(0.0, 0.0, 0.0, 0.0);
        let es = eigenstructure_general(&h).unwrap();
        assert!((es.eigenvalues()[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((es.eigenvalues()[1] - c(1.0, 0.0)).norm() < 1e-14);
        let v0 = es.right_vector(0);
        assert!((v0[0].re.abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((v0[0] + v0[1]).norm() < 1e-14, "antisymmetric combination");
        let v1 = es.right_vector(1);
        assert!((v1[0] - v1[1]).norm() < 1e-14, "symmetric combination");
    }

    #[test]
    fn closed_form_matches_frozen_values() {
        let (l1, l2) = eigenvalues_closed_form(&decay_params()).unwrap();
        assert!((l1 - c(-10.098159201586608, -0.94076552076019704)).norm() < 1e-12);
        assert!((l2.re - 0.098159201586606723).abs() < 1e-12);
        assert_eq!(l2.im, 0.0);
    }

    #[test]
    fn closed_form_cross_checks_against_general_solver() {
        let p = decay_params();
        let es = eigenstructure_general(&build_hamiltonian_2(&p)).unwrap();
        let (l1, l2) = eigenvalues_closed_form(&p).unwrap();
        let mut expected = [l1, l2];
        expected.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (a, b) in es.eigenvalues().iter().zip(expected) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
        // Exactly one eigenvalue is numerically real.
        let real_count = es.eigenvalues().iter().filter(|l| l.im.abs() <= 1e-9).count();
        assert_eq!(real_count, 1);
    }

    #[test]
    fn swapping_omegas_swaps_real_parts() {
        let p = decay_params();
        let swapped = TwoLevelParams::from_raw(
            p.site2().omega(),
            p.site1().gamma(),
            p.site1().omega(),
            p.site2().gamma(),
        )
        .unwrap();
        let (a1, a2) = eigenvalues_closed_form(&p).unwrap();
        let (b1, b2) = eigenvalues_closed_form(&swapped).unwrap();
        assert_eq!(a1.re, b2.re);
        assert_eq!(a2.re, b1.re);
    }

    #[test]
    fn swapping_gammas_swaps_real_parts_exactly() {
        let p = TwoLevelParams::from_raw(1.25, 0.5, -2.0, -0.3).unwrap();
        let (a1, a2) = eigenvalues_closed_form(&p).unwrap();
        let q = TwoLevelParams::from_raw(1.25, -0.3, -2.0, 0.5).unwrap();
        let (b1, b2) = eigenvalues_closed_form(&q).unwrap();
        assert_eq!(a1.re, b2.re);
        assert_eq!(a2.re, b1.re);
    }

    #[test]
    fn equal_omegas_pin_both_real_parts() {
        let p = TwoLevelParams::from_raw(2.5, 0.7, 2.5, -0.2).unwrap();
        let (l1, l2) = eigenvalues_closed_form(&p).unwrap();
        assert!((l1.re - 2.5).abs() < 1e-12);
        assert!((l2.re - 2.5).abs() < 1e-12);
    }

    #[test]
    fn closed_form_eigenvectors_satisfy_residual() {
        let p = decay_params();
        let h = build_hamiltonian_2(&p);
        let (v1, v2) = eigenvectors_closed_form(&p).unwrap();
        let (l1, l2) = eigenvalues_closed_form(&p).unwrap();
        for (v, l) in [(&v1, l1), (&v2, l2)] {
            let hv = h.apply(v);
            let res: f64 = hv
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - l * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= RESIDUAL_TOL * h.frobenius_norm(), "residual {res}");
        }
        // The complex-eigenvalue vector hugs the second bare state.
        let expected = c(-0.098159201586606709, 0.0092344792398029209);
        let ratio = v1[0] / v1[1];
        assert!((ratio - expected).norm() < 1e-12);
        // Right eigenvectors of a non-Hermitian matrix are not orthogonal.
        let overlap: Complex64 = v1.iter().zip(&v2).map(|(a, b)| a.conj() * b).sum();
        assert!(overlap.norm() > 1e-3);
    }

    #[test]
    fn singular_parameters_are_rejected() {
        let balanced = TwoLevelParams::from_raw(1.0, 0.5, 0.0, -0.5).unwrap();
        assert!(matches!(
            eigenvalues_closed_form(&balanced),
            Err(Error::SingularParameter(_))
        ));
        let zero_gamma = TwoLevelParams::from_raw(1.0, 0.0, 0.0, -0.5).unwrap();
        assert!(matches!(
            eigenvectors_closed_form(&zero_gamma),
            Err(Error::SingularParameter(_))
        ));
    }

    #[test]
    fn biorthogonality_holds() {
        let h = family(0.3, 0.8, -1.7, -0.4);
        let es = eigenstructure_general(&h).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = pair(es.left_vector(i), es.right_vector(j));
                assert!((got - expect).norm() <= BIORTH_TOL);
            }
        }
    }

    #[test]
    fn three_level_decay_sits_on_initial_site() {
        let g3 = gamma1_roots(10.0, -0.95).unwrap().decay_root().unwrap().gamma1;
        let h = HamiltonianMatrix::three_level(c(0.0, g3), c(15.0, 0.0), c(-10.0, -0.95));
        let es = eigenstructure_general(&h).unwrap();
        let start = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let idx = es.max_overlap_index(&start);
        let most_negative = (0..3)
            .min_by(|&i, &j| es.eigenvalues()[i].im.total_cmp(&es.eigenvalues()[j].im))
            .unwrap();
        assert_eq!(idx, most_negative);
        // Frozen from the independent eigensolve.
        assert!((es.eigenvalues()[0] - c(-10.040035039657257, -0.94846244519640777)).norm() < 1e-9);
        assert!((es.eigenvalues()[2] - c(15.105973327549977, -0.0014558917894757209)).norm() < 1e-9);
    }

    #[test]
    fn near_degenerate_spectrum_is_an_exceptional_point() {
        let entries = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 + 5e-9, 0.0)];
        let h = HamiltonianMatrix::from_entries(2, entries).unwrap();
        assert!(matches!(
            eigenstructure_general(&h),
            Err(Error::ExceptionalPoint { .. })
        ));
    }

    #[test]
    fn classify_decay_amplify_and_hermitian() {
        let es = eigenstructure_general(&build_hamiltonian_2(&decay_params())).unwrap();
        match classify_split(&es, 1e-9) {
            SplitReport::InClass { real_index, complex_index, mode } => {
                assert_eq!(mode, DynamicMode::Decay);
                assert_eq!(real_index, 1, "real eigenvalue has the larger real part here");
                assert_eq!(complex_index, 0);
            }
            other => panic!("expected in-class decay, got {other:?}"),
        }

        let amp = family(-0.01, 3.99, 0.0, -0.25);
        let es = eigenstructure_general(&amp).unwrap();
        // 3.99 is off the exact root, so allow a loose realness tolerance.
        match classify_split(&es, 1e-3) {
            SplitReport::InClass { mode, .. } => assert_eq!(mode, DynamicMode::Amplify),
            other => panic!("expected amplify, got {other:?}"),
        }

        let herm = eigenstructure_general(&family(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(classify_split(&herm, 1e-9), SplitReport::NotInClass { real_count: 2 });
    }
}
