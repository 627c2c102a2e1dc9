//! The two- and three-level Hamiltonian family with unit inter-site coupling.
//!
//! All on-site potentials `omega + i*gamma` are expressed in units of the
//! coupling, and time in inverse-coupling units. `gamma > 0` is gain,
//! `gamma < 0` is loss. In the two-level matrix
//!
//! ```text
//! [ omega1 + i gamma1          1         ]
//! [        1           omega2 + i gamma2 ]
//! ```
//!
//! the first vector component is the bare state (1,0)^T and carries site 1;
//! the second component is (0,1)^T and carries site 2.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One site's complex on-site potential, `omega + i*gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SitePotential {
    omega: f64,
    gamma: f64,
}

impl SitePotential {
    /// Both fields must be finite.
    pub fn new(omega: f64, gamma: f64) -> Result<Self> {
        if !omega.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "site potential must be finite, got omega={omega}, gamma={gamma}"
            )));
        }
        Ok(Self { omega, gamma })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.omega, self.gamma)
    }
}

/// Parameters of the two-level family. The difference/sum combinations are
/// recomputed from the sites on every access so they cannot drift out of
/// sync.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    site1: SitePotential,
    site2: SitePotential,
}

impl TwoLevelParams {
    pub fn new(site1: SitePotential, site2: SitePotential) -> Self {
        Self { site1, site2 }
    }

    /// Convenience constructor from raw `(omega1, gamma1, omega2, gamma2)`.
    pub fn from_raw(omega1: f64, gamma1: f64, omega2: f64, gamma2: f64) -> Result<Self> {
        Ok(Self::new(
            SitePotential::new(omega1, gamma1)?,
            SitePotential::new(omega2, gamma2)?,
        ))
    }

    pub fn site1(&self) -> SitePotential {
        self.site1
    }

    pub fn site2(&self) -> SitePotential {
        self.site2
    }

    /// `omega1 - omega2`
    pub fn delta_omega(&self) -> f64 {
        self.site1.omega - self.site2.omega
    }

    /// `omega1 + omega2`
    pub fn sigma_omega(&self) -> f64 {
        self.site1.omega + self.site2.omega
    }

    /// `gamma1 - gamma2`
    pub fn delta_gamma(&self) -> f64 {
        self.site1.gamma - self.site2.gamma
    }

    /// `gamma1 + gamma2`; the imaginary part of the complex eigenvalue when
    /// the parameters satisfy the split constraint.
    pub fn sigma_gamma(&self) -> f64 {
        self.site1.gamma + self.site2.gamma
    }

    /// Same parameters with the two sites exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.site2, self.site1)
    }
}

/// Dense complex Hamiltonian of dimension 2 or 3, row-major.
///
/// Matrices built through [`HamiltonianMatrix::two_level`] /
/// [`HamiltonianMatrix::three_level`] keep the chain structure invariant:
/// unit couplings on the off-diagonal chain, zero on the 3x3 corners.
/// [`HamiltonianMatrix::identity`] is the one deliberate exception, used as
/// the trivial tail of a protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HamiltonianMatrix {
    /// `[[omega1 + i gamma1, 1], [1, omega2 + i gamma2]]`
    pub fn two_level(params: &TwoLevelParams) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            dim: 2,
            entries: vec![params.site1().as_complex(), one, one, params.site2().as_complex()],
        }
    }

    /// Three-site chain with unit couplings, zero corner couplings, and the
    /// given complex on-site potentials.
    pub fn three_level(site1: Complex64, middle: Complex64, site3: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            dim: 3,
            entries: vec![site1, one, zero, one, middle, one, zero, one, site3],
        }
    }

    /// Identity matrix; the protocol tail.
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// General constructor, validating dimension, finiteness, and the chain
    /// coupling invariant (unit couplings, zero 3x3 corners). Diagonal
    /// matrices are accepted as trivial-evolution segments.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        let m = Self { dim, entries };
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let diagonal = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .all(|(i, j)| i == j || m.get(i, j) == zero);
        if !diagonal {
            let chain_ok = (0..dim - 1)
                .all(|i| m.get(i, i + 1) == one && m.get(i + 1, i) == one)
                && (dim != 3 || (m.get(0, 2) == zero && m.get(2, 0) == zero));
            if !chain_ok {
                return Err(Error::InvalidParameter(
                    "off-diagonal entries must form a unit-coupling chain".into(),
                ));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// `gamma` of each site, read off the diagonal.
    pub fn site_gammas(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).im).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude; used for integrator step-size checks.
    pub fn max_entry_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_diagonal(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        (0..self.dim)
            .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
            .all(|(i, j)| i == j || self.get(i, j) == zero)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol)
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// The spectral-split family matrix for the given parameters.
///
/// Finiteness is enforced by [`SitePotential`]; any `TwoLevelParams` value
/// therefore builds. The fallible signature is kept for callers holding raw
/// floats.
pub fn build_hamiltonian_2(params: &TwoLevelParams) -> HamiltonianMatrix {
    HamiltonianMatrix::two_level(params)
}
