//! State propagation under constant and time-dependent Hamiltonians.
//!
//! Piecewise-constant protocols use the exact segment propagator: expand the
//! state in the validated biorthogonal eigenbasis, advance each coefficient
//! by `exp(-i lambda t)`, and resum. A fixed-step fourth-order Runge-Kutta
//! integrator covers time-dependent Hamiltonians and doubles as an
//! independent cross-check of the exact path.
//!
//! Amplitudes are never renormalized: populations may exceed one during
//! amplification, and the transfer-complete condition is raw intensity
//! reaching one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianMatrix;
use crate::spectrum::{eigenstructure_general, pair, Eigenstructure};

/// `dt * max|H_ij|` must stay at or below this for the fixed-step integrator.
pub const STABILITY_BOUND: f64 = 0.05;

/// Complex amplitudes over the bare basis. Component `i` is the amplitude of
/// the `i`-th canonical basis vector; in the two-level convention the state
/// written `(0,1)^T` is component 1 and `(1,0)^T` is component 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 2 && amps.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "state dimension must be 2 or 3, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("state amplitudes must be finite".into()));
        }
        let s = Self { amps };
        if s.intensity() <= 0.0 {
            return Err(Error::InvalidParameter("state must have positive norm".into()));
        }
        Ok(s)
    }

    /// Canonical basis state `e_index` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `|a_i|^2` per component.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Total intensity `sum_i |a_i|^2`.
    pub fn intensity(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|<other|self>|^2` (sesquilinear overlap intensity).
    pub fn overlap_intensity(&self, other: &StateVector) -> f64 {
        other
            .amps
            .iter()
            .zip(&self.amps)
            .map(|(t, a)| t.conj() * a)
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }
}

/// Integration method for a propagation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Eigenbasis exponential; exact for constant segments.
    ExactSegment,
    /// Fixed-step fourth-order Runge-Kutta.
    Rk4,
}

/// Step size, method, and sampling stride for a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    pub dt: f64,
    pub method: Method,
    pub sample_stride: usize,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self { dt: 1e-3, method: Method::ExactSegment, sample_stride: 10 }
    }
}

impl PropagationConfig {
    fn validated(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::Configuration(format!("dt must be positive, got {}", self.dt)));
        }
        if self.sample_stride == 0 {
            return Err(Error::Configuration("sample_stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Time-sampled states with their derived populations and total intensity.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
    populations: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

impl Trajectory {
    fn from_samples(times: Vec<f64>, states: Vec<StateVector>) -> Self {
        debug_assert_eq!(times.len(), states.len());
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]), "times strictly increasing");
        let populations: Vec<Vec<f64>> = states.iter().map(|s| s.populations()).collect();
        let norms = populations.iter().map(|p| p.iter().sum()).collect();
        Self { times, states, populations, norms }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// `populations()[k][i]` is the intensity of component `i` at sample `k`.
    pub fn populations(&self) -> &[Vec<f64>] {
        &self.populations
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory is never empty")
    }

    /// Same trajectory with all sample times offset by `delta`.
    pub fn shifted(mut self, delta: f64) -> Self {
        for t in self.times.iter_mut() {
            *t += delta;
        }
        self
    }

    /// Append `other`, dropping its first sample when it coincides with this
    /// trajectory's last time.
    pub(crate) fn extend_with(&mut self, other: Trajectory) {
        let last = self.final_time();
        let skip = if (other.times[0] - last).abs() <= 1e-12 { 1 } else { 0 };
        self.times.extend(other.times.into_iter().skip(skip));
        self.states.extend(other.states.into_iter().skip(skip));
        self.populations.extend(other.populations.into_iter().skip(skip));
        self.norms.extend(other.norms.into_iter().skip(skip));
    }
}

fn step_count(span: f64, dt: f64) -> usize {
    ((span / dt) - 1e-9).ceil().max(1.0) as usize
}

fn check_dims(h: &HamiltonianMatrix, psi0: &StateVector) -> Result<()> {
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: psi0.dim() });
    }
    Ok(())
}

/// Sample indices `0, stride, 2*stride, ..., n` (final step always included).
fn sample_grid(n: usize, stride: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (0..=n).step_by(stride).collect();
    if *ks.last().unwrap() != n {
        ks.push(n);
    }
    ks
}

/// Propagate under a time-independent Hamiltonian for `duration`.
///
/// The exact method diagonalizes once and evaluates the eigenbasis
/// exponential on the sample grid; diagonal matrices (the identity tail)
/// skip the eigensolver. Exceptional-point failures propagate to the caller,
/// which may rerun with [`Method::Rk4`].
pub fn propagate_constant(
    h: &HamiltonianMatrix,
    psi0: &StateVector,
    duration: f64,
    config: &PropagationConfig,
) -> Result<Trajectory> {
    config.validated()?;
    check_dims(h, psi0)?;
    if !duration.is_finite() || duration < 0.0 {
        return Err(Error::Configuration(format!(
            "duration must be non-negative, got {duration}"
        )));
    }
    if duration == 0.0 {
        return Ok(Trajectory::from_samples(vec![0.0], vec![psi0.clone()]));
    }
    match config.method {
        Method::Rk4 => {
            let hc = h.clone();
            propagate_time_dependent(|_| hc.clone(), psi0, 0.0, duration, config)
        }
        Method::ExactSegment => {
            let n = step_count(duration, config.dt);
            let h_step = duration / n as f64;
            let eval: Box<dyn Fn(f64) -> Vec<Complex64>> = if h.is_diagonal() {
                let phases: Vec<Complex64> = (0..h.dim()).map(|i| h.get(i, i)).collect();
                let amps0 = psi0.amplitudes().to_vec();
                Box::new(move |t: f64| {
                    amps0
                        .iter()
                        .zip(&phases)
                        .map(|(a, hd)| a * (-Complex64::i() * hd * t).exp())
                        .collect()
                })
            } else {
                let es = eigenstructure_general(h)?;
                let coeffs = biorthogonal_coefficients(&es, psi0)?;
                Box::new(move |t: f64| {
                    let advanced: Vec<Complex64> = coeffs
                        .iter()
                        .zip(es.eigenvalues())
                        .map(|(c, l)| c * (-Complex64::i() * l * t).exp())
                        .collect();
                    es.reconstruct(&advanced)
                })
            };
            let mut times = Vec::new();
            let mut states = Vec::new();
            for k in sample_grid(n, config.sample_stride) {
                let t = if k == n { duration } else { k as f64 * h_step };
                times.push(t);
                states.push(StateVector::from_raw(eval(t)));
            }
            Ok(Trajectory::from_samples(times, states))
        }
    }
}

/// Integrate `i dpsi/dt = H(t) psi` from `t0` to `t1` with fixed-step RK4.
///
/// Errors when `t1 <= t0` or when any evaluated step violates
/// `dt * max|H_ij| <= 0.05`.
pub fn propagate_time_dependent<F>(
    hfun: F,
    psi0: &StateVector,
    t0: f64,
    t1: f64,
    config: &PropagationConfig,
) -> Result<Trajectory>
where
    F: Fn(f64) -> HamiltonianMatrix,
{
    config.validated()?;
    if !t0.is_finite() || !t1.is_finite() || t1 <= t0 {
        return Err(Error::Configuration(format!(
            "time window must have t1 > t0, got [{t0}, {t1}]"
        )));
    }
    let span = t1 - t0;
    let n = step_count(span, config.dt);
    let h_step = span / n as f64;
    let minus_i = -Complex64::i();

    let apply = |m: &HamiltonianMatrix, v: &[Complex64]| -> Vec<Complex64> {
        m.apply(v).into_iter().map(|z| minus_i * z).collect()
    };
    let axpy = |v: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
        v.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };

    let mut psi = psi0.amplitudes().to_vec();
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let stride = config.sample_stride;

    for k in 0..n {
        let t = k as f64 * h_step;
        let h_t = hfun(t0 + t);
        if h_t.dim() != psi.len() {
            return Err(Error::DimensionMismatch { expected: h_t.dim(), got: psi.len() });
        }
        if h_step * h_t.max_entry_norm() > STABILITY_BOUND * (1.0 + 1e-9) {
            return Err(Error::Configuration(format!(
                "dt = {h_step:.3e} violates the stability bound dt * max|H_ij| <= {STABILITY_BOUND} \
                 (max entry {:.3e} at t = {:.6})",
                h_t.max_entry_norm(),
                t0 + t
            )));
        }
        let h_mid = hfun(t0 + t + 0.5 * h_step);
        let h_end = hfun(t0 + t + h_step);

        let k1 = apply(&h_t, &psi);
        let k2 = apply(&h_mid, &axpy(&psi, &k1, 0.5 * h_step));
        let k3 = apply(&h_mid, &axpy(&psi, &k2, 0.5 * h_step));
        let k4 = apply(&h_end, &axpy(&psi, &k3, h_step));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h_step / 6.0);
        }

        let step_index = k + 1;
        if step_index % stride == 0 || step_index == n {
            let t_sample = if step_index == n { span } else { step_index as f64 * h_step };
            times.push(t_sample);
            states.push(StateVector::from_raw(psi.clone()));
        }
    }

    Ok(Trajectory::from_samples(times, states).shifted(t0))
}

/// Expansion coefficients `c_i = pair(left_i, psi)` of a state in a
/// biorthogonal eigenbasis. Reconstruction `sum_i c_i |right_i>` recovers
/// the state to the biorthogonality tolerance.
pub fn biorthogonal_coefficients(
    es: &Eigenstructure,
    psi: &StateVector,
) -> Result<Vec<Complex64>> {
    if es.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: es.dim(), got: psi.dim() });
    }
    Ok((0..es.dim())
        .map(|i| pair(es.left_vector(i), psi.amplitudes()))
        .collect())
}

/// Per-sample observables of a trajectory: bare-state populations, total
/// intensity, and (given an eigenbasis) coefficient magnitudes `|c_i(t)|`.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
    pub coefficient_magnitudes: Option<Vec<Vec<f64>>>,
}

pub fn observables(traj: &Trajectory, basis: Option<&Eigenstructure>) -> Result<ObservableSeries> {
    let coefficient_magnitudes = match basis {
        None => None,
        Some(es) => Some(
            traj.states()
                .iter()
                .map(|s| {
                    biorthogonal_coefficients(es, s)
                        .map(|cs| cs.iter().map(|c| c.norm()).collect::<Vec<f64>>())
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Ok(ObservableSeries {
        times: traj.times().to_vec(),
        populations: traj.populations().to_vec(),
        norms: traj.norms().to_vec(),
        coefficient_magnitudes,
    })
}
