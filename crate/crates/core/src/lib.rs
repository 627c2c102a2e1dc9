//! Simulation of a non-Hermitian two/three-level Hamiltonian family whose
//! spectrum splits into one purely real and one complex eigenvalue, and of
//! the fast population-transfer protocols that split enables.
//!
//! The pieces:
//!
//! - [`hamiltonian`]: the unit-coupling site family and its 2x2/3x3 matrices.
//! - [`roots`]: the cubic constraint selecting `gamma1` so the split holds.
//! - [`spectrum`]: validated biorthogonal eigenstructure, closed forms, and
//!   decay/amplify classification.
//! - [`dynamics`]: exact-segment and fixed-step RK4 propagation with
//!   population/coefficient observables.
//! - [`protocol`]: piecewise-constant transfer protocols, the Landau-Zener
//!   sweep baseline, switch-time search, and cost accounting.
//! - [`optimize`]: constrained derivative-free search over protocol
//!   parameters.
//!
//! Conventions: energies in units of the inter-site coupling, time in
//! inverse couplings, `gamma > 0` gain and `gamma < 0` loss, and bare basis
//! vectors written `(0,1)^T` (component 1) and `(1,0)^T` (component 0).

pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod optimize;
pub mod protocol;
pub mod roots;
pub mod spectrum;

pub use dynamics::{
    biorthogonal_coefficients, observables, propagate_constant, propagate_time_dependent, Method,
    ObservableSeries, PropagationConfig, StateVector, Trajectory,
};
pub use error::{Error, Result};
pub use hamiltonian::{build_hamiltonian_2, HamiltonianMatrix, SitePotential, TwoLevelParams};
pub use optimize::{
    evaluate_candidate, optimize, CandidateParams, CostObjective, HistoryEntry,
    OptimizationResult, ParamBounds, SearchSpace,
};
pub use protocol::{
    build_dasa_2level, build_dasa_3level, cost_report, find_switch_time, lz_analytic_transfer,
    lz_hamiltonian, lz_sweep, run_protocol, run_protocol_until, CostReport, Dasa2Spec, Dasa3Spec,
    FidelityReport, LZConfig, Protocol, ProtocolSegment, SegmentSpec,
};
pub use roots::{gamma1_roots, GammaRoot, GammaRootSet};
pub use spectrum::{
    classify_split, eigenstructure_general, eigenvalues_closed_form, eigenvectors_closed_form,
    DynamicMode, Eigenstructure, SplitReport,
};
