//! Derivative-free search over two-segment protocol parameters, minimizing a
//! thermodynamic-cost objective subject to a transfer-fidelity floor.
//!
//! Infeasible candidates (no decaying or amplifying root, no switch-time
//! crossing within the horizon) are handled by death penalty: they score
//! infinite cost and zero fidelity, with no tuning weights. The search is a
//! Nelder-Mead simplex with seeded random restarts; evaluations are
//! sequential, so a fixed seed reproduces the history bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{PropagationConfig, StateVector};
use crate::error::{Error, Result};
use crate::hamiltonian::build_hamiltonian_2;
use crate::protocol::{
    amplify_segment_params, cost_report, decay_segment_params, find_switch_time, run_protocol,
    CostReport, Protocol, ProtocolSegment, SegmentSpec,
};

const DIM: usize = 6;

/// Which aggregate of the cost report the search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostObjective {
    MaxAbsGamma,
    SumAbsGainIntegrals,
    ActiveDuration,
}

impl CostObjective {
    pub fn of(&self, cost: &CostReport) -> f64 {
        match self {
            Self::MaxAbsGamma => cost.max_abs_gamma,
            Self::SumAbsGainIntegrals => cost.sum_abs_gain_integrals(),
            Self::ActiveDuration => cost.active_duration,
        }
    }
}

/// Inclusive interval. A degenerate interval (`lo == hi`) pins the
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBounds {
    pub lo: f64,
    pub hi: f64,
}

impl ParamBounds {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn pinned(value: f64) -> Self {
        Self { lo: value, hi: value }
    }

    fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::Configuration(format!(
                "{name} bounds must be finite with lo <= hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bounds for the six searched parameters, the fidelity floor, and the cost
/// objective. The `gamma2` and `delta_omega` intervals must exclude zero
/// (the family is undefined there); durations must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSpace {
    pub decay_gamma2: ParamBounds,
    pub decay_delta_omega: ParamBounds,
    pub decay_duration: ParamBounds,
    pub amplify_gamma2: ParamBounds,
    pub amplify_delta_omega: ParamBounds,
    pub amplify_horizon: ParamBounds,
    pub fidelity_floor: f64,
    pub cost_objective: CostObjective,
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        for (b, name) in [
            (self.decay_gamma2, "decay_gamma2"),
            (self.decay_delta_omega, "decay_delta_omega"),
            (self.decay_duration, "decay_duration"),
            (self.amplify_gamma2, "amplify_gamma2"),
            (self.amplify_delta_omega, "amplify_delta_omega"),
            (self.amplify_horizon, "amplify_horizon"),
        ] {
            b.validate(name)?;
        }
        for (b, name) in [
            (self.decay_gamma2, "decay_gamma2"),
            (self.decay_delta_omega, "decay_delta_omega"),
            (self.amplify_gamma2, "amplify_gamma2"),
            (self.amplify_delta_omega, "amplify_delta_omega"),
        ] {
            if b.contains_zero() {
                return Err(Error::Configuration(format!(
                    "{name} bounds must exclude zero, got [{}, {}]",
                    b.lo, b.hi
                )));
            }
        }
        if self.decay_duration.lo <= 0.0 || self.amplify_horizon.lo <= 0.0 {
            return Err(Error::Configuration("durations must be positive".into()));
        }
        if !self.fidelity_floor.is_finite()
            || self.fidelity_floor <= 0.0
            || self.fidelity_floor >= 1.0
        {
            return Err(Error::Configuration(format!(
                "fidelity floor must lie in (0, 1), got {}",
                self.fidelity_floor
            )));
        }
        Ok(())
    }

    fn bounds(&self) -> [ParamBounds; DIM] {
        [
            self.decay_gamma2,
            self.decay_delta_omega,
            self.decay_duration,
            self.amplify_gamma2,
            self.amplify_delta_omega,
            self.amplify_horizon,
        ]
    }
}

/// One candidate two-segment protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateParams {
    pub decay_gamma2: f64,
    pub decay_delta_omega: f64,
    pub decay_duration: f64,
    pub amplify_gamma2: f64,
    pub amplify_delta_omega: f64,
    pub amplify_horizon: f64,
}

impl CandidateParams {
    fn from_array(x: [f64; DIM]) -> Self {
        Self {
            decay_gamma2: x[0],
            decay_delta_omega: x[1],
            decay_duration: x[2],
            amplify_gamma2: x[3],
            amplify_delta_omega: x[4],
            amplify_horizon: x[5],
        }
    }

    /// Parameters in search order: decay `(gamma2, delta_omega, duration)`,
    /// then amplify `(gamma2, delta_omega, horizon)`.
    pub fn to_array(self) -> [f64; DIM] {
        [
            self.decay_gamma2,
            self.decay_delta_omega,
            self.decay_duration,
            self.amplify_gamma2,
            self.amplify_delta_omega,
            self.amplify_horizon,
        ]
    }

    /// The reference-protocol parameters with the given switch horizon.
    pub fn reference(horizon: f64) -> Self {
        Self {
            decay_gamma2: -0.95,
            decay_delta_omega: 10.0,
            decay_duration: 3.0,
            amplify_gamma2: -0.25,
            amplify_delta_omega: -0.01,
            amplify_horizon: horizon,
        }
    }
}

/// Build and run the candidate protocol, cutting the amplification when the
/// target intensity reaches one.
pub fn candidate_protocol(params: &CandidateParams, psi0: &StateVector) -> Result<Protocol> {
    let decay = decay_segment_params(SegmentSpec {
        delta_omega: params.decay_delta_omega,
        gamma2: params.decay_gamma2,
    })?;
    let amplify = amplify_segment_params(SegmentSpec {
        delta_omega: params.amplify_delta_omega,
        gamma2: params.amplify_gamma2,
    })?;
    let h_decay = build_hamiltonian_2(&decay);
    let h_amplify = build_hamiltonian_2(&amplify);
    let target = StateVector::basis(2, 0)?;

    let decay_segment = ProtocolSegment::new(h_decay, 0.0, params.decay_duration)?;
    let cut = find_switch_time(
        &decay_segment,
        &h_amplify,
        psi0,
        &target,
        params.amplify_horizon,
    )?;
    let mut segments = vec![decay_segment];
    if cut > params.decay_duration + 1e-12 {
        segments.push(ProtocolSegment::new(h_amplify, params.decay_duration, cut)?);
    }
    Protocol::new(segments, target)
}

/// Deterministic candidate evaluation. Infeasible parameters return
/// `(infinity, 0.0)` instead of an error.
pub fn evaluate_candidate(
    objective: CostObjective,
    params: &CandidateParams,
    psi0: &StateVector,
) -> (f64, f64) {
    let run = || -> Result<(f64, f64)> {
        let protocol = candidate_protocol(params, psi0)?;
        // Endpoints only; dense sampling is wasted work here.
        let config = PropagationConfig { sample_stride: usize::MAX / 2, ..Default::default() };
        let (_, report) = run_protocol(&protocol, psi0, &config)?;
        let cost = objective.of(&cost_report(&protocol));
        Ok((cost, report.final_population))
    };
    run().unwrap_or((f64::INFINITY, 0.0))
}

/// One evaluated candidate in the search history.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub params: CandidateParams,
    pub cost: f64,
    pub fidelity: f64,
}

/// Outcome of a search: the feasible minimum-cost candidate and the full
/// evaluation history.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_params: CandidateParams,
    pub best_cost: f64,
    pub fidelity: f64,
    pub evaluations: usize,
    pub history: Vec<HistoryEntry>,
}

struct Evaluator {
    objective: CostObjective,
    fidelity_floor: f64,
    psi0: StateVector,
    budget: usize,
    history: Vec<HistoryEntry>,
}

impl Evaluator {
    /// Death-penalty score; `None` once the budget is exhausted.
    fn score(&mut self, x: [f64; DIM]) -> Option<f64> {
        if self.history.len() >= self.budget {
            return None;
        }
        let params = CandidateParams::from_array(x);
        let (cost, fidelity) = evaluate_candidate(self.objective, &params, &self.psi0);
        self.history.push(HistoryEntry { params, cost, fidelity });
        Some(if fidelity >= self.fidelity_floor { cost } else { f64::INFINITY })
    }
}

/// Nelder-Mead simplex search with seeded random restarts over the search
/// space, starting from the bounds center. Evaluations run sequentially, so
/// identical `(space, budget, seed)` reproduce identical results.
pub fn optimize(space: &SearchSpace, budget: usize, seed: u64) -> Result<OptimizationResult> {
    space.validate()?;
    if budget == 0 {
        return Err(Error::Configuration("budget must be at least 1".into()));
    }
    let bounds = space.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eval = Evaluator {
        objective: space.cost_objective,
        fidelity_floor: space.fidelity_floor,
        psi0: StateVector::basis(2, 1)?,
        budget,
        history: Vec::new(),
    };

    let mut first = true;
    'restarts: while eval.history.len() < eval.budget {
        let start: [f64; DIM] = if first {
            first = false;
            std::array::from_fn(|i| bounds[i].center())
        } else {
            std::array::from_fn(|i| {
                if bounds[i].width() == 0.0 {
                    bounds[i].lo
                } else {
                    rng.gen_range(bounds[i].lo..=bounds[i].hi)
                }
            })
        };
        if nelder_mead(&mut eval, &bounds, start).is_none() {
            break 'restarts;
        }
    }

    let evaluations = eval.history.len();
    let best = eval
        .history
        .iter()
        .filter(|e| e.fidelity >= space.fidelity_floor && e.cost.is_finite())
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .cloned();
    match best {
        Some(b) => Ok(OptimizationResult {
            best_params: b.params,
            best_cost: b.cost,
            fidelity: b.fidelity,
            evaluations,
            history: eval.history,
        }),
        None => Err(Error::NoFeasiblePoint { evaluations, history: eval.history }),
    }
}

/// Standard reflect/expand/contract/shrink simplex loop. Returns `None` when
/// the evaluation budget runs out mid-search, `Some(())` on convergence.
fn nelder_mead(
    eval: &mut Evaluator,
    bounds: &[ParamBounds; DIM],
    start: [f64; DIM],
) -> Option<()> {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let clamp = |x: [f64; DIM]| -> [f64; DIM] { std::array::from_fn(|i| bounds[i].clamp(x[i])) };

    let mut simplex: Vec<([f64; DIM], f64)> = Vec::with_capacity(DIM + 1);
    let s0 = clamp(start);
    simplex.push((s0, eval.score(s0)?));
    for i in 0..DIM {
        let mut x = s0;
        let step = 0.25 * bounds[i].width();
        x[i] = bounds[i].clamp(if x[i] + step <= bounds[i].hi { x[i] + step } else { x[i] - step });
        let x = clamp(x);
        simplex.push((x, eval.score(x)?));
    }

    for _ in 0..10_000 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < 1e-9 {
            return Some(());
        }

        let worst = simplex[DIM].1;
        let second_worst = simplex[DIM - 1].1;
        let best = simplex[0].1;
        let centroid: [f64; DIM] = std::array::from_fn(|i| {
            simplex[..DIM].iter().map(|(x, _)| x[i]).sum::<f64>() / DIM as f64
        });

        let reflected = clamp(std::array::from_fn(|i| {
            centroid[i] + ALPHA * (centroid[i] - simplex[DIM].0[i])
        }));
        let fr = eval.score(reflected)?;

        if fr < best {
            let expanded = clamp(std::array::from_fn(|i| {
                centroid[i] + GAMMA * (reflected[i] - centroid[i])
            }));
            let fe = eval.score(expanded)?;
            simplex[DIM] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < second_worst {
            simplex[DIM] = (reflected, fr);
        } else {
            let contracted = clamp(std::array::from_fn(|i| {
                centroid[i] + RHO * (simplex[DIM].0[i] - centroid[i])
            }));
            let fc = eval.score(contracted)?;
            if fc < worst {
                simplex[DIM] = (contracted, fc);
            } else {
                let best_x = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    let shrunk = clamp(std::array::from_fn(|i| {
                        best_x[i] + SIGMA * (v.0[i] - best_x[i])
                    }));
                    *v = (shrunk, eval.score(shrunk)?);
                }
            }
        }
    }
    Some(())
}
