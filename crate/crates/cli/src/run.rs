//! Scenario execution: simulate a configured mode, emit its files, and
//! collect the metrics the comparison report needs.

use std::path::Path;

use rayon::prelude::*;

use dasa_core::dynamics::{StateVector, Trajectory};
use dasa_core::optimize::{optimize, OptimizationResult};
use dasa_core::protocol::{
    build_dasa_2level_from_spec, build_dasa_3level_from_spec, cost_report, find_switch_time,
    lz_analytic_transfer, lz_sweep, run_protocol_until, CostReport, LZConfig, Protocol,
};
use dasa_core::roots::gamma1_roots;

use crate::config::{Mode, ScenarioConfig};
use crate::emit::{num, trajectory_csv, Emitter, RunRecord};
use crate::svg::{Plot, Series};

/// Errors split by exit code: bad configuration (1) vs infeasible physics (2).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(dasa_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid config: {msg}"),
            CliError::Physics(e) => write!(f, "infeasible physics: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Physics-precondition failures exit 2; contract/configuration failures are
/// config errors.
pub fn classify_core(e: dasa_core::Error) -> CliError {
    use dasa_core::Error::*;
    match e {
        UnsupportedRegime(_) | SingularParameter(_) | ExceptionalPoint { .. }
        | SpectralValidation(_) | NoCrossing { .. } | NoFeasiblePoint { .. } => {
            CliError::Physics(e)
        }
        Configuration(_) | InvalidParameter(_) | DimensionMismatch { .. } => {
            CliError::Config(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Physics(_) => 2,
        }
    }
}

/// Aggregates shared by the comparison table.
#[derive(Debug, Clone, Default)]
pub struct RunMetrics {
    pub mode: String,
    pub fidelity: Option<f64>,
    pub active_duration: Option<f64>,
    pub max_abs_gamma: Option<f64>,
    pub per_site_gain_integrals: Vec<f64>,
    pub sigma_gamma_integral: Option<f64>,
    pub sum_abs_gain_integrals: Option<f64>,
    /// Site gammas of each active segment.
    pub segment_gammas: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct RootRow {
    pub delta_omega: f64,
    pub gamma2: f64,
    pub gamma1: f64,
    pub sigma_gamma: f64,
    pub residual: f64,
    pub valid: bool,
}

/// Mode-specific simulation products, kept in memory for emission.
pub enum SimData {
    Protocol {
        traj: Trajectory,
    },
    Lz {
        /// Per epsilon: (epsilon, trajectory, simulated transfer, analytic).
        runs: Vec<(f64, Trajectory, f64, f64)>,
    },
    Roots {
        rows: Vec<RootRow>,
        delta_omegas: Vec<f64>,
    },
    Optimize {
        result: OptimizationResult,
    },
}

pub struct Simulation {
    pub data: SimData,
    pub metrics: RunMetrics,
    pub report_lines: Vec<String>,
}

fn protocol_metrics(mode: &Mode, proto: &Protocol, cost: &CostReport, fidelity: f64) -> RunMetrics {
    RunMetrics {
        mode: mode.as_str().into(),
        fidelity: Some(fidelity),
        active_duration: Some(cost.active_duration),
        max_abs_gamma: Some(cost.max_abs_gamma),
        per_site_gain_integrals: cost.per_site_gain_integral.clone(),
        sigma_gamma_integral: Some(cost.sigma_gamma_integral),
        sum_abs_gain_integrals: Some(cost.sum_abs_gain_integrals()),
        segment_gammas: proto
            .segments()
            .iter()
            .map(|s| s.hamiltonian().site_gammas())
            .collect(),
    }
}

/// Run the configured scenario without touching the filesystem.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Simulation, CliError> {
    let prop = cfg.propagation.to_core();
    match cfg.mode {
        Mode::Dasa2 | Mode::Dasa3 => {
            let (mut spec2, mut spec3);
            let (find_switch, horizon, tail_until, dim);
            match cfg.mode {
                Mode::Dasa2 => {
                    let section = cfg.dasa2.clone().unwrap_or_default();
                    spec2 = Some(section.to_spec());
                    spec3 = None;
                    find_switch = section.find_switch;
                    horizon = section.switch_horizon;
                    tail_until = section.tail_until;
                    dim = 2;
                }
                _ => {
                    let section = cfg.dasa3.clone().unwrap_or_default();
                    spec3 = Some(section.to_spec());
                    spec2 = None;
                    find_switch = section.find_switch;
                    horizon = section.switch_horizon;
                    tail_until = section.tail_until;
                    dim = 3;
                }
            }
            let psi0 = StateVector::basis(dim, dim - 1).map_err(classify_core)?;

            let build = |s2: &Option<dasa_core::protocol::Dasa2Spec>,
                         s3: &Option<dasa_core::protocol::Dasa3Spec>|
             -> Result<Protocol, CliError> {
                match (s2, s3) {
                    (Some(s), None) => build_dasa_2level_from_spec(s).map_err(classify_core),
                    (None, Some(s)) => build_dasa_3level_from_spec(s).map_err(classify_core),
                    _ => unreachable!("exactly one spec is set"),
                }
            };

            let mut found_switch = None;
            if find_switch {
                let probe = build(&spec2, &spec3)?;
                let cut = find_switch_time(
                    &probe.segments()[0],
                    probe.segments()[1].hamiltonian(),
                    &psi0,
                    probe.target(),
                    horizon,
                )
                .map_err(classify_core)?;
                if let Some(s) = spec2.as_mut() {
                    s.t_end = cut;
                }
                if let Some(s) = spec3.as_mut() {
                    s.t_end = cut;
                }
                found_switch = Some(cut);
            }

            let protocol = build(&spec2, &spec3)?;
            let t_final = tail_until.unwrap_or(protocol.end_time());
            let (traj, report) =
                run_protocol_until(&protocol, &psi0, &prop, t_final).map_err(classify_core)?;
            let cost = cost_report(&protocol);

            let mut lines = vec![format!(
                "{}: transfer across a {dim}-site chain, protocol on [{}, {}]",
                cfg.mode.as_str(),
                protocol.start_time(),
                protocol.end_time()
            )];
            if let Some(cut) = found_switch {
                lines.push(format!("  switch search cut the gain segment at t = {cut:.6}"));
            }
            let final_pops = traj
                .populations()
                .iter()
                .zip(traj.times())
                .find(|(_, t)| **t >= protocol.end_time())
                .map(|(p, _)| p.clone())
                .unwrap_or_else(|| traj.populations().last().unwrap().clone());
            lines.push(format!(
                "  populations at protocol end: [{}]",
                final_pops.iter().map(|p| format!("{p:.6}")).collect::<Vec<_>>().join(", ")
            ));
            lines.push(format!("  target intensity (fidelity): {:.6}", report.final_population));
            if let Some(t) = report.transfer_complete_time {
                lines.push(format!("  transfer complete (>= 0.99) from t = {t:.6}"));
            }
            lines.push(format!(
                "  cost: duration {:.6}, peak |gamma| {:.6}, per-site gain integrals [{}], \
                 sigma-gamma integral {:.6}, sum |integrals| {:.6}",
                cost.active_duration,
                cost.max_abs_gamma,
                cost.per_site_gain_integral
                    .iter()
                    .map(|x| format!("{x:.6}"))
                    .collect::<Vec<_>>()
                    .join(", "),
                cost.sigma_gamma_integral,
                cost.sum_abs_gain_integrals(),
            ));

            let metrics = protocol_metrics(&cfg.mode, &protocol, &cost, report.final_population);
            Ok(Simulation { data: SimData::Protocol { traj }, metrics, report_lines: lines })
        }
        Mode::Lz => {
            let section = cfg.lz.clone().unwrap_or_default();
            let runs: Result<Vec<_>, CliError> = section
                .epsilons
                .par_iter()
                .map(|&eps| {
                    let lz_cfg = match section.window {
                        Some(w) => LZConfig::new(eps, w.t_start, w.t_end),
                        None => LZConfig::symmetric(eps),
                    }
                    .map_err(classify_core)?;
                    let (traj, report) = lz_sweep(&lz_cfg, &prop).map_err(classify_core)?;
                    Ok((eps, traj, report.final_population, lz_analytic_transfer(eps)))
                })
                .collect();
            let runs = runs?;
            let mut lines = Vec::new();
            for (eps, _, sim, ana) in &runs {
                lines.push(format!(
                    "lz eps = {eps}: simulated transfer {sim:.6}, analytic {ana:.6}, |diff| {:.3e}",
                    (sim - ana).abs()
                ));
            }
            let window_span = |eps: f64| match section.window {
                Some(w) => w.t_end - w.t_start,
                None => 100.0 / (eps * eps),
            };
            let metrics = RunMetrics {
                mode: cfg.mode.as_str().into(),
                fidelity: runs.first().map(|r| r.2),
                active_duration: runs.first().map(|r| window_span(r.0)),
                max_abs_gamma: Some(0.0),
                per_site_gain_integrals: vec![0.0, 0.0],
                sigma_gamma_integral: Some(0.0),
                sum_abs_gain_integrals: Some(0.0),
                segment_gammas: Vec::new(),
            };
            Ok(Simulation { data: SimData::Lz { runs }, metrics, report_lines: lines })
        }
        Mode::Roots => {
            let section = cfg.roots.clone().unwrap_or_default();
            let n = section.gamma2_steps;
            let grid: Vec<f64> = (0..n)
                .map(|k| {
                    section.gamma2_min
                        + k as f64 * (section.gamma2_max - section.gamma2_min) / (n - 1) as f64
                })
                .collect();
            let rows: Result<Vec<Vec<RootRow>>, CliError> = section
                .delta_omegas
                .par_iter()
                .map(|&dw| {
                    let mut out = Vec::new();
                    for &g2 in &grid {
                        let set = gamma1_roots(dw, g2).map_err(classify_core)?;
                        for r in &set.roots {
                            out.push(RootRow {
                                delta_omega: dw,
                                gamma2: g2,
                                gamma1: r.gamma1,
                                sigma_gamma: r.sigma_gamma,
                                residual: r.residual,
                                valid: r.valid,
                            });
                        }
                    }
                    Ok(out)
                })
                .collect();
            let rows: Vec<RootRow> = rows?.into_iter().flatten().collect();
            let lines = vec![format!(
                "roots: {} real roots over {} grid points ({} detunings x {} gamma2 values)",
                rows.len(),
                section.delta_omegas.len() * n,
                section.delta_omegas.len(),
                n
            )];
            let metrics = RunMetrics { mode: cfg.mode.as_str().into(), ..Default::default() };
            Ok(Simulation {
                data: SimData::Roots { rows, delta_omegas: section.delta_omegas.clone() },
                metrics,
                report_lines: lines,
            })
        }
        Mode::Optimize => {
            let section = cfg.optimize.clone().unwrap_or_default();
            let space = section.to_space();
            let result =
                optimize(&space, section.budget, section.seed).map_err(classify_core)?;
            let p = result.best_params;
            let lines = vec![
                format!(
                    "optimize: best cost {:.6} (objective {:?}) with fidelity {:.6} after {} evaluations",
                    result.best_cost, section.cost_objective, result.fidelity, result.evaluations
                ),
                format!(
                    "  best params: decay (gamma2 {:.6}, delta_omega {:.6}, duration {:.6}), \
                     amplify (gamma2 {:.6}, delta_omega {:.6}, horizon {:.6})",
                    p.decay_gamma2,
                    p.decay_delta_omega,
                    p.decay_duration,
                    p.amplify_gamma2,
                    p.amplify_delta_omega,
                    p.amplify_horizon
                ),
            ];
            let metrics = RunMetrics {
                mode: cfg.mode.as_str().into(),
                fidelity: Some(result.fidelity),
                ..Default::default()
            };
            Ok(Simulation { data: SimData::Optimize { result }, metrics, report_lines: lines })
        }
    }
}

fn suffixed(name: &str, suffix: &str) -> String {
    match name.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}{suffix}.{ext}"),
        None => format!("{name}{suffix}"),
    }
}

fn population_plot(title: &str, traj: &Trajectory) -> Plot {
    let dim = traj.states()[0].dim();
    let labels: Vec<String> = match dim {
        2 => vec!["(1,0)".into(), "(0,1)".into()],
        _ => vec!["(1,0,0)".into(), "(0,1,0)".into(), "(0,0,1)".into()],
    };
    let series = (0..dim)
        .map(|i| Series {
            label: format!("|{}|^2", labels[i]),
            points: traj
                .times()
                .iter()
                .zip(traj.populations())
                .map(|(t, p)| (*t, p[i]))
                .collect(),
            scatter: false,
        })
        .collect();
    Plot {
        title: title.into(),
        x_label: "t (coupling units)".into(),
        y_label: "intensity".into(),
        series,
    }
}

/// Simulate, write the configured outputs, and finish with the run record.
pub fn execute(cfg: &ScenarioConfig, out_dir: &Path) -> Result<Simulation, CliError> {
    let started_utc = chrono::Utc::now().to_rfc3339();
    let sim = simulate(cfg)?;
    let mut emitter = Emitter::new(out_dir)?;

    match &sim.data {
        SimData::Protocol { traj, .. } => {
            if let Some(name) = &cfg.output.trajectory_csv {
                emitter.write(name, &trajectory_csv(traj))?;
            }
            if let Some(name) = &cfg.output.populations_svg {
                let title = format!("{} bare-state populations", cfg.mode.as_str());
                emitter.write(name, &population_plot(&title, traj).render())?;
            }
        }
        SimData::Lz { runs } => {
            let single = runs.len() == 1;
            for (eps, traj, _, _) in runs {
                if let Some(name) = &cfg.output.trajectory_csv {
                    let file =
                        if single { name.clone() } else { suffixed(name, &format!("_eps{eps}")) };
                    emitter.write(&file, &trajectory_csv(traj))?;
                }
                if let Some(name) = &cfg.output.populations_svg {
                    let file =
                        if single { name.clone() } else { suffixed(name, &format!("_eps{eps}")) };
                    let title = format!("sweep populations, eps = {eps}");
                    emitter.write(&file, &population_plot(&title, traj).render())?;
                }
            }
        }
        SimData::Roots { rows, delta_omegas } => {
            if let Some(name) = &cfg.output.roots_csv {
                let mut csv =
                    String::from("gamma2,delta_omega,gamma1,sigma_gamma,residual,valid\n");
                for r in rows {
                    csv.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        num(r.gamma2),
                        num(r.delta_omega),
                        num(r.gamma1),
                        num(r.sigma_gamma),
                        num(r.residual),
                        r.valid
                    ));
                }
                emitter.write(name, &csv)?;
            }
            if let Some(name) = &cfg.output.roots_svg {
                for (k, dw) in delta_omegas.iter().enumerate() {
                    let pick = |want_valid: bool| -> Vec<(f64, f64)> {
                        rows.iter()
                            .filter(|r| r.delta_omega == *dw && r.valid == want_valid)
                            .map(|r| (r.gamma2, r.gamma1))
                            .collect()
                    };
                    let plot = Plot {
                        title: format!("real gamma1 roots, delta_omega = {dw}"),
                        x_label: "gamma2".into(),
                        y_label: "gamma1".into(),
                        series: vec![
                            Series { label: "valid".into(), points: pick(true), scatter: true },
                            Series {
                                label: "invalid (sigma ~ 0)".into(),
                                points: pick(false),
                                scatter: true,
                            },
                        ],
                    };
                    emitter.write(&suffixed(name, &format!("_dw{k}")), &plot.render())?;
                }
            }
        }
        SimData::Optimize { result } => {
            if let Some(name) = &cfg.output.history_csv {
                let mut csv = String::from(
                    "eval,decay_gamma2,decay_delta_omega,decay_duration,amplify_gamma2,\
                     amplify_delta_omega,amplify_horizon,cost,fidelity\n",
                );
                for (k, e) in result.history.iter().enumerate() {
                    let p = e.params.to_array();
                    csv.push_str(&format!(
                        "{k},{},{},{},{},{},{},{},{}\n",
                        num(p[0]),
                        num(p[1]),
                        num(p[2]),
                        num(p[3]),
                        num(p[4]),
                        num(p[5]),
                        num(e.cost),
                        num(e.fidelity)
                    ));
                }
                emitter.write(name, &csv)?;
            }
        }
    }

    if let Some(name) = &cfg.output.report_txt {
        let mut text = sim.report_lines.join("\n");
        text.push('\n');
        emitter.write(name, &text)?;
    }
    if let Some(name) = &cfg.output.run_record {
        let record = RunRecord::new(
            cfg.mode.as_str(),
            started_utc,
            cfg.to_toml(),
            emitter.outputs().to_vec(),
        );
        emitter.write(name, &record.to_json())?;
    }
    Ok(sim)
}
