//! Scenario configuration: a versioned TOML document, schema-validated with
//! unknown keys rejected, plus the named presets.

use serde::{Deserialize, Serialize};

use dasa_core::dynamics::{Method, PropagationConfig};
use dasa_core::optimize::{CostObjective, ParamBounds, SearchSpace};
use dasa_core::protocol::{Dasa2Spec, Dasa3Spec, SegmentSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dasa2,
    Dasa3,
    Lz,
    Roots,
    Optimize,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Dasa2 => "dasa2",
            Mode::Dasa3 => "dasa3",
            Mode::Lz => "lz",
            Mode::Roots => "roots",
            Mode::Optimize => "optimize",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Exact,
    Rk4,
}

impl From<MethodChoice> for Method {
    fn from(m: MethodChoice) -> Self {
        match m {
            MethodChoice::Exact => Method::ExactSegment,
            MethodChoice::Rk4 => Method::Rk4,
        }
    }
}

fn default_dt() -> f64 {
    1e-3
}

fn default_method() -> MethodChoice {
    MethodChoice::Exact
}

fn default_stride() -> usize {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_method")]
    pub method: MethodChoice,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
}

impl Default for PropagationSection {
    fn default() -> Self {
        Self { dt: default_dt(), method: default_method(), sample_stride: default_stride() }
    }
}

impl PropagationSection {
    pub fn to_core(&self) -> PropagationConfig {
        PropagationConfig {
            dt: self.dt,
            method: self.method.into(),
            sample_stride: self.sample_stride,
        }
    }
}

fn default_run_record() -> Option<String> {
    Some("run_record.json".into())
}

fn default_trajectory_csv() -> Option<String> {
    Some("trajectory.csv".into())
}

fn default_roots_csv() -> Option<String> {
    Some("roots.csv".into())
}

fn default_history_csv() -> Option<String> {
    Some("history.csv".into())
}

/// Output file names, relative to the run's output directory. A mode only
/// emits the files relevant to it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_trajectory_csv", skip_serializing_if = "Option::is_none")]
    pub trajectory_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub populations_svg: Option<String>,
    #[serde(default = "default_roots_csv", skip_serializing_if = "Option::is_none")]
    pub roots_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots_svg: Option<String>,
    #[serde(default = "default_history_csv", skip_serializing_if = "Option::is_none")]
    pub history_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_txt: Option<String>,
    #[serde(default = "default_run_record", skip_serializing_if = "Option::is_none")]
    pub run_record: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            trajectory_csv: default_trajectory_csv(),
            populations_svg: None,
            roots_csv: default_roots_csv(),
            roots_svg: None,
            history_csv: default_history_csv(),
            report_txt: None,
            run_record: default_run_record(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSection {
    pub delta_omega: f64,
    pub gamma2: f64,
}

impl From<SegmentSection> for SegmentSpec {
    fn from(s: SegmentSection) -> Self {
        SegmentSpec { delta_omega: s.delta_omega, gamma2: s.gamma2 }
    }
}

fn decay_default() -> SegmentSection {
    SegmentSection { delta_omega: 10.0, gamma2: -0.95 }
}

fn amplify_default() -> SegmentSection {
    SegmentSection { delta_omega: -0.01, gamma2: -0.25 }
}

fn default_t_start() -> f64 {
    -15.0
}

fn default_t_switch() -> f64 {
    -12.0
}

fn default_t_end_2() -> f64 {
    -11.358
}

fn default_t_end_3() -> f64 {
    -10.7374
}

fn default_middle() -> f64 {
    15.0
}

fn default_horizon() -> f64 {
    3.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dasa2Section {
    #[serde(default = "decay_default")]
    pub decay: SegmentSection,
    #[serde(default = "amplify_default")]
    pub amplify: SegmentSection,
    #[serde(default = "default_t_start")]
    pub t_start: f64,
    #[serde(default = "default_t_switch")]
    pub t_switch: f64,
    #[serde(default = "default_t_end_2")]
    pub t_end: f64,
    /// Recompute `t_end` by searching for the intensity-one crossing.
    #[serde(default)]
    pub find_switch: bool,
    #[serde(default = "default_horizon")]
    pub switch_horizon: f64,
    /// Extend the emitted trajectory through the identity tail to this time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_until: Option<f64>,
}

impl Default for Dasa2Section {
    fn default() -> Self {
        Self {
            decay: decay_default(),
            amplify: amplify_default(),
            t_start: default_t_start(),
            t_switch: default_t_switch(),
            t_end: default_t_end_2(),
            find_switch: false,
            switch_horizon: default_horizon(),
            tail_until: None,
        }
    }
}

impl Dasa2Section {
    pub fn to_spec(&self) -> Dasa2Spec {
        Dasa2Spec {
            decay: self.decay.into(),
            amplify: self.amplify.into(),
            t_start: self.t_start,
            t_switch: self.t_switch,
            t_end: self.t_end,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dasa3Section {
    #[serde(default = "decay_default")]
    pub decay: SegmentSection,
    #[serde(default = "amplify_default")]
    pub amplify: SegmentSection,
    #[serde(default = "default_middle")]
    pub middle_potential: f64,
    #[serde(default = "default_t_start")]
    pub t_start: f64,
    #[serde(default = "default_t_switch")]
    pub t_switch: f64,
    #[serde(default = "default_t_end_3")]
    pub t_end: f64,
    #[serde(default)]
    pub find_switch: bool,
    #[serde(default = "default_horizon")]
    pub switch_horizon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_until: Option<f64>,
}

impl Default for Dasa3Section {
    fn default() -> Self {
        Self {
            decay: decay_default(),
            amplify: amplify_default(),
            middle_potential: default_middle(),
            t_start: default_t_start(),
            t_switch: default_t_switch(),
            t_end: default_t_end_3(),
            find_switch: false,
            switch_horizon: default_horizon(),
            tail_until: None,
        }
    }
}

impl Dasa3Section {
    pub fn to_spec(&self) -> Dasa3Spec {
        Dasa3Spec {
            decay: self.decay.into(),
            amplify: self.amplify.into(),
            middle_potential: self.middle_potential,
            t_start: self.t_start,
            t_switch: self.t_switch,
            t_end: self.t_end,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub t_start: f64,
    pub t_end: f64,
}

fn default_epsilons() -> Vec<f64> {
    vec![0.5]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LzSection {
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// Explicit window; omitted means the symmetric default per epsilon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSection>,
}

impl Default for LzSection {
    fn default() -> Self {
        Self { epsilons: default_epsilons(), window: None }
    }
}

fn default_gamma2_min() -> f64 {
    -3.0
}

fn default_gamma2_max() -> f64 {
    -0.05
}

fn default_gamma2_steps() -> usize {
    60
}

fn default_delta_omegas() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 4.0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsSection {
    #[serde(default = "default_gamma2_min")]
    pub gamma2_min: f64,
    #[serde(default = "default_gamma2_max")]
    pub gamma2_max: f64,
    #[serde(default = "default_gamma2_steps")]
    pub gamma2_steps: usize,
    #[serde(default = "default_delta_omegas")]
    pub delta_omegas: Vec<f64>,
}

impl Default for RootsSection {
    fn default() -> Self {
        Self {
            gamma2_min: default_gamma2_min(),
            gamma2_max: default_gamma2_max(),
            gamma2_steps: default_gamma2_steps(),
            delta_omegas: default_delta_omegas(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveChoice {
    MaxAbsGamma,
    SumAbsGainIntegrals,
    ActiveDuration,
}

impl From<ObjectiveChoice> for CostObjective {
    fn from(o: ObjectiveChoice) -> Self {
        match o {
            ObjectiveChoice::MaxAbsGamma => CostObjective::MaxAbsGamma,
            ObjectiveChoice::SumAbsGainIntegrals => CostObjective::SumAbsGainIntegrals,
            ObjectiveChoice::ActiveDuration => CostObjective::ActiveDuration,
        }
    }
}

fn default_seed() -> u64 {
    7
}

fn default_budget() -> usize {
    500
}

fn default_floor() -> f64 {
    0.99
}

fn default_objective() -> ObjectiveChoice {
    ObjectiveChoice::MaxAbsGamma
}

fn b(lo: f64, hi: f64) -> [f64; 2] {
    [lo, hi]
}

fn default_bounds_decay_gamma2() -> [f64; 2] {
    b(-1.2, -0.7)
}

fn default_bounds_decay_delta_omega() -> [f64; 2] {
    b(8.0, 12.0)
}

fn default_bounds_decay_duration() -> [f64; 2] {
    b(2.5, 3.5)
}

fn default_bounds_amplify_gamma2() -> [f64; 2] {
    b(-0.6, -0.2)
}

fn default_bounds_amplify_delta_omega() -> [f64; 2] {
    b(-0.05, -0.005)
}

fn default_bounds_amplify_horizon() -> [f64; 2] {
    b(0.5, 4.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    #[serde(default = "default_bounds_decay_gamma2")]
    pub decay_gamma2: [f64; 2],
    #[serde(default = "default_bounds_decay_delta_omega")]
    pub decay_delta_omega: [f64; 2],
    #[serde(default = "default_bounds_decay_duration")]
    pub decay_duration: [f64; 2],
    #[serde(default = "default_bounds_amplify_gamma2")]
    pub amplify_gamma2: [f64; 2],
    #[serde(default = "default_bounds_amplify_delta_omega")]
    pub amplify_delta_omega: [f64; 2],
    #[serde(default = "default_bounds_amplify_horizon")]
    pub amplify_horizon: [f64; 2],
}

impl Default for BoundsSection {
    fn default() -> Self {
        Self {
            decay_gamma2: default_bounds_decay_gamma2(),
            decay_delta_omega: default_bounds_decay_delta_omega(),
            decay_duration: default_bounds_decay_duration(),
            amplify_gamma2: default_bounds_amplify_gamma2(),
            amplify_delta_omega: default_bounds_amplify_delta_omega(),
            amplify_horizon: default_bounds_amplify_horizon(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_floor")]
    pub fidelity_floor: f64,
    #[serde(default = "default_objective")]
    pub cost_objective: ObjectiveChoice,
    #[serde(default)]
    pub bounds: BoundsSection,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            budget: default_budget(),
            fidelity_floor: default_floor(),
            cost_objective: default_objective(),
            bounds: BoundsSection::default(),
        }
    }
}

impl OptimizeSection {
    pub fn to_space(&self) -> SearchSpace {
        let pb = |x: [f64; 2]| ParamBounds::new(x[0], x[1]);
        SearchSpace {
            decay_gamma2: pb(self.bounds.decay_gamma2),
            decay_delta_omega: pb(self.bounds.decay_delta_omega),
            decay_duration: pb(self.bounds.decay_duration),
            amplify_gamma2: pb(self.bounds.amplify_gamma2),
            amplify_delta_omega: pb(self.bounds.amplify_delta_omega),
            amplify_horizon: pb(self.bounds.amplify_horizon),
            fidelity_floor: self.fidelity_floor,
            cost_objective: self.cost_objective.into(),
        }
    }
}

/// One run scenario. Unknown keys anywhere are rejected at parse time, and
/// mode-specific sections may only appear for their own mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub mode: Mode,
    #[serde(default)]
    pub propagation: PropagationSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dasa2: Option<Dasa2Section>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dasa3: Option<Dasa3Section>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lz: Option<LzSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeSection>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let sections: [(&str, bool); 5] = [
            ("dasa2", self.dasa2.is_some()),
            ("dasa3", self.dasa3.is_some()),
            ("lz", self.lz.is_some()),
            ("roots", self.roots.is_some()),
            ("optimize", self.optimize.is_some()),
        ];
        for (name, present) in sections {
            if present && name != self.mode.as_str() {
                return Err(format!(
                    "section [{name}] is not allowed in mode {}",
                    self.mode.as_str()
                ));
            }
        }
        if !self.propagation.dt.is_finite() || self.propagation.dt <= 0.0 {
            return Err(format!("propagation.dt must be positive, got {}", self.propagation.dt));
        }
        if self.propagation.sample_stride == 0 {
            return Err("propagation.sample_stride must be >= 1".into());
        }
        if let Some(lz) = &self.lz {
            if lz.epsilons.is_empty() {
                return Err("lz.epsilons must be non-empty".into());
            }
            if lz.epsilons.iter().any(|e| !e.is_finite() || *e <= 0.0) {
                return Err("lz.epsilons must all be positive".into());
            }
        }
        if let Some(r) = &self.roots {
            if r.gamma2_min >= r.gamma2_max {
                return Err("roots gamma2 range must have min < max".into());
            }
            if r.gamma2_min <= 0.0 && r.gamma2_max >= 0.0 {
                return Err("roots gamma2 range must exclude zero".into());
            }
            if r.gamma2_steps < 2 {
                return Err("roots.gamma2_steps must be >= 2".into());
            }
            if r.delta_omegas.is_empty() || r.delta_omegas.contains(&0.0) {
                return Err("roots.delta_omegas must be non-empty and nonzero".into());
            }
        }
        Ok(())
    }

    fn with_mode(mode: Mode) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            mode,
            propagation: PropagationSection::default(),
            output: OutputSection::default(),
            dasa2: None,
            dasa3: None,
            lz: None,
            roots: None,
            optimize: None,
        }
    }
}

/// Built-in preset scenarios reproducing the reference figures.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    match name {
        "dasa2" => {
            let mut cfg = ScenarioConfig::with_mode(Mode::Dasa2);
            cfg.dasa2 = Some(Dasa2Section { tail_until: Some(-10.0), ..Default::default() });
            cfg.output.populations_svg = Some("populations.svg".into());
            cfg.output.report_txt = Some("report.txt".into());
            Some(cfg)
        }
        "dasa3" => {
            let mut cfg = ScenarioConfig::with_mode(Mode::Dasa3);
            cfg.dasa3 = Some(Dasa3Section { tail_until: Some(-9.5), ..Default::default() });
            cfg.output.populations_svg = Some("populations.svg".into());
            cfg.output.report_txt = Some("report.txt".into());
            Some(cfg)
        }
        "lz" => {
            let mut cfg = ScenarioConfig::with_mode(Mode::Lz);
            cfg.lz = Some(LzSection { epsilons: vec![0.5, 1.0, 2.0], window: None });
            cfg.propagation.method = MethodChoice::Rk4;
            cfg.propagation.sample_stride = 1000;
            cfg.output.report_txt = Some("report.txt".into());
            Some(cfg)
        }
        "roots" => {
            let mut cfg = ScenarioConfig::with_mode(Mode::Roots);
            cfg.roots = Some(RootsSection::default());
            cfg.output.roots_svg = Some("roots.svg".into());
            Some(cfg)
        }
        "optimize" => {
            let mut cfg = ScenarioConfig::with_mode(Mode::Optimize);
            cfg.optimize = Some(OptimizeSection::default());
            cfg.output.report_txt = Some("report.txt".into());
            Some(cfg)
        }
        _ => None,
    }
}

pub fn preset_names() -> [(&'static str, &'static str); 5] {
    [
        ("dasa2", "two-level gain/loss transfer protocol, reference parameters"),
        ("dasa3", "three-level chain transfer protocol, reference parameters"),
        ("lz", "Landau-Zener sweeps at eps = 0.5, 1, 2 vs the analytic transfer"),
        ("roots", "real roots of the class cubic over a (gamma2, delta_omega) grid"),
        ("optimize", "cost-constrained search around the reference protocol"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ScenarioConfig::parse("schema_version = 1\nmode = \"dasa2\"\n").unwrap();
        assert_eq!(cfg.mode, Mode::Dasa2);
        assert_eq!(cfg.propagation.dt, 1e-3);
        assert_eq!(cfg.output.trajectory_csv.as_deref(), Some("trajectory.csv"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ScenarioConfig::parse("schema_version = 1\nmode = \"lz\"\nbogus = 3\n")
            .unwrap_err();
        assert!(err.contains("bogus"), "{err}");
        let err = ScenarioConfig::parse(
            "schema_version = 1\nmode = \"lz\"\n[lz]\nepsilons = [0.5]\nnope = 1\n",
        )
        .unwrap_err();
        assert!(err.contains("nope"), "{err}");
    }

    #[test]
    fn wrong_mode_section_is_rejected() {
        let err = ScenarioConfig::parse(
            "schema_version = 1\nmode = \"lz\"\n[dasa2]\nt_start = -15.0\n",
        )
        .unwrap_err();
        assert!(err.contains("not allowed"), "{err}");
    }

    #[test]
    fn schema_version_is_checked() {
        let err = ScenarioConfig::parse("schema_version = 9\nmode = \"dasa2\"\n").unwrap_err();
        assert!(err.contains("schema_version"), "{err}");
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for (name, _) in preset_names() {
            let cfg = preset(name).unwrap();
            let text = cfg.to_toml();
            let back = ScenarioConfig::parse(&text).unwrap();
            assert_eq!(back.mode, cfg.mode, "preset {name}");
        }
        assert!(preset("unknown").is_none());
    }
}
