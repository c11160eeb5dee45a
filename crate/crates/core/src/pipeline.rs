//! End-to-end orchestration: reduce, grid, certify, synthesize, refine and
//! simulate, with the interchange artifacts written by the command-line tool.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::abstraction::{balanced_truncation, build_abstraction, build_grid, input_grid, FiniteAbstraction, GridPartition, ReducedModel};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::logic::{translate, Dfa, DfaFile};
use crate::model::{LabellingMap, LinearGaussianModel, Rect};
use crate::refinement::{monte_carlo_refined, MonteCarloResult, RefinementContext};
use crate::relation::{default_gain, design_relation, project_initial, InitialState, RelationDesign, SimulationCertificate, WeightMode};
use crate::synthesis::{robust_reach, robust_scltl, upper_bound_reach, Horizon, RobustPolicy, ValueTable};

/// Version of the report layout.
pub const REPORT_SCHEMA: u32 = 1;
/// Default number of inputs per axis of the abstract input grid.
pub const DEFAULT_INPUTS_PER_AXIS: usize = 11;
/// Simulation length used when the synthesis horizon is unbounded.
pub const DEFAULT_SIMULATION_HORIZON: usize = 1000;

fn default_inputs() -> usize {
    DEFAULT_INPUTS_PER_AXIS
}

fn default_runs() -> usize {
    10_000
}

fn default_traces() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// `[lo, hi]` per reduced-state axis.
    pub bounds: Vec<[f64; 2]>,
    pub counts: Vec<usize>,
}

/// All inputs of a run. Paths are used as given; loaders resolve them
/// against the config file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: PathBuf,
    pub labels: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dfa: Option<PathBuf>,
    /// Reachability target rectangles for bound mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<Vec<[f64; 2]>>>,
    /// Feedback gain for `u = Kx`, row-major; computed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<Vec<Vec<f64>>>,
    /// Reduced order; defaults to the full state dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_order: Option<usize>,
    pub grid: GridConfig,
    #[serde(default = "default_inputs")]
    pub inputs_per_axis: usize,
    pub delta: f64,
    /// Pinned ε replacing the certified one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Synthesis horizon; absent means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation_horizon: Option<usize>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Number of sample traces kept.
    #[serde(default = "default_traces")]
    pub traces: usize,
    #[serde(default)]
    pub weight: WeightMode,
}

impl RunConfig {
    /// Read a config and make its relative paths relative to its directory.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let mut cfg: RunConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve(base);
        Ok(cfg)
    }

    pub fn resolve(&mut self, base: &Path) {
        self.model = base.join(&self.model);
        self.labels = base.join(&self.labels);
        if let Some(d) = &self.dfa {
            self.dfa = Some(base.join(d));
        }
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon.map_or(Horizon::Unbounded, Horizon::Finite)
    }

    pub fn simulation_horizon(&self) -> usize {
        self.simulation_horizon.or(self.horizon).unwrap_or(DEFAULT_SIMULATION_HORIZON)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::arg("delta must lie in [0, 1)"));
        }
        if let Some(e) = self.eps {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(Error::arg("eps must be finite and nonnegative"));
            }
        }
        if self.inputs_per_axis == 0 {
            return Err(Error::arg("inputs_per_axis must be positive"));
        }
        if self.formula.is_some() && self.dfa.is_some() {
            return Err(Error::arg("give either a formula or a DFA file, not both"));
        }
        Ok(())
    }
}

/// Pipeline stages, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Load,
    Reduce,
    Certify,
    Abstract,
    Initial,
    Synthesize,
    Simulate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Load => "load",
            Stage::Reduce => "reduce",
            Stage::Certify => "certify",
            Stage::Abstract => "abstract",
            Stage::Initial => "initial",
            Stage::Synthesize => "synthesize",
            Stage::Simulate => "simulate",
        };
        f.write_str(s)
    }
}

/// A failure tagged with the stage that produced it.
#[derive(Debug, thiserror::Error)]
#[error("stage {stage} failed: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

pub type StageResult<T> = std::result::Result<T, StageError>;

trait AtStage<T> {
    fn at(self, stage: Stage) -> StageResult<T>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> StageResult<T> {
        self.map_err(|source| StageError { stage, source })
    }
}

/// Wall-clock seconds per stage, kept out of the report for reproducibility.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<(Stage, f64)>,
}

impl Timings {
    fn record<T>(&mut self, stage: Stage, f: impl FnOnce() -> StageResult<T>) -> StageResult<T> {
        let t = Instant::now();
        let out = f()?;
        self.stages.push((stage, t.elapsed().as_secs_f64()));
        Ok(out)
    }
}

/// Artifacts accumulated by [`Pipeline::run`].
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub config: RunConfig,
    pub model: LinearGaussianModel,
    pub labels: LabellingMap,
    pub dfa: Option<Dfa>,
    pub gain: Option<Mat>,
    pub truncated: Option<ReducedModel>,
    pub grid: Option<GridPartition>,
    pub design: Option<RelationDesign>,
    /// Certificate used downstream, with ε pinned when configured.
    pub cert: Option<SimulationCertificate>,
    pub abstraction: Option<FiniteAbstraction>,
    pub initial: Option<InitialState>,
    pub values: Option<ValueTable>,
    pub policy: Option<RobustPolicy>,
    pub simulation: Option<MonteCarloResult>,
    pub timings: Timings,
}

impl Pipeline {
    /// Load model, labelling and specification.
    pub fn load(config: RunConfig) -> StageResult<Pipeline> {
        let t = Instant::now();
        config.validate().at(Stage::Load)?;
        let model = LinearGaussianModel::load(&config.model).at(Stage::Load)?;
        let labels = LabellingMap::load(&config.labels).at(Stage::Load)?;
        if labels.dim() != model.output_dim() {
            return Err(Error::dim("labelling dimension differs from the output dimension")).at(Stage::Load);
        }
        let dfa = match (&config.formula, &config.dfa) {
            (Some(f), None) => Some(translate(f, labels.atoms()).at(Stage::Load)?),
            (None, Some(p)) => {
                let file: DfaFile = serde_json::from_str(&std::fs::read_to_string(p).map_err(Error::from).at(Stage::Load)?)
                    .map_err(Error::from)
                    .at(Stage::Load)?;
                let d = Dfa::from_file(&file).at(Stage::Load)?;
                if d.atoms() != labels.atoms() {
                    return Err(Error::arg("DFA and labelling use different atom lists")).at(Stage::Load);
                }
                Some(d)
            }
            _ => None,
        };
        let timings = Timings { stages: vec![(Stage::Load, t.elapsed().as_secs_f64())] };
        Ok(Pipeline {
            config,
            model,
            labels,
            dfa,
            gain: None,
            truncated: None,
            grid: None,
            design: None,
            cert: None,
            abstraction: None,
            initial: None,
            values: None,
            policy: None,
            simulation: None,
            timings,
        })
    }

    /// Run every stage up to and including `last`.
    pub fn run(&mut self, last: Stage) -> StageResult<()> {
        for stage in [Stage::Reduce, Stage::Certify, Stage::Abstract, Stage::Initial, Stage::Synthesize, Stage::Simulate] {
            if stage > last {
                break;
            }
            let mut timings = std::mem::take(&mut self.timings);
            let r = timings.record(stage, || self.stage(stage).at(stage));
            self.timings = timings;
            r?;
        }
        Ok(())
    }

    fn stage(&mut self, stage: Stage) -> Result<()> {
        match stage {
            Stage::Load => Ok(()),
            Stage::Reduce => self.reduce(),
            Stage::Certify => self.certify(),
            Stage::Abstract => self.build(),
            Stage::Initial => self.initial_state(),
            Stage::Synthesize => self.synthesize(),
            Stage::Simulate => self.simulate(),
        }
    }

    fn reduce(&mut self) -> Result<()> {
        let k = match &self.config.gain {
            Some(rows) => linalg::rows::from_rows(rows, self.model.state_dim()).map_err(Error::Dimension)?,
            None => default_gain(&self.model)?,
        };
        if k.nrows() != self.model.input_dim() || k.ncols() != self.model.state_dim() {
            return Err(Error::dim("gain must be m×n"));
        }
        let order = self.config.reduced_order.unwrap_or(self.model.state_dim());
        self.truncated = Some(balanced_truncation(&self.model, &k, order)?);
        self.gain = Some(k);
        Ok(())
    }

    fn certify(&mut self) -> Result<()> {
        let order = self.truncated.as_ref().map_or(0, ReducedModel::order);
        let g = &self.config.grid;
        if g.bounds.len() != order {
            return Err(Error::dim("grid bounds must have one interval per reduced state"));
        }
        let grid = build_grid(&Rect::from_bounds(&g.bounds)?, &g.counts)?;
        let design = design_relation(
            &self.model,
            self.truncated.as_ref().expect("reduce stage ran"),
            self.gain.as_ref().expect("reduce stage ran"),
            &grid.widths(),
            self.config.delta,
            self.config.weight,
        )?;
        let cert = match self.config.eps {
            Some(e) => design.cert.with_eps(e),
            None => design.cert.clone(),
        };
        self.grid = Some(grid);
        self.design = Some(design);
        self.cert = Some(cert);
        Ok(())
    }

    fn build(&mut self) -> Result<()> {
        let design = self.design.as_ref().expect("certify stage ran");
        let inputs = input_grid(design.reduced.b1.ncols(), self.model.input_bound, self.config.inputs_per_axis);
        self.abstraction = Some(build_abstraction(&design.reduced, self.grid.as_ref().expect("certify stage ran"), &inputs)?);
        Ok(())
    }

    /// The initial relation must hold at the certified ε; with a pinned ε the
    /// outcome is only reported.
    fn initial_state(&mut self) -> Result<()> {
        let cert = self.cert.as_ref().expect("certify stage ran");
        let init = project_initial(cert, self.grid.as_ref().expect("certify stage ran"), self.model.x0.as_slice())?;
        if self.config.eps.is_none() && init.residual > cert.eps * cert.eps {
            return Err(Error::Infeasible(format!(
                "initial states are not related: residual {} exceeds ε² = {}",
                init.residual,
                cert.eps * cert.eps
            )));
        }
        self.initial = Some(init);
        Ok(())
    }

    fn synthesize(&mut self) -> Result<()> {
        let abs = self.abstraction.as_ref().expect("abstract stage ran");
        let eps = self.cert.as_ref().expect("certify stage ran").eps;
        let x0 = self.initial.as_ref().map(|s| s.index);
        let horizon = self.config.horizon();
        let (v, p) = match (&self.dfa, &self.config.target) {
            (Some(dfa), _) => robust_scltl(abs, dfa, &self.labels, eps, self.config.delta, horizon, x0)?,
            (None, Some(t)) => robust_reach(abs, &target_rects(t)?, eps, self.config.delta, horizon, x0)?,
            (None, None) => return Err(Error::arg("a formula, DFA or reachability target is required")),
        };
        self.values = Some(v);
        self.policy = Some(p);
        Ok(())
    }

    fn simulate(&mut self) -> Result<()> {
        let dfa = self
            .dfa
            .clone()
            .ok_or_else(|| Error::arg("simulation needs a formula or DFA"))?;
        let abs = self.abstraction.as_ref().expect("abstract stage ran");
        let ctx = RefinementContext::new(
            self.model.clone(),
            self.design.as_ref().expect("certify stage ran").reduced.clone(),
            abs.grid.clone(),
            abs.inputs.clone(),
            self.policy.clone().expect("synthesize stage ran"),
            self.cert.clone().expect("certify stage ran"),
            dfa,
            self.labels.clone(),
        )?;
        let strict = self.config.eps.is_none();
        let c = &self.config;
        self.simulation = Some(monte_carlo_refined(&ctx, c.runs, c.simulation_horizon(), c.seed, c.traces, strict)?);
        Ok(())
    }

    /// `r` at the initial abstract state.
    pub fn bound(&self) -> Option<f64> {
        self.policy.as_ref().and_then(|p| p.r)
    }

    /// Lower and upper reachability bounds for the configured target.
    pub fn reach_bounds(&self) -> StageResult<ReachBounds> {
        let t = self
            .config
            .target
            .as_ref()
            .ok_or_else(|| Error::arg("bound mode needs a reachability target"))
            .at(Stage::Synthesize)?;
        let rects = target_rects(t).at(Stage::Synthesize)?;
        let abs = self.abstraction.as_ref().expect("abstract stage ran");
        let eps = self.cert.as_ref().expect("certify stage ran").eps;
        let x0 = self.initial.as_ref().map(|s| s.index);
        let h = self.config.horizon();
        let (lo, _) = robust_reach(abs, &rects, eps, self.config.delta, h, x0).at(Stage::Synthesize)?;
        let (hi, _) = upper_bound_reach(abs, &rects, eps, self.config.delta, h, x0).at(Stage::Synthesize)?;
        let pick = |v: &ValueTable| x0.map_or(f64::NAN, |i| v.initial_values[i]);
        let (lower, upper) = (pick(&lo), pick(&hi));
        if lo.initial_values.iter().zip(&hi.initial_values).any(|(l, u)| *l > *u + 1e-12) {
            return Err(Error::NoConvergence("lower bound exceeds upper bound".into())).at(Stage::Synthesize);
        }
        Ok(ReachBounds { eps, delta: self.config.delta, lower, upper })
    }

    /// Machine-readable summary of a full run.
    pub fn report(&self) -> Report {
        let design = self.design.as_ref();
        let cert = self.cert.as_ref();
        let sim = self.simulation.as_ref();
        let r = self.bound();
        Report {
            schema: REPORT_SCHEMA,
            eps: cert.map(|c| c.eps),
            certified_eps: design.map(|d| d.cert.certified_eps),
            eps_pinned: self.config.eps.is_some(),
            delta: self.config.delta,
            lambda: design.map(|d| d.cert.lambda),
            gamma_u: design.map(|d| d.cert.gamma_u),
            gamma_w: design.map(|d| d.cert.gamma_w),
            gamma_beta: design.map(|d| d.cert.gamma_beta),
            rho: design.map(|d| d.rho),
            eta: design.map(|d| d.eta),
            interface_residual: design.map(|d| d.cert.interface_residual),
            hankel_singular_values: self.truncated.as_ref().map(|t| t.hankel.clone()),
            reduced_order: self.truncated.as_ref().map(ReducedModel::order),
            dfa_locations: self.dfa.as_ref().map(Dfa::num_locations),
            abstract_states: self.abstraction.as_ref().map(|a| a.mdp.num_states()),
            abstract_inputs: self.abstraction.as_ref().map(|a| a.inputs.len()),
            horizon: self.config.horizon,
            initial: self.initial.as_ref().map(|s| InitialReport {
                abstract_state: s.index,
                projected: s.unsnapped.clone(),
                residual: s.residual,
                related: cert.is_some_and(|c| s.residual <= c.eps * c.eps),
            }),
            r,
            value_iterations: self.values.as_ref().map(|v| v.iterations),
            simulation: sim.map(|m| SimulationReport {
                runs: m.runs,
                successes: m.successes,
                probability: m.probability,
                wilson_low: m.wilson_low,
                wilson_high: m.wilson_high,
                wilson_half_width: m.wilson_half_width,
                failsafe_runs: m.failsafe_runs,
                horizon: self.config.simulation_horizon(),
                seed: self.config.seed,
            }),
            bound_consistent: match (sim, r) {
                (Some(m), Some(r)) => Some(m.probability + 3.0 * m.wilson_half_width >= r),
                _ => None,
            },
        }
    }

    /// CSV `x1…, value` of `r` over the grid cells as initial states.
    pub fn value_curve_csv(&self) -> Option<String> {
        let v = self.values.as_ref()?;
        let grid = &self.abstraction.as_ref()?.grid;
        let mut s = String::new();
        for d in 0..grid.dim() {
            let _ = write!(s, "x{d},");
        }
        s.push_str("value\n");
        for i in 0..grid.num_cells() {
            for c in grid.center(i) {
                let _ = write!(s, "{c},");
            }
            let _ = writeln!(s, "{}", v.initial_values[i]);
        }
        Some(s)
    }

    /// Full value table as CSV; the sink has no coordinates.
    pub fn values_csv(&self) -> Option<String> {
        let v = self.values.as_ref()?;
        let grid = &self.abstraction.as_ref()?.grid;
        let n = grid.num_cells();
        Some(v.to_csv(|i| if i < n { grid.center(i) } else { vec![f64::NAN; grid.dim()] }, grid.dim()))
    }
}

fn target_rects(t: &[Vec<[f64; 2]>]) -> Result<Vec<Rect>> {
    t.iter().map(|b| Rect::from_bounds(b)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachBounds {
    pub eps: f64,
    pub delta: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialReport {
    pub abstract_state: usize,
    pub projected: Vec<f64>,
    pub residual: f64,
    /// Whether the initial pair lies in the relation at the ε used.
    pub related: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub runs: usize,
    pub successes: usize,
    pub probability: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub wilson_half_width: f64,
    pub failsafe_runs: usize,
    pub horizon: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub eps: Option<f64>,
    pub certified_eps: Option<f64>,
    pub eps_pinned: bool,
    pub delta: f64,
    pub lambda: Option<f64>,
    pub gamma_u: Option<f64>,
    pub gamma_w: Option<f64>,
    pub gamma_beta: Option<f64>,
    pub rho: Option<f64>,
    pub eta: Option<f64>,
    pub interface_residual: Option<f64>,
    pub hankel_singular_values: Option<Vec<f64>>,
    pub reduced_order: Option<usize>,
    pub dfa_locations: Option<usize>,
    pub abstract_states: Option<usize>,
    pub abstract_inputs: Option<usize>,
    pub horizon: Option<usize>,
    pub initial: Option<InitialReport>,
    pub r: Option<f64>,
    pub value_iterations: Option<usize>,
    pub simulation: Option<SimulationReport>,
    /// `p̂ + 3·half-width ≥ r`.
    pub bound_consistent: Option<bool>,
}
