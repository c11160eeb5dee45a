//! `robsynth` command-line driver.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use robsynth::logic::{translate_with_cap, DEFAULT_STATE_CAP};
use robsynth::model::LabellingMap;
use robsynth::pipeline::{Pipeline, RunConfig, Stage, StageError};
use robsynth::refinement::traces_csv;
use robsynth::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_STAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "robsynth", version, about = "Robust controller synthesis for linear-Gaussian models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an scLTL formula into a DFA file.
    Translate(TranslateArgs),
    /// Reduce the model and build the finite abstraction.
    Abstract(RunArgs),
    /// Design and certify the simulation relation.
    Certify(RunArgs),
    /// Synthesize the robust policy and its value curve.
    Synthesize(RunArgs),
    /// Refine the policy and estimate the satisfaction probability.
    Simulate(RunArgs),
    /// Lower and upper reachability bounds for a target.
    Bound(RunArgs),
    /// Every stage with a JSON report.
    Pipeline(RunArgs),
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    formula: String,
    /// Comma-separated atom names.
    #[arg(long, value_delimiter = ',', conflicts_with = "labels")]
    atoms: Vec<String>,
    /// Take the atoms from a labelling file.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, conflicts_with = "dfa")]
    formula: Option<String>,
    #[arg(long)]
    dfa: Option<PathBuf>,
    /// Per axis `lo:hi:count`, comma separated; bare counts keep the configured bounds.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    /// Pin ε instead of using the certified value.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, conflicts_with = "unbounded")]
    horizon: Option<usize>,
    #[arg(long)]
    unbounded: bool,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Translate(a) => return cmd_translate(&a),
        Command::Abstract(a) => run(&a, Stage::Abstract, write_abstract),
        Command::Certify(a) => run(&a, Stage::Certify, write_certify),
        Command::Synthesize(a) => run(&a, Stage::Synthesize, write_synthesize),
        Command::Simulate(a) => run(&a, Stage::Simulate, write_simulate),
        Command::Bound(a) => run(&a, Stage::Initial, write_bound),
        Command::Pipeline(a) => run(&a, Stage::Simulate, write_pipeline),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_STAGE)
        }
    }
}

fn cmd_translate(a: &TranslateArgs) -> ExitCode {
    let atoms = match &a.labels {
        Some(p) => match LabellingMap::load(p) {
            Ok(l) => l.atoms().to_vec(),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        },
        None => a.atoms.clone(),
    };
    let dfa = match translate_with_cap(&a.formula, &atoms, a.state_cap) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::Syntax { .. } | Error::NegatedNonAtom { .. } | Error::UnknownAtom { .. } => EXIT_PARSE,
                Error::ResourceCap { .. } => EXIT_CAP,
                _ => 1,
            });
        }
    };
    let text = match serde_json::to_string_pretty(&dfa.to_file()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    eprintln!("locations: {}", dfa.num_locations());
    match &a.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text + "\n") {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    ExitCode::SUCCESS
}

/// Failure reported by a subcommand: a pipeline stage or an output write.
#[derive(Debug)]
enum CmdError {
    Stage(StageError),
    Output(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Stage(e) => write!(f, "{e}"),
            CmdError::Output(e) => write!(f, "writing outputs failed: {e}"),
        }
    }
}

impl From<StageError> for CmdError {
    fn from(e: StageError) -> Self {
        CmdError::Stage(e)
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(e: serde_json::Error) -> Self {
        CmdError::Output(e.to_string())
    }
}

type CmdResult = Result<(), CmdError>;

fn run(a: &RunArgs, last: Stage, write: fn(&Pipeline, &Path) -> CmdResult) -> CmdResult {
    let cfg = build_config(a).map_err(|source| StageError { stage: Stage::Load, source })?;
    let mut p = Pipeline::load(cfg)?;
    p.run(last)?;
    std::fs::create_dir_all(&a.out_dir)?;
    write(&p, &a.out_dir)
}

/// Merge the config file (paths relative to it) with command-line overrides.
fn build_config(a: &RunArgs) -> robsynth::Result<RunConfig> {
    let mut v = match &a.config {
        Some(p) => serde_json::to_value(RunConfig::load(p)?)?,
        None => serde_json::json!({}),
    };
    let obj = v.as_object_mut().expect("config is an object");
    let mut set = |k: &str, val: serde_json::Value| {
        obj.insert(k.to_string(), val);
    };
    if let Some(m) = &a.model {
        set("model", serde_json::to_value(m)?);
    }
    if let Some(l) = &a.labels {
        set("labels", serde_json::to_value(l)?);
    }
    if let Some(f) = &a.formula {
        set("formula", f.clone().into());
        set("dfa", serde_json::Value::Null);
    }
    if let Some(d) = &a.dfa {
        set("dfa", serde_json::to_value(d)?);
        set("formula", serde_json::Value::Null);
    }
    if let Some(d) = a.delta {
        set("delta", d.into());
    }
    if let Some(e) = a.eps {
        set("eps", e.into());
    }
    if let Some(h) = a.horizon {
        set("horizon", h.into());
    }
    if a.unbounded {
        set("horizon", serde_json::Value::Null);
    }
    if let Some(r) = a.runs {
        set("runs", r.into());
    }
    if let Some(s) = a.seed {
        set("seed", s.into());
    }
    if let Some(g) = &a.grid {
        let old = obj.get("grid").cloned();
        obj.insert("grid".into(), parse_grid(g, old.as_ref())?);
    }
    let cfg: RunConfig = serde_json::from_value(v)?;
    cfg.validate()?;
    Ok(cfg)
}

fn parse_grid(spec: &str, old: Option<&serde_json::Value>) -> robsynth::Result<serde_json::Value> {
    let bad = || Error::InvalidArgument(format!("bad grid specification `{spec}`"));
    let mut bounds = Vec::new();
    let mut counts = Vec::new();
    for axis in spec.split(',') {
        let parts: Vec<&str> = axis.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [n] => counts.push(n.parse::<usize>().map_err(|_| bad())?),
            [lo, hi, n] => {
                let lo: f64 = lo.parse().map_err(|_| bad())?;
                let hi: f64 = hi.parse().map_err(|_| bad())?;
                bounds.push([lo, hi]);
                counts.push(n.parse::<usize>().map_err(|_| bad())?);
            }
            _ => return Err(bad()),
        }
    }
    if bounds.is_empty() {
        let old = old.and_then(|g| g.get("bounds")).ok_or_else(|| Error::InvalidArgument("grid bounds are not configured".into()))?;
        return Ok(serde_json::json!({ "bounds": old, "counts": counts }));
    }
    if bounds.len() != counts.len() {
        return Err(bad());
    }
    Ok(serde_json::json!({ "bounds": bounds, "counts": counts }))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_abstract(p: &Pipeline, dir: &Path) -> CmdResult {
    let design = p.design.as_ref().expect("certified");
    let abs = p.abstraction.as_ref().expect("abstracted");
    write_json(dir, "reduced.json", &design.reduced)?;
    std::fs::write(dir.join("abstraction.json"), serde_json::to_string(abs)?)?;
    println!("abstract states: {} (including sink), inputs: {}", abs.mdp.num_states(), abs.inputs.len());
    Ok(())
}

fn write_certify(p: &Pipeline, dir: &Path) -> CmdResult {
    let d = p.design.as_ref().expect("certified");
    let cert = p.cert.as_ref().expect("certified");
    write_json(dir, "certificate.json", cert)?;
    write_json(dir, "reduced.json", &d.reduced)?;
    println!(
        "eps = {} (certified {}), delta = {}, lambda = {}, gamma_u = {}, gamma_w = {}, gamma_beta = {}",
        cert.eps, cert.certified_eps, cert.delta, cert.lambda, cert.gamma_u, cert.gamma_w, cert.gamma_beta
    );
    Ok(())
}

fn write_synthesize(p: &Pipeline, dir: &Path) -> CmdResult {
    write_certify(p, dir)?;
    let policy = p.policy.as_ref().expect("synthesized");
    std::fs::write(dir.join("policy.json"), serde_json::to_string(policy)?)?;
    if let Some(dfa) = &p.dfa {
        write_json(dir, "dfa.json", &dfa.to_file())?;
    }
    if let Some(csv) = p.values_csv() {
        std::fs::write(dir.join("values.csv"), csv)?;
    }
    if let Some(csv) = p.value_curve_csv() {
        std::fs::write(dir.join("curve.csv"), csv)?;
    }
    match p.bound() {
        Some(r) => println!("r = {r}"),
        None => println!("r unavailable: no initial state"),
    }
    Ok(())
}

fn write_simulate(p: &Pipeline, dir: &Path) -> CmdResult {
    write_synthesize(p, dir)?;
    let sim = p.simulation.as_ref().expect("simulated");
    std::fs::write(dir.join("traces.csv"), traces_csv(&sim.traces, p.labels.atoms()))?;
    let report = p.report();
    write_json(dir, "simulation.json", &report.simulation)?;
    println!(
        "empirical = {} (95% Wilson [{}, {}]) over {} runs, fail-safe runs: {}",
        sim.probability, sim.wilson_low, sim.wilson_high, sim.runs, sim.failsafe_runs
    );
    Ok(())
}

fn write_bound(p: &Pipeline, dir: &Path) -> CmdResult {
    let b = p.reach_bounds()?;
    write_json(dir, "bounds.json", &b)?;
    println!("lower = {}, upper = {}", b.lower, b.upper);
    Ok(())
}

fn write_pipeline(p: &Pipeline, dir: &Path) -> CmdResult {
    write_simulate(p, dir)?;
    write_json(dir, "report.json", &p.report())?;
    write_json(dir, "timings.json", &p.timings)?;
    Ok(())
}
