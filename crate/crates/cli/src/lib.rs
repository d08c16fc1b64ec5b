//! Command implementations behind the `cohbound` binary.

pub mod document;
pub mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohbound_core::h0solver::{h0_auto_with, AppendixCData};
use cohbound_core::{
    baseline_bound, conjugated_generators, epsilon_max_with_h0, h0_appendix_c, h0_triangle_upper, h0_vertex_enum,
    monte_carlo_check, theorem1_bound, theorem2_bound, BoundMethod, BoundReport, BoundsError, Circuit, Crossover,
    H0Error, H0Result, PerturbationMode, VerificationConfig, VerifyError,
};
use serde::Serialize;
use serde_json::{json, Value};

use document::{CircuitDocument, DocumentError};

/// Reference floors within this distance are considered reproduced.
pub const FLOOR_REFERENCE_TOL: f64 = 0.01;
pub const EPS_MAX_REFERENCE_TOL: f64 = 0.05;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::TailNotConverged { .. } => CliError::Degenerate(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Bounds(b) => (*b).into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cohbound",
    version,
    about = "Certified fidelity floors for circuits with coherent over/under-rotation",
    long_about = "Certified fidelity floors for circuits with coherent over/under-rotation.\n\n\
        Gates are listed in product order: the circuit prepares e^{-iH_1}...e^{-iH_N}|psi0>, \
        so the LAST gate in the document acts on the input state first."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fidelity floors at one ε̄.
    Bound(BoundArgs),
    /// Monte Carlo check of the floors against sampled perturbations.
    Verify(VerifyArgs),
    /// Largest ε̄ where the per-gate bound beats the baseline.
    Epsmax(EpsmaxArgs),
    /// max over the unit cube of ‖Σ λ_k A_k‖₂.
    H0(H0Args),
    /// Floors over a grid of ε̄.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Baseline,
    Thm1,
    Thm2,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<BoundMethod> {
        match self {
            MethodArg::Baseline => vec![BoundMethod::Baseline],
            MethodArg::Thm1 => vec![BoundMethod::Theorem1],
            MethodArg::Thm2 => vec![BoundMethod::Theorem2],
            MethodArg::All => BoundMethod::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Uniform,
    PerGate,
}

impl From<ModeArg> for PerturbationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Uniform => PerturbationMode::Uniform,
            ModeArg::PerGate => PerturbationMode::PerGate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum H0Choice {
    Auto,
    Vertex,
    AppendixC,
    Triangle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Circuit document (JSON).
    #[arg(long)]
    pub circuit: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub eps_bar: f64,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    /// Target for the certified series tail.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub h0: H0Choice,
    #[arg(long, value_enum, default_value = "json")]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub eps_bar: f64,
    #[arg(long, value_enum, default_value = "per-gate")]
    pub mode: ModeArg,
    /// `all` checks the baseline and whichever theorem matches the mode.
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub h0: H0Choice,
    /// Replace every floor by this value (exercises the violation path).
    #[arg(long, hide = true)]
    pub inject_floor: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EpsmaxArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub h0: H0Choice,
}

#[derive(Args, Debug)]
pub struct H0Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: H0Choice,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.01)]
    pub from: f64,
    #[arg(long, default_value_t = 0.5)]
    pub to: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub h0: H0Choice,
    #[arg(long, value_enum, default_value = "csv")]
    pub emit: Emit,
}

/// What a command produced: the rendered report and whether it signals a
/// verification failure.
#[derive(Debug)]
pub struct Outcome {
    pub report: String,
    pub out: Option<PathBuf>,
    pub warnings: Vec<String>,
    pub violated: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.violated {
            3
        } else {
            0
        }
    }
}

#[derive(Serialize)]
struct H0Summary {
    #[serde(flatten)]
    result: H0Result,
    fallbacks: Vec<String>,
}

struct Loaded {
    doc: CircuitDocument,
    circuit: Circuit,
}

fn load(common: &Common) -> Result<Loaded, CliError> {
    let doc = CircuitDocument::load(&common.circuit)?;
    let circuit = doc.circuit()?;
    Ok(Loaded { doc, circuit })
}

fn check_eps_bar(e: f64) -> Result<(), CliError> {
    if e.is_finite() && e >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--eps-bar must be finite and nonnegative, got {e}")))
    }
}

fn h0_error(e: H0Error) -> CliError {
    match e {
        H0Error::NotTwoByTwo { .. } | H0Error::NoGenerators => CliError::Validation(e.to_string()),
        _ => CliError::Degenerate(e.to_string()),
    }
}

fn solve_h0(c: &Circuit, choice: H0Choice) -> Result<(H0Summary, Option<AppendixCData>), CliError> {
    let gens = conjugated_generators(c)?;
    let summary = |result| H0Summary {
        result,
        fallbacks: Vec::new(),
    };
    Ok(match choice {
        H0Choice::Auto => {
            let sel = h0_auto_with(c, &gens);
            (
                H0Summary {
                    result: sel.result,
                    fallbacks: sel.fallbacks,
                },
                None,
            )
        }
        H0Choice::Vertex => (summary(h0_vertex_enum(&gens).map_err(h0_error)?), None),
        H0Choice::Triangle => (summary(h0_triangle_upper(c)), None),
        H0Choice::AppendixC => {
            if gens.len() != 2 {
                return Err(CliError::Validation(format!(
                    "appendix-c needs exactly two gates, got {}",
                    gens.len()
                )));
            }
            let (r, data) = h0_appendix_c(gens.a[0].as_matrix(), gens.a[1].as_matrix()).map_err(h0_error)?;
            (summary(r), Some(data))
        }
    })
}

fn compute(c: &Circuit, method: BoundMethod, eps_bar: f64, tol: f64, h0: f64) -> Result<BoundReport, BoundsError> {
    match method {
        BoundMethod::Baseline => baseline_bound(c, eps_bar),
        BoundMethod::Theorem1 => theorem1_bound(c, eps_bar, tol),
        BoundMethod::Theorem2 => theorem2_bound(c, eps_bar, tol, h0),
    }
}

fn reference_warnings(doc: &CircuitDocument, eps_bar: f64, reports: &[BoundReport]) -> Vec<String> {
    let Some(reference) = &doc.reference else {
        return Vec::new();
    };
    if reference.eps_bar.is_none_or(|e| (e - eps_bar).abs() > 1e-12) {
        return Vec::new();
    }
    reports
        .iter()
        .filter_map(|r| {
            let want = *reference.floors.get(&r.method)?;
            let diff = r.fidelity_floor - want;
            (diff.abs() > FLOOR_REFERENCE_TOL).then(|| {
                format!(
                    "{} floor {} differs from reference {} by {}",
                    r.method,
                    output::fmt9(r.fidelity_floor),
                    want,
                    output::fmt9(diff)
                )
            })
        })
        .collect()
}

fn fallback_warnings(h0: &H0Summary) -> Vec<String> {
    h0.fallbacks.iter().map(|f| format!("h0 fallback: {f}")).collect()
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Bound(a) => bound(a),
        Command::Verify(a) => verify(a),
        Command::Epsmax(a) => epsmax(a),
        Command::H0(a) => h0(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn json_outcome(value: Value, out: &Option<PathBuf>, warnings: Vec<String>, violated: bool) -> Outcome {
    Outcome {
        report: output::render_json(value),
        out: out.clone(),
        warnings,
        violated,
    }
}

fn bound(a: &BoundArgs) -> Result<Outcome, CliError> {
    check_eps_bar(a.eps_bar)?;
    let l = load(&a.common)?;
    let methods = a.method.methods();
    let h0 = if methods.contains(&BoundMethod::Theorem2) {
        Some(solve_h0(&l.circuit, a.h0)?.0)
    } else {
        None
    };
    let h0_value = h0.as_ref().map_or(0.0, |h| h.result.value);
    let reports = methods
        .iter()
        .map(|&m| compute(&l.circuit, m, a.eps_bar, a.tol, h0_value))
        .collect::<Result<Vec<_>, _>>()?;
    let mut warnings = h0.as_ref().map(fallback_warnings).unwrap_or_default();
    warnings.extend(reference_warnings(&l.doc, a.eps_bar, &reports));

    let report = match a.emit {
        Emit::Json => output::render_json(json!({
            "command": "bound",
            "circuit": l.doc.display_name(),
            "eps_bar": a.eps_bar,
            "h0": h0,
            "reports": reports,
            "warnings": warnings,
        })),
        Emit::Csv => output::bound_csv(&reports).map_err(|e| CliError::Io(e.to_string()))?,
    };
    Ok(Outcome {
        report,
        out: a.common.out.clone(),
        warnings,
        violated: false,
    })
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    check_eps_bar(a.eps_bar)?;
    let l = load(&a.common)?;
    let mode: PerturbationMode = a.mode.into();
    let methods: Vec<BoundMethod> = match a.method {
        MethodArg::All => BoundMethod::ALL
            .into_iter()
            .filter(|m| match m {
                BoundMethod::Baseline => true,
                BoundMethod::Theorem1 => mode == PerturbationMode::Uniform,
                BoundMethod::Theorem2 => mode == PerturbationMode::PerGate,
            })
            .collect(),
        other => other.methods(),
    };
    let h0 = if methods.contains(&BoundMethod::Theorem2) {
        Some(solve_h0(&l.circuit, a.h0)?.0)
    } else {
        None
    };
    let h0_value = h0.as_ref().map_or(0.0, |h| h.result.value);
    let mut floors = BTreeMap::new();
    for &m in &methods {
        let floor = match a.inject_floor {
            Some(f) => f,
            None => compute(&l.circuit, m, a.eps_bar, a.tol, h0_value)?.fidelity_floor,
        };
        floors.insert(m, floor);
    }
    let mut cfg = VerificationConfig::new(a.samples, a.seed, a.eps_bar, mode);
    cfg.initial_state = l.doc.state()?;
    let rep = monte_carlo_check(&l.circuit, &cfg, &floors)?;
    let mut warnings = h0.as_ref().map(fallback_warnings).unwrap_or_default();
    if a.inject_floor.is_some() {
        warnings.push("floors were overridden by --inject-floor".into());
    }
    if rep.violations > 0 {
        warnings.push(format!(
            "{} of {} samples fall below a floor; worst sample {} has fidelity {}",
            rep.violations,
            rep.samples,
            rep.worst_index,
            output::fmt9(rep.min_fidelity)
        ));
    }
    let violated = !rep.passed();
    Ok(json_outcome(
        json!({
            "command": "verify",
            "circuit": l.doc.display_name(),
            "passed": !violated,
            "h0": h0,
            "report": rep,
            "warnings": warnings,
        }),
        &a.common.out,
        warnings,
        violated,
    ))
}

fn epsmax(a: &EpsmaxArgs) -> Result<Outcome, CliError> {
    let l = load(&a.common)?;
    let (h0, _) = solve_h0(&l.circuit, a.h0)?;
    let crossover = epsilon_max_with_h0(&l.circuit, h0.result.value, a.tol)?;
    let mut warnings = fallback_warnings(&h0);
    if let Some(want) = l.doc.reference.as_ref().and_then(|r| r.eps_max) {
        match crossover {
            Crossover::Root(r) if (r - want).abs() <= EPS_MAX_REFERENCE_TOL => {}
            Crossover::Root(r) => warnings.push(format!(
                "eps_max {} differs from reference {want} by {}",
                output::fmt9(r),
                output::fmt9(r - want)
            )),
            Crossover::Unbounded => warnings.push(format!("eps_max is unbounded but the reference gives {want}")),
        }
    }
    Ok(json_outcome(
        json!({
            "command": "epsmax",
            "circuit": l.doc.display_name(),
            "h0": h0,
            "eps_max": crossover,
            "warnings": warnings,
        }),
        &a.common.out,
        warnings,
        false,
    ))
}

fn h0(a: &H0Args) -> Result<Outcome, CliError> {
    let l = load(&a.common)?;
    let (h0, data) = solve_h0(&l.circuit, a.method)?;
    let norm_sum: f64 = l.circuit.gate_norms().iter().sum();
    let warnings = fallback_warnings(&h0);
    Ok(json_outcome(
        json!({
            "command": "h0",
            "circuit": l.doc.display_name(),
            "h0": h0,
            "norm_sum": norm_sum,
            "appendix_c": data,
            "warnings": warnings,
        }),
        &a.common.out,
        warnings,
        false,
    ))
}

/// One sweep row; a method whose tail cannot be certified reports the
/// trivial floor 0.
#[derive(Serialize)]
pub struct SweepRow {
    pub eps_bar: f64,
    pub floor_baseline: f64,
    pub floor_thm1: f64,
    pub floor_thm2: f64,
}

fn sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    check_eps_bar(a.from)?;
    check_eps_bar(a.to)?;
    if a.steps < 2 || a.from > a.to {
        return Err(CliError::Validation(format!(
            "need --steps ≥ 2 and --from ≤ --to, got {} points on [{}, {}]",
            a.steps, a.from, a.to
        )));
    }
    if a.emit == Emit::Csv && a.common.out.is_none() {
        return Err(CliError::Validation("--emit csv writes to a file; pass --out".into()));
    }
    let l = load(&a.common)?;
    let (h0, _) = solve_h0(&l.circuit, a.h0)?;
    let mut warnings = fallback_warnings(&h0);
    let mut rows = Vec::with_capacity(a.steps);
    for i in 0..a.steps {
        let e = a.from + (a.to - a.from) * i as f64 / (a.steps - 1) as f64;
        let mut floor = |m| match compute(&l.circuit, m, e, a.tol, h0.result.value) {
            Ok(r) => Ok(r.fidelity_floor),
            Err(BoundsError::TailNotConverged { .. }) => {
                warnings.push(format!("{m} at eps_bar {}: series tail not certified, floor set to 0", output::fmt9(e)));
                Ok(0.0)
            }
            Err(err) => Err(CliError::from(err)),
        };
        rows.push(SweepRow {
            eps_bar: e,
            floor_baseline: floor(BoundMethod::Baseline)?,
            floor_thm1: floor(BoundMethod::Theorem1)?,
            floor_thm2: floor(BoundMethod::Theorem2)?,
        });
    }
    let report = match a.emit {
        Emit::Csv => output::sweep_csv(&rows).map_err(|e| CliError::Io(e.to_string()))?,
        Emit::Json => output::render_json(json!({
            "command": "sweep",
            "circuit": l.doc.display_name(),
            "h0": h0,
            "rows": rows,
            "warnings": warnings,
        })),
    };
    Ok(Outcome {
        report,
        out: a.common.out.clone(),
        warnings,
        violated: false,
    })
}
