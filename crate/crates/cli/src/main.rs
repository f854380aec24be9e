//! `nhqfi`: sweep drivers and the cross-validation suite.
//!
//! Exit codes: 0 success, 1 precondition violation (bad parameters, wrong
//! regime, failed check suite), 2 numeric failure naming the offending
//! grid point.

mod angle;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use nhqfi::linalg;
use nhqfi::oracle::{self, DEFAULT_SEED};
use nhqfi::pseudo_hermitian;
use nhqfi::pt_symmetric::{self, GridSpec, Objective, PtParams, Regime};
use nhqfi::qfi;
use nhqfi::sweep::{linspace, relative_residual};
use nhqfi::{Error, StateFamily, SweepRecord};

#[derive(Parser)]
#[command(name = "nhqfi", version, about = "QFI sweeps for non-Hermitian qubit models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the pseudo-Hermitian sensor over x, all five curves.
    #[command(allow_negative_numbers = true)]
    PseudoSweep(PseudoSweepArgs),
    /// Sweep the PT qubit over θ for a list of φ values.
    #[command(allow_negative_numbers = true)]
    PtSweep(PtSweepArgs),
    /// Grid-search the optimal initial state over (m, φ).
    #[command(allow_negative_numbers = true)]
    OptimalState(OptimalStateArgs),
    /// Evaluate the QFI on the coalesced eigenstate at the exceptional point.
    #[command(allow_negative_numbers = true)]
    EpProbe(EpProbeArgs),
    /// Run the closed-form-vs-oracle cross-validation suite.
    Check(CheckArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PseudoSweepArgs {
    /// One or more ε values (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 2.0)]
    x_max: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PtSweepArgs {
    #[arg(long)]
    r: f64,
    #[arg(long)]
    s: f64,
    /// Angle; accepts pi-expressions such as pi/2.
    #[arg(long, default_value = "pi/2")]
    omega: String,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Comma-separated φ list; accepts pi-expressions.
    #[arg(long, default_value = "pi,2pi/3,pi/2,pi/3,0")]
    phi_list: String,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = 15.0)]
    theta_max: f64,
    #[arg(long, default_value_t = 1501)]
    points: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OptimalStateArgs {
    #[arg(long)]
    r: f64,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value = "pi/2")]
    omega: String,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Projected)]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 3.0)]
    m_max: f64,
    #[arg(long, default_value_t = 0.02)]
    m_step: f64,
    #[arg(long, default_value_t = 0.02)]
    phi_step: f64,
    #[arg(long, default_value_t = 1e-4)]
    refine_tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

/// The projected objective (4·Var of H on the normalized evolved state; at
/// θ=0 the preparation figure of merit whose argmax is (1, π) in both
/// regimes) or the full QFI including the norm-rate term.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Projected,
    Qfi,
}

impl ObjectiveArg {
    fn to_core(self) -> Objective {
        match self {
            Self::Projected => Objective::Projected,
            Self::Qfi => Objective::Qfi,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::Projected => "projected",
            Self::Qfi => "qfi",
        }
    }
}

#[derive(Args)]
struct EpProbeArgs {
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    #[arg(long, default_value = "pi/2")]
    omega: String,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CheckArgs {
    /// Which checks to run; `all` or a comma-separated list of check ids.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn precondition(message: String) -> Self {
        Self { message, code: 1 }
    }

    fn from_error(e: &Error, context: &str) -> Self {
        let code = match e {
            Error::Precondition(_)
            | Error::NotAState(_)
            | Error::ShapeMismatch { .. }
            | Error::RegimeError(_)
            | Error::InconsistentContext(_)
            | Error::DomainViolation { .. }
            | Error::EmptyGrid => 1,
            _ => 2,
        };
        Self {
            message: if context.is_empty() {
                e.to_string()
            } else {
                format!("{context}: {e}")
            },
            code,
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::PseudoSweep(a) => pseudo_sweep(&a),
        Command::PtSweep(a) => pt_sweep_cmd(&a),
        Command::OptimalState(a) => optimal_state(&a),
        Command::EpProbe(a) => ep_probe(&a),
        Command::Check(a) => check(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// NHQFI_THREADS caps the rayon pool; row order never depends on it.
fn configure_threads() {
    if let Ok(v) = std::env::var("NHQFI_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn emit(out: &OutputArgs, command: &str, parameters: serde_json::Value, rows: &[SweepRecord]) -> Result<(), Failure> {
    let text = match out.format {
        Format::Csv => output::to_csv(rows),
        Format::Json => output::to_json(command, parameters, rows),
    };
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::precondition(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_or_fail(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points == 0 || !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Failure::precondition(format!(
            "invalid grid: [{lo}, {hi}] with {points} points"
        )));
    }
    Ok(linspace(lo, hi, points))
}

fn pseudo_sweep(a: &PseudoSweepArgs) -> Result<(), Failure> {
    let grid = grid_or_fail(a.x_min, a.x_max, a.points)?;
    // validate parameters before any computation starts
    for &eps in &a.epsilon {
        pseudo_hermitian::PseudoQubitParams::new(eps, a.omega, 0.0, pseudo_hermitian::NMode::Normalized)
            .map_err(|e| Failure::from_error(&e, ""))?;
    }
    // one call per (ε, x) so a numeric failure names its grid point
    let per_eps: Vec<Result<Vec<SweepRecord>, Failure>> = a
        .epsilon
        .par_iter()
        .map(|&eps| {
            let mut rows = Vec::new();
            for &x in &grid {
                let chunk = pseudo_hermitian::fig1_sweep(&[eps], a.omega, &[x])
                    .map_err(|e| Failure::from_error(&e, &format!("at epsilon={eps}, x={x}")))?;
                rows.extend(chunk);
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_eps {
        rows.extend(r?);
    }
    let params = json!({
        "epsilon": a.epsilon,
        "omega": a.omega,
        "x_min": a.x_min,
        "x_max": a.x_max,
        "points": a.points,
    });
    emit(&a.out, "pseudo-sweep", params, &rows)
}

fn pt_sweep_cmd(a: &PtSweepArgs) -> Result<(), Failure> {
    let grid = grid_or_fail(a.theta_min, a.theta_max, a.points)?;
    let omega = angle::parse_angle(&a.omega).map_err(Failure::precondition)?;
    let phi_list = angle::parse_angle_list(&a.phi_list).map_err(Failure::precondition)?;
    let p = PtParams::new(a.r, a.s, omega).map_err(|e| Failure::from_error(&e, ""))?;
    if p.regime() == Regime::ExceptionalPoint {
        return Err(Failure::precondition(
            "parameters sit on the exceptional point; use ep-probe".into(),
        ));
    }
    pt_symmetric::PtInitialState::new(a.m, 0.0).map_err(|e| Failure::from_error(&e, ""))?;
    let per_phi: Vec<Result<Vec<SweepRecord>, Failure>> = phi_list
        .par_iter()
        .map(|&phi| {
            let mut rows = Vec::new();
            for &theta in &grid {
                let chunk = pt_symmetric::pt_sweep(&p, a.m, &[phi], &[theta]).map_err(|e| {
                    Failure::from_error(&e, &format!("at phi={phi}, theta={theta}"))
                })?;
                rows.extend(chunk);
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_phi {
        rows.extend(r?);
    }
    let params = json!({
        "r": a.r,
        "s": a.s,
        "omega": omega,
        "m": a.m,
        "phi_list": phi_list,
        "theta_min": a.theta_min,
        "theta_max": a.theta_max,
        "points": a.points,
    });
    emit(&a.out, "pt-sweep", params, &rows)
}

fn optimal_state(a: &OptimalStateArgs) -> Result<(), Failure> {
    let omega = angle::parse_angle(&a.omega).map_err(Failure::precondition)?;
    let p = PtParams::new(a.r, a.s, omega).map_err(|e| Failure::from_error(&e, ""))?;
    let grid = GridSpec {
        m_max: a.m_max,
        m_step: a.m_step,
        phi_step: a.phi_step,
        refine_tol: a.refine_tol,
    };
    let (m, phi, f) =
        pt_symmetric::optimal_initial_state(&p, a.theta, &grid, a.objective.to_core())
            .map_err(|e| Failure::from_error(&e, ""))?;
    let mut rec = SweepRecord::empty("pt", a.theta);
    rec.regime = Some(p.regime().label());
    rec.m = Some(m);
    rec.phi = Some(phi);
    rec.n_label = Some(a.objective.label().into());
    rec.r = Some(a.r);
    rec.s = Some(a.s);
    rec.omega = Some(omega);
    match a.objective {
        ObjectiveArg::Projected => rec.f_projected = Some(f),
        ObjectiveArg::Qfi => rec.f_generic = Some(f),
    }
    let params = json!({
        "r": a.r,
        "s": a.s,
        "omega": omega,
        "theta": a.theta,
        "objective": a.objective.label(),
        "m_max": a.m_max,
        "m_step": a.m_step,
        "phi_step": a.phi_step,
        "refine_tol": a.refine_tol,
    });
    emit(&a.out, "optimal-state", params, &[rec])
}

fn ep_probe(a: &EpProbeArgs) -> Result<(), Failure> {
    let omega = angle::parse_angle(&a.omega).map_err(Failure::precondition)?;
    let s = a.r * omega.sin();
    let p = PtParams::new(a.r, s, omega).map_err(|e| Failure::from_error(&e, ""))?;
    if p.regime() != Regime::ExceptionalPoint {
        return Err(Failure::precondition(format!(
            "r={}, omega={omega} does not define an exceptional point (s would be {s})",
            a.r
        )));
    }
    let v = pt_symmetric::coalesced_eigenstate(&p).map_err(|e| Failure::from_error(&e, ""))?;
    let algebraic =
        pt_symmetric::qfi_at_ep(&p, &v, a.theta).map_err(|e| Failure::from_error(&e, ""))?;
    let h_s = p.hamiltonian();
    let psi0 = v.clone();
    let fam = StateFamily::new(move |t: f64| {
        oracle::expm(&h_s.map(|z| z * num_complex::Complex64::new(0.0, -t)))
            .expect("finite Hamiltonian")
            * &psi0
    });
    let h = 1e-5 * a.theta.abs().max(1.0);
    let pipeline = qfi::qfi_pure_nonhermitian(&fam, a.theta, h)
        .map_err(|e| Failure::from_error(&e, &format!("at theta={}", a.theta)))?
        .value;
    // keep the defect visible: the coalesced state must carry zero QFI
    let defect = linalg::hermiticity_defect(&p.hamiltonian());
    let mut rec = SweepRecord::empty("pt", a.theta);
    rec.regime = Some(Regime::ExceptionalPoint.label());
    rec.r = Some(a.r);
    rec.s = Some(s);
    rec.omega = Some(omega);
    rec.f_generic = Some(pipeline);
    rec.f_closed_form = Some(algebraic);
    rec.residual = Some(relative_residual(algebraic, pipeline));
    let params = json!({
        "r": a.r,
        "s": s,
        "omega": omega,
        "theta": a.theta,
        "hermiticity_defect": defect,
    });
    emit(&a.out, "ep-probe", params, &[rec])
}

fn check(a: &CheckArgs) -> Result<(), Failure> {
    let outcomes = nhqfi::check::run_all(a.seed)
        .map_err(|e| Failure::from_error(&e, "check suite aborted"))?;
    let wanted: Option<Vec<&str>> = if a.suite == "all" {
        None
    } else {
        Some(a.suite.split(',').map(str::trim).collect())
    };
    let mut shown = 0usize;
    let mut failed = 0usize;
    for o in &outcomes {
        if let Some(ids) = &wanted {
            if !ids.contains(&o.id) {
                continue;
            }
        }
        shown += 1;
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} {:<24} residual {:>17} threshold {:>12}  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            output::sig12(o.residual),
            output::sig12(o.threshold),
            o.detail
        );
    }
    if shown == 0 {
        return Err(Failure::precondition(format!(
            "no checks matched suite '{}'",
            a.suite
        )));
    }
    if failed > 0 {
        return Err(Failure::precondition(format!(
            "{failed}/{shown} checks failed"
        )));
    }
    Ok(())
}
