use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use qunit_core::closure::DEFAULT_MAX_DEPTH;
use qunit_core::{
    bracket_closure, build_basis_capped, run_program, synthesize, universality_report, verify, DataBusState, QunitSpace, SynthesisConfig,
};
use crate::formats::{
    read_json, write_json, BasisDump, ClosureReportFile, CoefficientEntry, GateSetFile, GateSetRef, MatrixFile, ProgramFile, ProgramMetadata,
    StateFile, SynthReportFile, BRACKET_WORD_DURATION,
};
use crate::{CliError, EXIT_NOT_UNIVERSAL, EXIT_OK};

/// Stored and recomputed distances must agree to this.
pub const DISTANCE_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub radix: usize,
    #[arg(long)]
    pub qunits: usize,
    /// Write the elements and their trace Gram matrix here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = qunit_core::basis::DEFAULT_MAX_DIM)]
    pub max_dim: usize,
}

pub fn cmd_basis(args: &BasisArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let space = QunitSpace::new(args.radix, args.qunits)?;
    let basis = build_basis_capped(space, args.max_dim)?;
    if let Some(path) = &args.out {
        let dump = BasisDump {
            radix: space.radix(),
            qunits: space.count(),
            dim: space.dim(),
            count: basis.len(),
            labels: basis.labels.clone(),
            elements: basis.elements.iter().map(|e| MatrixFile::from_matrix(e.matrix())).collect(),
            gram: basis.gram(),
        };
        write_json(path, &dump)?;
    }
    writeln!(out, "{} elements", basis.len())?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Args)]
pub struct ClosureArgs {
    #[arg(long)]
    pub gateset: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Defaults to 4 n^{2k}.
    #[arg(long)]
    pub max_elements: Option<usize>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn cmd_closure(args: &ClosureArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let file: GateSetFile = read_json(&args.gateset)?;
    let gs = file.to_gateset(1.0)?;
    let result = bracket_closure(&gs.generators(), gs.space(), args.max_depth, args.max_elements)?;
    let report = universality_report(&result, gs.space());

    writeln!(
        out,
        "universal: {}, dim {}/{} traceless",
        report.universal, report.traceless_dim, report.target_traceless_dim
    )?;
    writeln!(out, "algebra_dim: {} of {} (with identity)", report.algebra_dim, report.target_full_dim)?;
    if let Some(limit) = report.limit {
        writeln!(out, "stopped at limit: {}", limit.code())?;
    } else if report.stalled {
        writeln!(out, "stalled: no bracket raises the rank")?;
    }
    writeln!(out, "frame ({} elements, max depth {}):", report.labels.len(), report.max_depth_used)?;
    for (i, label) in report.labels.iter().enumerate() {
        writeln!(out, "  {:>3}  {label}", i + 1)?;
    }
    if let Some(path) = &args.json {
        write_json(path, &ClosureReportFile::from(&report))?;
    }
    Ok(if report.universal { EXIT_OK } else { EXIT_NOT_UNIVERSAL })
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub gateset: PathBuf,
    /// Trotter step.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Pulse duration for every gate; otherwise each gate's own, else delta^2.
    #[arg(long)]
    pub tau0: Option<f64>,
    /// Coefficients at or below this magnitude are dropped.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Program file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Machine-readable synthesis report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Residual above which a synthesis is flagged as best-effort.
const RESIDUAL_FLAG: f64 = 1e-9;

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let target = read_json::<MatrixFile>(&args.target)?.to_unitary()?;
    let file: GateSetFile = read_json(&args.gateset)?;
    let gs = file.to_gateset(args.delta * args.delta)?;
    if target.dim() != gs.space().dim() {
        return Err(CliError::Input(format!("target dim {} does not match gate set dim {}", target.dim(), gs.space().dim())));
    }
    let config = SynthesisConfig {
        trotter_step: args.delta,
        pulse_tau0: args.tau0,
        max_bracket_depth: args.max_depth,
        coefficient_tolerance: args.tol,
        ..SynthesisConfig::default()
    };
    let s = synthesize(&target, &gs, &config)?;
    let r = &s.report;
    let best_effort = !r.closure.universal || r.decomposition_residual > RESIDUAL_FLAG;

    let program_file = ProgramFile {
        gateset: GateSetRef { path: Some(args.gateset.display().to_string()), digest: file.digest() },
        pulse_tau0: r.pulse_tau0.clone(),
        instructions: s.program.instructions().iter().map(|i| (i.gate_id, i.repeat)).collect(),
        metadata: ProgramMetadata {
            achieved_distance: r.achieved_distance,
            l: r.program_length,
            global_phase: r.global_phase,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    };
    write_json(&args.out, &program_file)?;

    if let Some(path) = &args.report {
        let doc = SynthReportFile {
            achieved_distance: r.achieved_distance,
            metric: r.metric.to_string(),
            program_length: r.program_length,
            instruction_count: r.instruction_count,
            decomposition_residual: r.decomposition_residual,
            dropped_coefficient_mass: r.dropped_coefficient_mass,
            global_phase: r.global_phase,
            best_effort,
            trotter_steps: r.trotter_steps,
            step_time: r.step_time,
            pulse_tau0: r.pulse_tau0.clone(),
            pulses_by_depth: r.pulses_by_depth.iter().map(|(d, n)| (d.to_string(), *n)).collect(),
            coefficients: r.coefficients.iter().map(|(label, value)| CoefficientEntry { label: label.clone(), value: *value }).collect(),
            closure: ClosureReportFile::from(&r.closure),
            bracket_word_duration: BRACKET_WORD_DURATION.to_string(),
            wall_time_secs: r.wall_time_secs,
        };
        write_json(path, &doc)?;
    }

    writeln!(out, "achieved_distance: {:.6e}", r.achieved_distance)?;
    writeln!(out, "l: {} pulses in {} instructions ({} Trotter steps)", r.program_length, r.instruction_count, r.trotter_steps)?;
    writeln!(out, "global_phase: {:.12}", r.global_phase)?;
    if best_effort {
        writeln!(
            out,
            "best-effort: gate set closure is {}universal, decomposition residual {:.3e}",
            if r.closure.universal { "" } else { "not " },
            r.decomposition_residual
        )?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub program: PathBuf,
    #[arg(long)]
    pub gateset: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    /// Accept distances up to this; defaults to the stored distance + 1e-9.
    #[arg(long)]
    pub tol: Option<f64>,
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let pf: ProgramFile = read_json(&args.program)?;
    let file: GateSetFile = read_json(&args.gateset)?;
    let gs = pf.bind_gateset(&file)?;
    let program = pf.program()?;
    let target = read_json::<MatrixFile>(&args.target)?.to_unitary()?;
    if target.dim() != gs.space().dim() {
        return Err(CliError::Input(format!("target dim {} does not match gate set dim {}", target.dim(), gs.space().dim())));
    }
    let v = verify(&program, &gs, &target)?;
    let stored = pf.metadata.achieved_distance;
    writeln!(out, "distance: {:.6e} (stored {:.6e})", v.distance, stored)?;
    writeln!(out, "l: {} (l_max {})", v.length, v.l_max)?;
    for (id, n) in &v.histogram {
        writeln!(out, "  gate {id:>4}: {n} pulses")?;
    }
    if v.length != pf.metadata.l {
        return Err(CliError::Verification(format!("program length {} differs from stored l = {}", v.length, pf.metadata.l)));
    }
    if (v.distance - stored).abs() > DISTANCE_AGREEMENT_TOL {
        return Err(CliError::Verification(format!("recomputed distance {:e} disagrees with stored {:e}", v.distance, stored)));
    }
    let tol = args.tol.unwrap_or(stored + DISTANCE_AGREEMENT_TOL);
    if v.distance > tol {
        return Err(CliError::Verification(format!("distance {:e} exceeds tolerance {:e}", v.distance, tol)));
    }
    writeln!(out, "verified")?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub program: PathBuf,
    #[arg(long)]
    pub gateset: PathBuf,
    /// Computational basis state to start from.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub basis_index: Option<usize>,
    /// JSON state file with `dim` and `amplitudes`.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Also print the intermediate-bus sequence.
    #[arg(long)]
    pub trace: bool,
}

/// Steps of the tape printed with `--trace` before eliding.
const TRACE_HEAD: usize = 20;

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let pf: ProgramFile = read_json(&args.program)?;
    let file: GateSetFile = read_json(&args.gateset)?;
    let gs = pf.bind_gateset(&file)?;
    let program = pf.program()?;
    let input = match (&args.state, args.basis_index) {
        (Some(path), _) => read_json::<StateFile>(path)?.to_state(gs.space())?,
        (None, Some(i)) => DataBusState::basis(gs.space(), i)?,
        (None, None) => return Err(CliError::Input("need --basis-index or --state".into())),
    };
    let (output, trace) = run_program(&program, &gs, &input)?;
    for (i, a) in output.amplitudes().iter().enumerate() {
        writeln!(out, "{i:>4} {:+.12} {:+.12}i", a.re, a.im)?;
    }
    if args.trace {
        writeln!(out, "tape: {} instructions, l = {}", trace.steps.len(), trace.total_pulses())?;
        for s in trace.steps.iter().take(TRACE_HEAD) {
            writeln!(out, "  {:>6}: p = {:>4} x {}", s.position, s.bus_value, s.pulses)?;
        }
        if trace.steps.len() > TRACE_HEAD {
            writeln!(out, "  ... {} more", trace.steps.len() - TRACE_HEAD)?;
        }
    }
    Ok(EXIT_OK)
}
