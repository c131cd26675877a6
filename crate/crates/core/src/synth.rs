//! Compiling a target unitary into a pulse program.
//!
//! The pipeline: principal logarithm of the target, split off the identity
//! component (global phase), bracket closure of the gate generators,
//! least-squares coefficients over the closure frame, then `N = round(1/Δ)`
//! identical Trotter steps. Inside a step every frame element with a nonzero
//! coefficient becomes a word of primitive pulses: leaves are pulse counts
//! `round(θ/τ0)`, brackets are group commutators of the sub-words at
//! duration `sqrt|θ|`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use crate::basis::{decompose_on_frame, FrameDecomposition};
use crate::closure::{bracket_closure, universality_report, ClosureResult, CompoundIndex, UniversalityReport, DEFAULT_MAX_DEPTH};
use crate::error::{invalid, Error, Result};
use crate::gateset::GateSet;
use crate::linalg::{logm_unitary, operator_distance, HermitianOperator, UnitaryOperator};
use crate::processor::program_operator;
use crate::program::Program;

pub const METRIC: &str = "phase-invariant Frobenius distance min_phi |U - e^{i phi} V|_F";

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisConfig {
    /// Trotter step Δ; the total evolution time is folded to 1.
    pub trotter_step: f64,
    /// Replaces every gate's pulse duration when set.
    pub pulse_tau0: Option<f64>,
    pub max_bracket_depth: usize,
    /// `None` means `4 n^{2k}`.
    pub max_elements: Option<usize>,
    /// Coefficients with `|c| <= tol` are dropped.
    pub coefficient_tolerance: f64,
    /// Largest `|θ|` a single word may be asked for.
    pub theta_cap: f64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            trotter_step: 0.05,
            pulse_tau0: None,
            max_bracket_depth: DEFAULT_MAX_DEPTH,
            max_elements: None,
            coefficient_tolerance: 1e-9,
            theta_cap: PI,
        }
    }
}

impl SynthesisConfig {
    pub fn with_step(trotter_step: f64) -> Self {
        Self { trotter_step, ..Self::default() }
    }

    fn pulse_for(&self, gate_tau0: f64) -> f64 {
        self.pulse_tau0.unwrap_or(gate_tau0)
    }

    fn validate(&self, gateset: &GateSet) -> Result<()> {
        let d = self.trotter_step;
        if !(d > 0.0 && d <= 1.0) {
            return invalid(format!("trotter step must be in (0, 1], got {d}"));
        }
        if self.coefficient_tolerance.is_nan() || self.coefficient_tolerance < 0.0 {
            return invalid("coefficient tolerance must be non-negative");
        }
        if self.theta_cap.is_nan() || self.theta_cap <= 0.0 {
            return invalid("theta cap must be positive");
        }
        for g in gateset.gates() {
            let tau = self.pulse_for(g.pulse_tau0);
            if !(tau > 0.0 && tau < d) {
                return invalid(format!("gate {} ({}): pulse tau0 = {tau} must be positive and below the step {d}", g.id, g.name));
            }
        }
        Ok(())
    }
}

/// Gate set with the configured pulse durations applied.
pub fn effective_gateset(gateset: &GateSet, config: &SynthesisConfig) -> Result<GateSet> {
    match config.pulse_tau0 {
        Some(t) => gateset.with_pulse_tau0(t),
        None => Ok(gateset.clone()),
    }
}

#[derive(Debug, Clone)]
pub struct Plan {
    /// Principal logarithm of the target.
    pub hamiltonian: HermitianOperator,
    pub closure: ClosureResult,
    /// Coefficients of the traceless part over the closure frame.
    pub decomposition: FrameDecomposition,
    pub global_phase: f64,
    pub dropped_coefficient_mass: f64,
}

/// Logarithm, phase split, closure and frame coefficients for `target`.
pub fn plan(target: &UnitaryOperator, gateset: &GateSet, config: &SynthesisConfig) -> Result<Plan> {
    let space = gateset.space();
    if target.dim() != space.dim() {
        return invalid(format!("target dim {} does not match gate set dim {}", target.dim(), space.dim()));
    }
    let hamiltonian = logm_unitary(target)?;
    let global_phase = hamiltonian.trace() / space.dim() as f64;
    let traceless = hamiltonian.traceless_part();

    let closure = bracket_closure(&gateset.generators(), space, config.max_bracket_depth, config.max_elements)?;
    // The identity part of a frame element only adds a global phase to its
    // word, so coefficients are solved against the traceless projections.
    let frame: Vec<HermitianOperator> = closure.frame.iter().map(|e| e.value.traceless_part()).collect();
    let mut decomposition = decompose_on_frame(&traceless, &frame)?;

    let mut dropped = 0.0;
    for c in decomposition.coefficients.iter_mut() {
        if c.abs() <= config.coefficient_tolerance {
            dropped += c.abs();
            *c = 0.0;
        }
    }
    Ok(Plan { hamiltonian, closure, decomposition, global_phase, dropped_coefficient_mass: dropped })
}

/// Pulse word approximating `exp(i E_index θ)`.
pub fn emit_word(index: &CompoundIndex, theta: f64, gateset: &GateSet, config: &SynthesisConfig) -> Result<Program> {
    if !theta.is_finite() || theta.abs() > config.theta_cap {
        return invalid(format!("word angle {theta} exceeds the cap {}", config.theta_cap));
    }
    let mut out = Program::new();
    append_word(index, theta, gateset, config, &mut out)?;
    Ok(out)
}

fn append_word(index: &CompoundIndex, theta: f64, gateset: &GateSet, config: &SynthesisConfig, out: &mut Program) -> Result<()> {
    match index {
        CompoundIndex::Leaf(k) => {
            let gate = gateset.gate(*k)?;
            let tau = config.pulse_for(gate.pulse_tau0);
            let pulses = (theta.abs() / tau).round() as u64;
            if pulses == 0 {
                return Ok(());
            }
            let id = gate.id as i64;
            if theta >= 0.0 {
                out.push(id, pulses);
            } else if gate.has_inverse {
                out.push(-id, pulses);
            } else if let Some(t0) = gate.period_t0 {
                // U^{-s} = U^{t0 - s}
                let period = (t0 / tau).round() as u64;
                if period == 0 {
                    return invalid(format!("gate {} ({}): period {t0} is shorter than one pulse", gate.id, gate.name));
                }
                out.push(id, (period - pulses % period) % period);
            } else {
                return Err(Error::Capability { gate_id: gate.id, name: gate.name.clone() });
            }
        }
        CompoundIndex::Bracket(j, k) => {
            let s = theta.abs().sqrt();
            // Tape order is application order, so U_J^s U_K^s U_J^-s U_K^-s is
            // written right to left; the negative word is its exact inverse.
            let seq: [(&CompoundIndex, f64); 4] = if theta >= 0.0 {
                [(k, -s), (j, -s), (k, s), (j, s)]
            } else {
                [(j, -s), (k, -s), (j, s), (k, s)]
            };
            for (idx, t) in seq {
                append_word(idx, t, gateset, config, out)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub achieved_distance: f64,
    pub program_length: u64,
    pub instruction_count: usize,
    pub decomposition_residual: f64,
    pub dropped_coefficient_mass: f64,
    pub global_phase: f64,
    pub closure: UniversalityReport,
    pub trotter_steps: u64,
    pub step_time: f64,
    /// Effective pulse duration per gate, in id order.
    pub pulse_tau0: Vec<f64>,
    /// Pulses contributed by frame elements of each bracket depth.
    pub pulses_by_depth: BTreeMap<usize, u64>,
    /// `(frame label, coefficient)` for every nonzero coefficient.
    pub coefficients: Vec<(String, f64)>,
    pub metric: &'static str,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub program: Program,
    pub report: SynthesisReport,
    /// The gate set the program refers to (pulse durations applied).
    pub gateset: GateSet,
}

/// Full compilation of `target` into a program, with a simulated check.
pub fn synthesize(target: &UnitaryOperator, gateset: &GateSet, config: &SynthesisConfig) -> Result<Synthesis> {
    let started = Instant::now();
    config.validate(gateset)?;
    let gs = effective_gateset(gateset, config)?;
    let word_config = SynthesisConfig { pulse_tau0: None, ..config.clone() };
    let plan = plan(target, &gs, &word_config)?;

    let steps = ((1.0 / config.trotter_step).round() as u64).max(1);
    let step_time = 1.0 / steps as f64;

    let mut block = Program::new();
    let mut pulses_by_depth = BTreeMap::new();
    let mut coefficients = Vec::new();
    for (elem, &c) in plan.closure.frame.iter().zip(&plan.decomposition.coefficients) {
        if c == 0.0 {
            continue;
        }
        coefficients.push((elem.index.to_string(), c));
        let theta = c * step_time;
        let pieces = (theta.abs() / config.theta_cap).ceil().max(1.0) as u64;
        for _ in 0..pieces {
            let word = emit_word(&elem.index, theta / pieces as f64, &gs, &word_config)?;
            *pulses_by_depth.entry(elem.index.depth()).or_insert(0) += word.length() * steps;
            block.extend(&word);
        }
    }
    let mut program = Program::new();
    for _ in 0..steps {
        program.extend(&block);
    }

    let achieved_distance = operator_distance(&program_operator(&program, &gs)?, target)?;
    let report = SynthesisReport {
        achieved_distance,
        program_length: program.length(),
        instruction_count: program.instructions().len(),
        decomposition_residual: plan.decomposition.residual_norm,
        dropped_coefficient_mass: plan.dropped_coefficient_mass,
        global_phase: plan.global_phase,
        closure: universality_report(&plan.closure, gs.space()),
        trotter_steps: steps,
        step_time,
        pulse_tau0: gs.gates().iter().map(|g| g.pulse_tau0).collect(),
        pulses_by_depth,
        coefficients,
        metric: METRIC,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    Ok(Synthesis { program, report, gateset: gs })
}
