//! Three-bus processor simulation.
//!
//! The program tape (pseudo-classical bus) is stepped in order; each
//! instruction places its gate id `p` on the intermediate bus, which applies
//! `U_p` to the quantum data bus `repeat` times. Both control buses are
//! classical here.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::basis::QunitSpace;
use crate::error::{invalid, Error, Result};
use crate::gateset::GateSet;
use crate::linalg::{expm_hermitian, operator_distance, UnitaryOperator};
use crate::program::Program;

pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DataBusState {
    space: QunitSpace,
    amplitudes: DVector<Complex64>,
}

impl DataBusState {
    pub fn new(space: QunitSpace, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return invalid(format!("state has {} amplitudes, space needs {}", amplitudes.len(), space.dim()));
        }
        let v = DVector::from_vec(amplitudes);
        let norm_sq = v.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return invalid(format!("state is not normalized: sum |a|^2 = {norm_sq}"));
        }
        Ok(Self { space, amplitudes: v })
    }

    /// Computational basis state `|index>`.
    pub fn basis(space: QunitSpace, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return invalid(format!("basis index {index} out of range for dim {}", space.dim()));
        }
        let mut v = DVector::zeros(space.dim());
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes: v })
    }

    pub fn space(&self) -> QunitSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionStep {
    /// 1-based tape position.
    pub position: usize,
    /// Intermediate bus value (signed gate id).
    pub bus_value: i64,
    pub pulses: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub steps: Vec<ExecutionStep>,
    pub final_operator: Option<UnitaryOperator>,
}

impl ExecutionTrace {
    pub fn total_pulses(&self) -> u64 {
        self.steps.iter().map(|s| s.pulses).sum()
    }
}

/// One pulse of gate `|gate_id|`: `exp(i H tau0)`, or its adjoint for an
/// invertible gate with negative id. A negative id on a gate that is only
/// periodic yields the forward pulse; programs encode that case as positive
/// repeats.
pub fn gate_pulse_operator(gate_id: i64, gateset: &GateSet) -> Result<UnitaryOperator> {
    let id = usize::try_from(gate_id.unsigned_abs()).unwrap_or(usize::MAX);
    let gate = gateset.gate(id)?;
    let pulse = expm_hermitian(gateset.embedded(id)?, gate.pulse_tau0)?;
    if gate_id < 0 && gate.has_inverse {
        Ok(pulse.adjoint())
    } else {
        Ok(pulse)
    }
}

/// Operator of `repeat` consecutive pulses, built as `exp(±i H tau0 repeat)`
/// from one eigendecomposition so long runs stay unitary to rounding.
fn run_operator(gate_id: i64, repeat: u64, gateset: &GateSet) -> Result<UnitaryOperator> {
    let id = usize::try_from(gate_id.unsigned_abs()).unwrap_or(usize::MAX);
    let gate = gateset.gate(id)?;
    let sign = if gate_id < 0 && gate.has_inverse { -1.0 } else { 1.0 };
    expm_hermitian(gateset.embedded(id)?, sign * gate.pulse_tau0 * repeat as f64)
}

struct PulseCache<'a> {
    gateset: &'a GateSet,
    runs: HashMap<(i64, u64), UnitaryOperator>,
}

impl<'a> PulseCache<'a> {
    fn new(gateset: &'a GateSet) -> Self {
        Self { gateset, runs: HashMap::new() }
    }

    fn power(&mut self, gate_id: i64, repeat: u64) -> Result<&UnitaryOperator> {
        let key = (gate_id, repeat);
        if !self.runs.contains_key(&key) {
            let u = run_operator(gate_id, repeat, self.gateset)?;
            self.runs.insert(key, u);
        }
        Ok(&self.runs[&key])
    }
}

/// Runs the tape on a data-bus state, instruction 1 first.
pub fn run_program(program: &Program, gateset: &GateSet, input: &DataBusState) -> Result<(DataBusState, ExecutionTrace)> {
    program.validate(gateset)?;
    if input.space.dim() != gateset.space().dim() {
        return invalid(format!("state dim {} does not match gate set dim {}", input.space.dim(), gateset.space().dim()));
    }
    let mut cache = PulseCache::new(gateset);
    let mut state = input.amplitudes.clone();
    let mut steps = Vec::with_capacity(program.instructions().len());
    for (pos, ins) in program.instructions().iter().enumerate() {
        let u = cache.power(ins.gate_id, ins.repeat)?;
        state = u.as_matrix() * state;
        steps.push(ExecutionStep { position: pos + 1, bus_value: ins.gate_id, pulses: ins.repeat });
    }
    let norm_sq = state.norm_squared();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::Numeric(format!("data bus lost normalization: {norm_sq}")));
    }
    let output = DataBusState { space: gateset.space(), amplitudes: state };
    Ok((output, ExecutionTrace { steps, final_operator: None }))
}

/// Full operator `U_{p_l} ... U_{p_1}` of the program.
pub fn program_operator(program: &Program, gateset: &GateSet) -> Result<UnitaryOperator> {
    program.validate(gateset)?;
    let mut cache = PulseCache::new(gateset);
    let mut acc = UnitaryOperator::identity(gateset.space().dim());
    for ins in program.instructions() {
        acc = cache.power(ins.gate_id, ins.repeat)?.mul(&acc)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub distance: f64,
    pub length: u64,
    pub histogram: BTreeMap<i64, u64>,
    /// Tape size bound for a stored-table program: its own length.
    pub l_max: u64,
}

pub fn verify(program: &Program, gateset: &GateSet, target: &UnitaryOperator) -> Result<Verification> {
    if target.dim() != gateset.space().dim() {
        return invalid(format!("target dim {} does not match gate set dim {}", target.dim(), gateset.space().dim()));
    }
    let u = program_operator(program, gateset)?;
    let length = program.length();
    Ok(Verification { distance: operator_distance(&u, target)?, length, histogram: program.histogram(), l_max: length })
}
