//! Programs as tables of `(gate id, repeat)` instructions.
//!
//! Instruction 1 is applied first, so the program's operator is
//! `U_{p_l} ... U_{p_2} U_{p_1}`. A negative id denotes the inverse pulse of
//! the gate with the matching positive id.

use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::gateset::GateSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub gate_id: i64,
    pub repeat: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    instructions: Vec<Instruction>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a program verbatim (no run-length merging).
    pub fn from_instructions(instructions: Vec<Instruction>) -> Result<Self> {
        for (pos, ins) in instructions.iter().enumerate() {
            if ins.gate_id == 0 {
                return invalid(format!("instruction {}: gate id 0 is not valid", pos + 1));
            }
            if ins.repeat == 0 {
                return invalid(format!("instruction {}: repeat must be at least 1", pos + 1));
            }
        }
        Ok(Self { instructions })
    }

    /// Appends `repeat` pulses of `gate_id`, merging with the last instruction when ids match.
    pub fn push(&mut self, gate_id: i64, repeat: u64) {
        assert!(gate_id != 0, "gate id 0 is not valid");
        if repeat == 0 {
            return;
        }
        match self.instructions.last_mut() {
            Some(last) if last.gate_id == gate_id => last.repeat += repeat,
            _ => self.instructions.push(Instruction { gate_id, repeat }),
        }
    }

    pub fn extend(&mut self, other: &Program) {
        for ins in &other.instructions {
            self.push(ins.gate_id, ins.repeat);
        }
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Total pulse count `l`.
    pub fn length(&self) -> u64 {
        self.instructions.iter().map(|i| i.repeat).sum()
    }

    /// Pulses per signed gate id.
    pub fn histogram(&self) -> BTreeMap<i64, u64> {
        let mut h = BTreeMap::new();
        for ins in &self.instructions {
            *h.entry(ins.gate_id).or_insert(0) += ins.repeat;
        }
        h
    }

    /// Checks every instruction against the gate set.
    pub fn validate(&self, gateset: &GateSet) -> Result<()> {
        for (pos, ins) in self.instructions.iter().enumerate() {
            let id = usize::try_from(ins.gate_id.unsigned_abs()).unwrap_or(usize::MAX);
            let gate = gateset
                .gate(id)
                .map_err(|_| crate::Error::InvalidInput(format!("instruction {}: unknown gate id {}", pos + 1, ins.gate_id)))?;
            if ins.gate_id < 0 && !gate.supports_negative() {
                return invalid(format!(
                    "instruction {}: gate {} ({}) has neither an inverse nor a period",
                    pos + 1,
                    gate.id,
                    gate.name
                ));
            }
            if ins.repeat == 0 {
                return invalid(format!("instruction {}: repeat must be at least 1", pos + 1));
            }
        }
        Ok(())
    }
}
