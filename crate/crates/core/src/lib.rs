//! Gate synthesis for circuits of radix-`n` quantum systems (qunits).
//!
//! A target unitary is compiled through its Hamiltonian: the principal
//! logarithm is decomposed over the Lie algebra generated by the gate set's
//! Hamiltonians (nested commutators), and each component is realized by
//! integer pulse counts inside Trotter steps, with group-commutator words
//! for bracket components. The [`processor`] module executes the resulting
//! programs the way a programmable processor would: a classical tape selects
//! which gate acts on the quantum data register at every step.
//!
//! ```
//! use qunit_core::{synthesize, Gate, GateSet, HermitianOperator, QunitSpace, SynthesisConfig, expm_hermitian};
//!
//! let space = QunitSpace::new(2, 1).unwrap();
//! let gate = |id, h| Gate { id, name: format!("g{id}"), generator: h, targets: vec![0], pulse_tau0: 1e-4, has_inverse: true, period_t0: None };
//! let gates = GateSet::new(space, vec![gate(1, HermitianOperator::pauli_x()), gate(2, HermitianOperator::pauli_z())]).unwrap();
//! let target = expm_hermitian(&HermitianOperator::pauli_y(), 0.2).unwrap();
//! let out = synthesize(&target, &gates, &SynthesisConfig::with_step(0.05)).unwrap();
//! assert!(out.report.achieved_distance < 0.05);
//! ```

pub mod basis;
pub mod closure;
pub mod error;
pub mod gateset;
pub mod linalg;
pub mod processor;
pub mod program;
pub mod synth;

pub use basis::{build_basis, build_basis_capped, decompose_on_frame, embed_local, reconstruct, FrameDecomposition, HermitianBasis, QunitSpace};
pub use closure::{bracket_closure, evaluate_index, universality_report, BracketElement, ClosureResult, CompoundIndex, LimitReason, UniversalityReport};
pub use error::{Error, Result};
pub use gateset::{Gate, GateSet};
pub use linalg::{check_unitary, commutator_h, expm_hermitian, logm_unitary, operator_distance, ComplexMatrix, HermitianOperator, UnitaryOperator};
pub use processor::{gate_pulse_operator, program_operator, run_program, verify, DataBusState, ExecutionStep, ExecutionTrace, Verification};
pub use program::{Instruction, Program};
pub use synth::{effective_gateset, emit_word, plan, synthesize, Plan, Synthesis, SynthesisConfig, SynthesisReport};
