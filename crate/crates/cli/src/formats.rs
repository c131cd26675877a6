//! On-disk JSON documents: matrices, gate sets, programs, states and basis dumps.
//!
//! Complex numbers are `[re, im]` pairs. Floats are written in their
//! shortest round-trip form, so reading a file back yields bit-identical
//! values and re-serializing yields identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qunit_core::{ComplexMatrix, DataBusState, Gate, GateSet, HermitianOperator, Instruction, Program, QunitSpace, UniversalityReport, UnitaryOperator};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    /// Row-major entries.
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self { dim: m.dim(), data: m.row_major().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.data.len() != self.dim * self.dim {
            return Err(CliError::Input(format!("matrix declares dim {} but has {} entries", self.dim, self.data.len())));
        }
        let entries: Vec<Complex64> = self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(ComplexMatrix::from_row_major(self.dim, &entries)?)
    }

    pub fn to_unitary(&self) -> Result<UnitaryOperator, CliError> {
        Ok(UnitaryOperator::new(self.to_matrix()?)?)
    }

    pub fn to_hermitian(&self) -> Result<HermitianOperator, CliError> {
        Ok(HermitianOperator::new(self.to_matrix()?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateFile {
    pub id: usize,
    pub name: String,
    pub hamiltonian: MatrixFile,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0: Option<f64>,
    pub has_inverse: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_t0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSetFile {
    pub radix: usize,
    pub qunits: usize,
    pub gates: Vec<GateFile>,
}

impl GateSetFile {
    pub fn from_gateset(gs: &GateSet) -> Self {
        let space = gs.space();
        Self {
            radix: space.radix(),
            qunits: space.count(),
            gates: gs
                .gates()
                .iter()
                .map(|g| GateFile {
                    id: g.id,
                    name: g.name.clone(),
                    hamiltonian: MatrixFile::from_matrix(g.generator.matrix()),
                    targets: g.targets.clone(),
                    tau0: Some(g.pulse_tau0),
                    has_inverse: g.has_inverse,
                    period_t0: g.period_t0,
                })
                .collect(),
        }
    }

    /// Validated gate set; gates without a `tau0` get `fallback_tau0`.
    pub fn to_gateset(&self, fallback_tau0: f64) -> Result<GateSet, CliError> {
        let space = QunitSpace::new(self.radix, self.qunits)?;
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let generator = g.hamiltonian.to_hermitian().map_err(|e| CliError::Input(format!("gate {} ({}): {e}", g.id, g.name)))?;
                Ok(Gate {
                    id: g.id,
                    name: g.name.clone(),
                    generator,
                    targets: g.targets.clone(),
                    pulse_tau0: g.tau0.unwrap_or(fallback_tau0),
                    has_inverse: g.has_inverse,
                    period_t0: g.period_t0,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(GateSet::new(space, gates)?)
    }

    /// SHA-256 over the compact canonical serialization.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("gate set serializes");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSetRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramMetadata {
    pub achieved_distance: f64,
    pub l: u64,
    pub global_phase: f64,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramFile {
    pub gateset: GateSetRef,
    /// Pulse duration per gate (id order) the program was compiled for.
    pub pulse_tau0: Vec<f64>,
    /// `[gate_id, repeat]`, applied first to last.
    pub instructions: Vec<(i64, u64)>,
    pub metadata: ProgramMetadata,
}

impl ProgramFile {
    pub fn program(&self) -> Result<Program, CliError> {
        let ins = self.instructions.iter().map(|&(gate_id, repeat)| Instruction { gate_id, repeat }).collect();
        Ok(Program::from_instructions(ins)?)
    }

    /// Gate set with this program's pulse durations, after checking the digest.
    pub fn bind_gateset(&self, file: &GateSetFile) -> Result<GateSet, CliError> {
        let digest = file.digest();
        if digest != self.gateset.digest {
            return Err(CliError::Input(format!(
                "gate set digest {digest} does not match the program's {}",
                self.gateset.digest
            )));
        }
        let gs = file.to_gateset(1.0)?;
        Ok(gs.with_pulse_tau0s(&self.pulse_tau0)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

/// Input states may be off by this much in norm; they are renormalized.
pub const STATE_NORM_TOL: f64 = 1e-6;

impl StateFile {
    pub fn to_state(&self, space: QunitSpace) -> Result<DataBusState, CliError> {
        if self.dim != self.amplitudes.len() {
            return Err(CliError::Input(format!("state declares dim {} but has {} amplitudes", self.dim, self.amplitudes.len())));
        }
        let amps: Vec<Complex64> = self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CliError::Input("state has non-finite amplitudes".into()));
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_NORM_TOL {
            return Err(CliError::Input(format!("state is not normalized: sum |a|^2 = {norm_sq}")));
        }
        let scale = norm_sq.sqrt();
        Ok(DataBusState::new(space, amps.into_iter().map(|z| z / scale).collect())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDump {
    pub radix: usize,
    pub qunits: usize,
    pub dim: usize,
    pub count: usize,
    pub labels: Vec<Vec<usize>>,
    pub elements: Vec<MatrixFile>,
    /// `tr(B_I B_J)`.
    pub gram: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureReportFile {
    pub algebra_dim: usize,
    pub traceless_dim: usize,
    pub target_traceless_dim: usize,
    pub target_full_dim: usize,
    pub universal: bool,
    pub stalled: bool,
    pub limit: Option<String>,
    pub frame: Vec<String>,
    pub max_depth_used: usize,
}

impl From<&UniversalityReport> for ClosureReportFile {
    fn from(r: &UniversalityReport) -> Self {
        Self {
            algebra_dim: r.algebra_dim,
            traceless_dim: r.traceless_dim,
            target_traceless_dim: r.target_traceless_dim,
            target_full_dim: r.target_full_dim,
            universal: r.universal,
            stalled: r.stalled,
            limit: r.limit.map(|l| l.code().to_string()),
            frame: r.labels.clone(),
            max_depth_used: r.max_depth_used,
        }
    }
}

pub const BRACKET_WORD_DURATION: &str = "commutator words run each sub-word for sqrt(|theta|) time units, counted in pulses of tau0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthReportFile {
    pub achieved_distance: f64,
    pub metric: String,
    pub program_length: u64,
    pub instruction_count: usize,
    pub decomposition_residual: f64,
    pub dropped_coefficient_mass: f64,
    pub global_phase: f64,
    pub best_effort: bool,
    pub trotter_steps: u64,
    pub step_time: f64,
    pub pulse_tau0: Vec<f64>,
    /// Keyed by bracket depth.
    pub pulses_by_depth: BTreeMap<String, u64>,
    pub coefficients: Vec<CoefficientEntry>,
    pub closure: ClosureReportFile,
    pub bracket_word_duration: String,
    pub wall_time_secs: f64,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_file(h: &HermitianOperator) -> MatrixFile {
        MatrixFile::from_matrix(h.matrix())
    }

    fn sample_gateset() -> GateSetFile {
        GateSetFile {
            radix: 2,
            qunits: 1,
            gates: vec![
                GateFile {
                    id: 1,
                    name: "X".into(),
                    hamiltonian: pauli_file(&HermitianOperator::pauli_x()),
                    targets: vec![0],
                    tau0: Some(1e-5),
                    has_inverse: true,
                    period_t0: None,
                },
                GateFile {
                    id: 2,
                    name: "Z".into(),
                    hamiltonian: pauli_file(&HermitianOperator::pauli_z()),
                    targets: vec![0],
                    tau0: None,
                    has_inverse: false,
                    period_t0: Some(2.0 * std::f64::consts::PI),
                },
            ],
        }
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = ComplexMatrix::from_row_major(2, &[
            Complex64::new(0.1, 1.0 / 3.0),
            Complex64::new(std::f64::consts::PI, -1e-300),
            Complex64::new(-0.0, 5e-324),
            Complex64::new(1.0 / 7.0, 2.0f64.sqrt()),
        ])
        .unwrap();
        let text = to_json(&MatrixFile::from_matrix(&m));
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap().row_major(), m.row_major());
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn matrix_length_checked() {
        let f = MatrixFile { dim: 2, data: vec![[1.0, 0.0]; 3] };
        assert!(f.to_matrix().is_err());
    }

    #[test]
    fn gateset_loads_with_fallback_tau0() {
        let gs = sample_gateset().to_gateset(0.0025).unwrap();
        assert_eq!(gs.gate(1).unwrap().pulse_tau0, 1e-5);
        assert_eq!(gs.gate(2).unwrap().pulse_tau0, 0.0025);
        let text = to_json(&sample_gateset());
        assert!(!text.contains("\"tau0\": null"));
        let back: GateSetFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sample_gateset());
        assert_eq!(back.digest(), sample_gateset().digest());
    }

    #[test]
    fn digest_detects_changes() {
        let mut other = sample_gateset();
        other.gates[0].has_inverse = false;
        assert_ne!(other.digest(), sample_gateset().digest());
    }

    #[test]
    fn parse_errors_are_line_anchored() {
        let err = serde_json::from_str::<GateSetFile>("{\n  \"radix\": 2,\n  \"qunits\": \"one\"\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn state_normalization_window() {
        let space = QunitSpace::new(2, 1).unwrap();
        let ok = StateFile { dim: 2, amplitudes: vec![[0.6, 0.0], [0.0, 0.8000001]] };
        let s = ok.to_state(space).unwrap();
        assert!((s.norm_squared() - 1.0).abs() < 1e-12);
        let bad = StateFile { dim: 2, amplitudes: vec![[1.0, 0.0], [0.1, 0.0]] };
        assert!(bad.to_state(space).is_err());
    }
}
