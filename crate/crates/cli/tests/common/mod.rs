#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qunit_cli::formats::{to_json, GateFile, GateSetFile, MatrixFile};
use qunit_core::{expm_hermitian, HermitianOperator, UnitaryOperator};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qunit"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn gate(id: usize, name: &str, h: &HermitianOperator, tau0: Option<f64>, has_inverse: bool, period_t0: Option<f64>) -> GateFile {
    GateFile {
        id,
        name: name.into(),
        hamiltonian: MatrixFile::from_matrix(h.matrix()),
        targets: vec![0],
        tau0,
        has_inverse,
        period_t0,
    }
}

pub fn qubit_gateset(gates: Vec<GateFile>) -> GateSetFile {
    GateSetFile { radix: 2, qunits: 1, gates }
}

pub fn xz_file(tau0: Option<f64>) -> GateSetFile {
    qubit_gateset(vec![
        gate(1, "X", &HermitianOperator::pauli_x(), tau0, true, None),
        gate(2, "Z", &HermitianOperator::pauli_z(), tau0, true, None),
    ])
}

pub fn write<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, to_json(value)).unwrap();
    p
}

pub fn unitary_file(u: &UnitaryOperator) -> MatrixFile {
    MatrixFile::from_matrix(u.matrix())
}

pub fn rotation(h: &HermitianOperator, t: f64) -> UnitaryOperator {
    expm_hermitian(h, t).unwrap()
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
