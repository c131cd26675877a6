mod common;

use common::*;
use qunit_cli::formats::{read_json, to_json, BasisDump, GateSetFile, GateSetRef, ProgramFile, ProgramMetadata, StateFile};
use qunit_core::{HermitianOperator, UnitaryOperator};

#[test]
fn basis_counts_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["basis", "--radix", "2", "--qunits", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "4 elements");
    let dump = dir.path().join("b.json");
    let out = run(&["basis", "--radix", "3", "--qunits", "1", "--out", s(&dump)]);
    assert_eq!(stdout(&out).trim(), "9 elements");
    let d: BasisDump = read_json(&dump).unwrap();
    assert_eq!(d.elements.len(), 9);
    assert_eq!(d.gram[1][1], 2.0);
    assert_eq!(d.gram[0][0], 3.0);
    let out = run(&["basis", "--radix", "2", "--qunits", "7"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exceeds cap 64"));
}

#[test]
fn closure_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let xz = write(dir.path(), "xz.json", &xz_file(Some(1e-3)));
    let json = dir.path().join("closure.json");
    let out = run(&["closure", "--gateset", s(&xz), "--json", s(&json)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("universal: true, dim 3/3 traceless"));
    assert!(stdout(&out).contains("[1 2]"));
    let doc: serde_json::Value = read_json(&json).unwrap();
    assert_eq!(doc["frame"][2], "[1 2]");

    let z = write(dir.path(), "z.json", &qubit_gateset(vec![gate(1, "Z", &HermitianOperator::pauli_z(), None, true, None)]));
    let out = run(&["closure", "--gateset", s(&z)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("universal: false, dim 1/3 traceless"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"radix\": 2,\n  \"qunits\": 1,\n  \"gates\": [ {\"id\": \"one\"} ]\n}\n").unwrap();
    let out = run(&["closure", "--gateset", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn synth_verify_simulate_round() {
    let dir = tempfile::tempdir().unwrap();
    let x_only = write(dir.path(), "x.json", &qubit_gateset(vec![gate(1, "X", &HermitianOperator::pauli_x(), None, true, None)]));
    let target = write(dir.path(), "t.json", &unitary_file(&rotation(&HermitianOperator::pauli_x(), 0.3)));
    let prog = dir.path().join("p.json");
    let report = dir.path().join("r.json");
    let out = run(&["synth", "--target", s(&target), "--gateset", s(&x_only), "--out", s(&prog), "--report", s(&report)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("achieved_distance"));
    let pf: ProgramFile = read_json(&prog).unwrap();
    assert!(pf.metadata.achieved_distance <= 0.01);
    // tau0 defaults to delta^2 when the gate file has none
    assert_eq!(pf.pulse_tau0, vec![0.05 * 0.05]);
    let r: qunit_cli::formats::SynthReportFile = read_json(&report).unwrap();
    assert_eq!(r.achieved_distance, pf.metadata.achieved_distance);
    assert!(!r.closure.universal);
    assert!(r.best_effort);

    let out = run(&["verify", "--program", s(&prog), "--gateset", s(&x_only), "--target", s(&target)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = run(&["simulate", "--program", s(&prog), "--gateset", s(&x_only), "--basis-index", "0", "--trace"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let expected = rotation(&HermitianOperator::pauli_x(), 0.3);
    let first = format!("{:+.12} {:+.12}i", expected.as_matrix()[(0, 0)].re, expected.as_matrix()[(0, 0)].im);
    assert!(text.contains(&first), "{text}");
    assert!(text.contains("tape: 1 instructions, l = 120"));
}

#[test]
fn synth_identity_gives_empty_program() {
    let dir = tempfile::tempdir().unwrap();
    let xz = write(dir.path(), "xz.json", &xz_file(Some(1e-3)));
    let target = write(dir.path(), "id.json", &unitary_file(&UnitaryOperator::identity(2)));
    let prog = dir.path().join("p.json");
    let out = run(&["synth", "--target", s(&target), "--gateset", s(&xz), "--out", s(&prog)]);
    assert_eq!(code(&out), 0);
    let pf: ProgramFile = read_json(&prog).unwrap();
    assert!(pf.instructions.is_empty());
    assert_eq!(pf.metadata.achieved_distance, 0.0);

    let out = run(&["simulate", "--program", s(&prog), "--gateset", s(&xz), "--basis-index", "1"]);
    assert_eq!(stdout(&out), format!("   0 {:+.12} {:+.12}i\n   1 {:+.12} {:+.12}i\n", 0.0, 0.0, 1.0, 0.0));
}

#[test]
fn synth_input_and_capability_errors() {
    let dir = tempfile::tempdir().unwrap();
    let xz = write(dir.path(), "xz.json", &xz_file(Some(1e-4)));
    let big = write(dir.path(), "big.json", &unitary_file(&UnitaryOperator::identity(3)));
    let prog = dir.path().join("p.json");
    let out = run(&["synth", "--target", s(&big), "--gateset", s(&xz), "--out", s(&prog)]);
    assert_eq!(code(&out), 2);

    let forward_only = write(
        dir.path(),
        "fo.json",
        &qubit_gateset(vec![
            gate(1, "Xfwd", &HermitianOperator::pauli_x(), Some(1e-4), false, None),
            gate(2, "Z", &HermitianOperator::pauli_z(), Some(1e-4), true, None),
        ]),
    );
    let y = write(dir.path(), "y.json", &unitary_file(&rotation(&HermitianOperator::pauli_y(), 0.2)));
    let out = run(&["synth", "--target", s(&y), "--gateset", s(&forward_only), "--out", s(&prog)]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("Xfwd"), "{}", stderr(&out));

    let out = run(&["synth", "--target", s(&y), "--gateset", s(&xz), "--out", s(&prog), "--delta", "2.0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_failures() {
    let dir = tempfile::tempdir().unwrap();
    let xz = write(dir.path(), "xz.json", &xz_file(Some(1e-4)));
    let x = write(dir.path(), "x.json", &unitary_file(&rotation(&HermitianOperator::pauli_x(), 0.4)));
    let z = write(dir.path(), "z.json", &unitary_file(&rotation(&HermitianOperator::pauli_z(), 0.4)));
    let prog = dir.path().join("p.json");
    assert_eq!(code(&run(&["synth", "--target", s(&x), "--gateset", s(&xz), "--out", s(&prog)])), 0);

    let out = run(&["verify", "--program", s(&prog), "--gateset", s(&xz), "--target", s(&z)]);
    assert_eq!(code(&out), 5);

    // tampered metadata is caught by the recomputation
    let mut pf: ProgramFile = read_json(&prog).unwrap();
    pf.metadata.achieved_distance += 1e-6;
    let tampered = write(dir.path(), "tampered.json", &pf);
    let out = run(&["verify", "--program", s(&tampered), "--gateset", s(&xz), "--target", s(&x)]);
    assert_eq!(code(&out), 5);

    let text = std::fs::read_to_string(&prog).unwrap();
    let truncated = dir.path().join("trunc.json");
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let out = run(&["verify", "--program", s(&truncated), "--gateset", s(&xz), "--target", s(&x)]);
    assert_eq!(code(&out), 2);

    let other = write(dir.path(), "other.json", &xz_file(Some(2e-4)));
    let out = run(&["verify", "--program", s(&prog), "--gateset", s(&other), "--target", s(&x)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("digest"));
}

#[test]
fn simulate_single_instruction_and_bad_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = xz_file(Some(0.01));
    let xz = write(dir.path(), "xz.json", &file);
    let pf = ProgramFile {
        gateset: GateSetRef { path: None, digest: file.digest() },
        pulse_tau0: vec![0.01, 0.01],
        instructions: vec![(2, 40)],
        metadata: ProgramMetadata { achieved_distance: 0.0, l: 40, global_phase: 0.0, tool_version: "test".into() },
    };
    let prog = write(dir.path(), "p.json", &pf);
    let state = write(dir.path(), "s.json", &StateFile { dim: 2, amplitudes: vec![[0.6, 0.0], [0.0, 0.8]] });
    let out = run(&["simulate", "--program", s(&prog), "--gateset", s(&xz), "--state", s(&state)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let u = rotation(&HermitianOperator::pauli_z(), 0.4);
    let a0 = u.as_matrix()[(0, 0)] * 0.6;
    let a1 = u.as_matrix()[(1, 1)] * num_complex::Complex64::new(0.0, 0.8);
    let want = format!("   0 {:+.12} {:+.12}i\n   1 {:+.12} {:+.12}i\n", a0.re, a0.im, a1.re, a1.im);
    assert_eq!(stdout(&out), want);

    let bad = write(dir.path(), "bad.json", &StateFile { dim: 2, amplitudes: vec![[1.0, 0.0], [0.5, 0.0]] });
    let out = run(&["simulate", "--program", s(&prog), "--gateset", s(&xz), "--state", s(&bad)]);
    assert_eq!(code(&out), 2);
    let out = run(&["simulate", "--program", s(&prog), "--gateset", s(&xz), "--basis-index", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn files_reserialize_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let xz = write(dir.path(), "xz.json", &xz_file(Some(1e-4)));
    let y = write(dir.path(), "y.json", &unitary_file(&rotation(&HermitianOperator::pauli_y(), 0.2)));
    let prog = dir.path().join("p.json");
    assert_eq!(code(&run(&["synth", "--target", s(&y), "--gateset", s(&xz), "--out", s(&prog)])), 0);

    let text = std::fs::read_to_string(&prog).unwrap();
    let pf: ProgramFile = read_json(&prog).unwrap();
    assert_eq!(to_json(&pf), text);
    let gtext = std::fs::read_to_string(&xz).unwrap();
    let g: GateSetFile = read_json(&xz).unwrap();
    assert_eq!(to_json(&g), gtext);
}

#[test]
fn long_bracket_program_simulates() {
    let dir = tempfile::tempdir().unwrap();
    let xz = write(dir.path(), "xz.json", &xz_file(Some(1e-5)));
    let y = write(dir.path(), "y.json", &unitary_file(&rotation(&HermitianOperator::pauli_y(), 0.2)));
    let prog = dir.path().join("p.json");
    assert_eq!(code(&run(&["synth", "--target", s(&y), "--gateset", s(&xz), "--out", s(&prog)])), 0);
    let out = run(&["simulate", "--program", s(&prog), "--gateset", s(&xz), "--basis-index", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}
