//! Primitive gate sets: local generators, pulse durations, and how each
//! gate realizes negative powers.

use crate::basis::{embed_local, QunitSpace};
use crate::error::{invalid, Result};
use crate::linalg::{expm_hermitian, HermitianOperator};

/// Tolerance (per unit of dimension) for `exp(i H t0) = I`.
pub const PERIOD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    /// Dense, 1-based.
    pub id: usize,
    pub name: String,
    /// Local generator, of dimension `n^{targets.len()}`.
    pub generator: HermitianOperator,
    pub targets: Vec<usize>,
    /// Base pulse duration: one application is `exp(i H tau0)`.
    pub pulse_tau0: f64,
    pub has_inverse: bool,
    /// `t0` with `exp(i H t0) = I`, when the gate is periodic.
    pub period_t0: Option<f64>,
}

impl Gate {
    pub fn supports_negative(&self) -> bool {
        self.has_inverse || self.period_t0.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct GateSet {
    space: QunitSpace,
    gates: Vec<Gate>,
    embedded: Vec<HermitianOperator>,
}

impl GateSet {
    /// Validates ids, durations, periods and embeds every generator.
    ///
    /// Gates lacking both an inverse and a period are accepted; asking one
    /// of them for a negative power fails later with a capability error.
    pub fn new(space: QunitSpace, gates: Vec<Gate>) -> Result<Self> {
        if gates.is_empty() {
            return invalid("gate set is empty");
        }
        let mut embedded = Vec::with_capacity(gates.len());
        for (pos, gate) in gates.iter().enumerate() {
            if gate.id != pos + 1 {
                return invalid(format!("gate ids must be dense from 1: position {} has id {}", pos + 1, gate.id));
            }
            if !(gate.pulse_tau0.is_finite() && gate.pulse_tau0 > 0.0) {
                return invalid(format!("gate {} ({}): pulse tau0 must be positive", gate.id, gate.name));
            }
            let h = embed_local(&gate.generator, &gate.targets, space)
                .map_err(|e| crate::Error::InvalidInput(format!("gate {} ({}): {e}", gate.id, gate.name)))?;
            if let Some(t0) = gate.period_t0 {
                if !(t0.is_finite() && t0 > 0.0) {
                    return invalid(format!("gate {} ({}): period must be positive", gate.id, gate.name));
                }
                let u = expm_hermitian(&h, t0)?;
                let dev = (u.as_matrix() - HermitianOperator::identity(space.dim()).as_matrix()).norm();
                if dev > PERIOD_TOL * space.dim() as f64 {
                    return invalid(format!(
                        "gate {} ({}): exp(i H t0) is not the identity for t0 = {t0} (deviation {dev:e})",
                        gate.id, gate.name
                    ));
                }
            }
            embedded.push(h);
        }
        Ok(Self { space, gates, embedded })
    }

    pub fn space(&self) -> QunitSpace {
        self.space
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, id: usize) -> Result<&Gate> {
        match id.checked_sub(1).and_then(|i| self.gates.get(i)) {
            Some(g) => Ok(g),
            None => invalid(format!("unknown gate id {id}")),
        }
    }

    /// Full-space generator of gate `id`.
    pub fn embedded(&self, id: usize) -> Result<&HermitianOperator> {
        self.gate(id)?;
        Ok(&self.embedded[id - 1])
    }

    /// `(id, embedded generator)` pairs in id order.
    pub fn generators(&self) -> Vec<(usize, HermitianOperator)> {
        self.gates.iter().map(|g| g.id).zip(self.embedded.iter().cloned()).collect()
    }

    /// Same gates with every pulse duration replaced by `tau0`.
    pub fn with_pulse_tau0(&self, tau0: f64) -> Result<Self> {
        self.with_pulse_tau0s(&vec![tau0; self.gates.len()])
    }

    /// Same gates with per-gate pulse durations (in id order).
    pub fn with_pulse_tau0s(&self, tau0s: &[f64]) -> Result<Self> {
        if tau0s.len() != self.gates.len() {
            return invalid(format!("{} pulse durations for {} gates", tau0s.len(), self.gates.len()));
        }
        let mut out = self.clone();
        for (g, &t) in out.gates.iter_mut().zip(tau0s) {
            if !(t.is_finite() && t > 0.0) {
                return invalid(format!("gate {} ({}): pulse tau0 must be positive", g.id, g.name));
            }
            g.pulse_tau0 = t;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gate(id: usize, generator: HermitianOperator, targets: Vec<usize>) -> Gate {
        Gate { id, name: format!("g{id}"), generator, targets, pulse_tau0: 1e-3, has_inverse: true, period_t0: None }
    }

    #[test]
    fn builds_and_embeds() {
        let space = QunitSpace::new(2, 2).unwrap();
        let gs = GateSet::new(space, vec![gate(1, HermitianOperator::pauli_z(), vec![1])]).unwrap();
        assert_eq!(gs.embedded(1).unwrap().as_matrix(), HermitianOperator::diagonal(&[1.0, -1.0, 1.0, -1.0]).unwrap().as_matrix());
        assert!(gs.embedded(2).is_err());
        assert!(gs.gate(0).is_err());
    }

    #[test]
    fn rejects_sparse_ids_and_bad_tau() {
        let space = QunitSpace::new(2, 1).unwrap();
        assert!(GateSet::new(space, vec![gate(2, HermitianOperator::pauli_x(), vec![0])]).is_err());
        let mut g = gate(1, HermitianOperator::pauli_x(), vec![0]);
        g.pulse_tau0 = 0.0;
        assert!(GateSet::new(space, vec![g]).is_err());
        assert!(GateSet::new(space, vec![]).is_err());
    }

    #[test]
    fn checks_period() {
        let space = QunitSpace::new(2, 1).unwrap();
        let mut g = gate(1, HermitianOperator::pauli_x(), vec![0]);
        g.has_inverse = false;
        g.period_t0 = Some(2.0 * PI);
        assert!(GateSet::new(space, vec![g.clone()]).is_ok());
        g.period_t0 = Some(PI);
        assert!(GateSet::new(space, vec![g]).is_err());
    }

    #[test]
    fn overrides_tau0() {
        let space = QunitSpace::new(2, 1).unwrap();
        let gs = GateSet::new(space, vec![gate(1, HermitianOperator::pauli_x(), vec![0])]).unwrap();
        let gs2 = gs.with_pulse_tau0(0.25).unwrap();
        assert_eq!(gs2.gate(1).unwrap().pulse_tau0, 0.25);
        assert!(gs.with_pulse_tau0s(&[]).is_err());
        assert!(gs.with_pulse_tau0(-1.0).is_err());
    }
}
