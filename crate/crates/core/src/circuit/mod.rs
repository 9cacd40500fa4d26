//! Gate-level IR with polarity-carrying multi-controls.

mod json;
mod qasm;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use json::{export_json, import_json};
pub use qasm::{euler_angles, export_qasm3, EulerAngles};

/// Unitarity tolerance for `Unitary2` payloads.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Pos,
    Neg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: usize) -> Control {
        Control { qubit, polarity: Polarity::Pos }
    }

    pub fn neg(qubit: usize) -> Control {
        Control { qubit, polarity: Polarity::Neg }
    }

    /// Bit value the control qubit must hold for the gate to act.
    pub fn required_bit(&self) -> bool {
        self.polarity == Polarity::Pos
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    PauliX,
    PauliZ,
    /// Row-major `[u00, u01, u10, u11]`.
    Unitary2([Complex64; 4]),
    /// `diag(1, e^{iθ})`.
    Phase(f64),
}

impl GateKind {
    pub fn matrix(&self) -> [Complex64; 4] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match *self {
            GateKind::PauliX => [o, l, l, o],
            GateKind::PauliZ => [l, o, o, -l],
            GateKind::Unitary2(m) => m,
            GateKind::Phase(t) => [l, o, o, Complex64::from_polar(1.0, t)],
        }
    }

    pub fn dagger(&self) -> GateKind {
        match *self {
            GateKind::PauliX | GateKind::PauliZ => *self,
            GateKind::Unitary2([a, b, c, d]) => GateKind::Unitary2([a.conj(), c.conj(), b.conj(), d.conj()]),
            GateKind::Phase(t) => GateKind::Phase(-t),
        }
    }
}

pub fn is_unitary(m: &[Complex64; 4], tol: f64) -> bool {
    let [a, b, c, d] = *m;
    let r0 = a.norm_sqr() + b.norm_sqr();
    let r1 = c.norm_sqr() + d.norm_sqr();
    let cross = a * c.conj() + b * d.conj();
    (r0 - 1.0).abs() <= tol && (r1 - 1.0).abs() <= tol && cross.norm() <= tol
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<Control>,
    pub target: usize,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Gate {
        Gate { kind, controls: Vec::new(), target }
    }

    pub fn x(target: usize) -> Gate {
        Gate::new(GateKind::PauliX, target)
    }

    pub fn z(target: usize) -> Gate {
        Gate::new(GateKind::PauliZ, target)
    }

    pub fn unitary(m: [Complex64; 4], target: usize) -> Gate {
        Gate::new(GateKind::Unitary2(m), target)
    }

    pub fn phase(theta: f64, target: usize) -> Gate {
        Gate::new(GateKind::Phase(theta), target)
    }

    pub fn with_controls(mut self, controls: impl IntoIterator<Item = Control>) -> Gate {
        self.controls.extend(controls);
        self
    }

    pub fn ctrl(self, qubit: usize) -> Gate {
        self.with_controls([Control::pos(qubit)])
    }

    pub fn negctrl(self, qubit: usize) -> Gate {
        self.with_controls([Control::neg(qubit)])
    }

    /// Controls plus target.
    pub fn arity(&self) -> usize {
        self.controls.len() + 1
    }

    pub fn dagger(&self) -> Gate {
        Gate { kind: self.kind.dagger(), controls: self.controls.clone(), target: self.target }
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.target == qubit || self.controls.iter().any(|c| c.qubit == qubit)
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let oob = |q: usize| Error::QubitOutOfRange { qubit: q, num_qubits };
        if self.target >= num_qubits {
            return Err(oob(self.target));
        }
        let mut seen = Vec::with_capacity(self.controls.len());
        for c in &self.controls {
            if c.qubit >= num_qubits {
                return Err(oob(c.qubit));
            }
            if c.qubit == self.target {
                return Err(Error::InvalidGate(format!("target {} also used as control", c.qubit)));
            }
            if seen.contains(&c.qubit) {
                return Err(Error::InvalidGate(format!("duplicate control {}", c.qubit)));
            }
            seen.push(c.qubit);
        }
        if let GateKind::Unitary2(m) = &self.kind {
            if !is_unitary(m, UNITARY_TOL) {
                return Err(Error::InvalidGate("Unitary2 payload is not unitary".into()));
            }
        }
        Ok(())
    }
}

/// Ordered gate list over `num_qubits` qubits, optionally reserving one as
/// an ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ancilla: Option<usize>,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit { num_qubits, ancilla: None, gates: Vec::new() }
    }

    pub fn with_ancilla(num_qubits: usize, ancilla: usize) -> Result<Circuit> {
        if ancilla >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: ancilla, num_qubits });
        }
        Ok(Circuit { num_qubits, ancilla: Some(ancilla), gates: Vec::new() })
    }

    pub fn from_gates(num_qubits: usize, ancilla: Option<usize>, gates: Vec<Gate>) -> Result<Circuit> {
        let mut c = match ancilla {
            Some(a) => Circuit::with_ancilla(num_qubits, a)?,
            None => Circuit::new(num_qubits),
        };
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ancilla(&self) -> Option<usize> {
        self.ancilla
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

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    /// Inverse circuit: reversed order, each gate replaced by its adjoint.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ancilla: self.ancilla,
            gates: self.gates.iter().rev().map(Gate::dagger).collect(),
        }
    }

    pub fn stats(&self) -> ArityHistogram {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.arity()).or_insert(0) += 1;
        }
        ArityHistogram { counts }
    }

    /// Prepends an X on the ancilla so the circuit runs from an all-|0⟩
    /// register. No-op without an ancilla.
    pub fn with_ancilla_init(mut self) -> Circuit {
        if let Some(a) = self.ancilla {
            self.gates.insert(0, Gate::x(a));
        }
        self
    }

    /// Drops the ancilla when no gate references it.
    pub fn without_unused_ancilla(self) -> Circuit {
        match self.ancilla {
            Some(a) if a + 1 == self.num_qubits && !self.gates.iter().any(|g| g.touches(a)) => {
                Circuit { num_qubits: a, ancilla: None, gates: self.gates }
            }
            _ => self,
        }
    }
}

/// Gate count per arity (controls + 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArityHistogram {
    pub counts: BTreeMap<usize, usize>,
}

impl ArityHistogram {
    pub fn get(&self, arity: usize) -> usize {
        self.counts.get(&arity).copied().unwrap_or(0)
    }

    pub fn at_least(&self, arity: usize) -> usize {
        self.counts.range(arity..).map(|(_, c)| c).sum()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn record(&mut self, arity: usize) {
        *self.counts.entry(arity).or_insert(0) += 1;
    }
}

impl fmt::Display for ArityHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}q:{c}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn dagger_of_pauli_is_itself() {
        let c = Circuit::from_gates(1, None, vec![Gate::x(0)]).unwrap();
        assert_eq!(c.dagger(), c);
    }

    #[test]
    fn dagger_of_controlled_rotation() {
        let s = FRAC_1_SQRT_2;
        let u = [r(s), r(s), r(-s), r(s)];
        let c = Circuit::from_gates(2, None, vec![Gate::unitary(u, 0).ctrl(1)]).unwrap();
        let d = c.dagger();
        assert_eq!(d.gates()[0].kind, GateKind::Unitary2([r(s), r(-s), r(s), r(s)]));
        assert_eq!(d.gates()[0].controls, vec![Control::pos(1)]);
    }

    #[test]
    fn dagger_reverses_and_negates_phase() {
        let c = Circuit::from_gates(2, None, vec![Gate::phase(0.3, 0), Gate::z(1).ctrl(0)]).unwrap();
        let d = c.dagger();
        assert_eq!(d.gates()[0], Gate::z(1).ctrl(0));
        assert_eq!(d.gates()[1].kind, GateKind::Phase(-0.3));
    }

    #[test]
    fn stats_counts_arity() {
        assert!(Circuit::new(3).stats().is_empty());
        let c = Circuit::from_gates(
            3,
            None,
            vec![Gate::x(0), Gate::z(1).ctrl(0), Gate::x(2).ctrl(0).negctrl(1), Gate::z(2)],
        )
        .unwrap();
        let h = c.stats();
        assert_eq!(h.get(1), 2);
        assert_eq!(h.get(2), 1);
        assert_eq!(h.get(3), 1);
        assert_eq!(h.at_least(2), 2);
        assert_eq!(h.to_string(), "{1q:2, 2q:1, 3q:1}");
    }

    #[test]
    fn validation() {
        let mut c = Circuit::new(2);
        assert!(matches!(c.push(Gate::x(2)), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(c.push(Gate::x(1).ctrl(1)), Err(Error::InvalidGate(_))));
        assert!(matches!(c.push(Gate::unitary([r(1.0), r(1.0), r(0.0), r(1.0)], 0)), Err(Error::InvalidGate(_))));
        assert!(Circuit::with_ancilla(2, 2).is_err());
    }

    #[test]
    fn unused_ancilla_is_dropped() {
        let c = Circuit::from_gates(3, Some(2), vec![Gate::x(0).ctrl(1)]).unwrap();
        let d = c.without_unused_ancilla();
        assert_eq!(d.num_qubits(), 2);
        assert_eq!(d.ancilla(), None);
        let c = Circuit::from_gates(3, Some(2), vec![Gate::x(0).ctrl(2)]).unwrap();
        assert_eq!(c.clone().without_unused_ancilla(), c);
        assert_eq!(c.with_ancilla_init().gates()[0], Gate::x(2));
    }
}
