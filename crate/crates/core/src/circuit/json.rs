use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Circuit, Control, Gate, GateKind, Polarity};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    num_qubits: usize,
    ancilla: Option<usize>,
    gates: Vec<GateDoc>,
}

#[derive(Serialize, Deserialize)]
struct GateDoc {
    kind: String,
    controls: Vec<(usize, Polarity)>,
    target: usize,
    params: Params,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Params {
    Complex(Vec<[f64; 2]>),
    Real(Vec<f64>),
}

fn to_doc(g: &Gate) -> GateDoc {
    let (kind, params) = match g.kind {
        GateKind::PauliX => ("x", Params::Complex(vec![])),
        GateKind::PauliZ => ("z", Params::Complex(vec![])),
        GateKind::Unitary2(m) => ("u2", Params::Complex(m.iter().map(|c| [c.re, c.im]).collect())),
        GateKind::Phase(t) => ("phase", Params::Real(vec![t])),
    };
    GateDoc {
        kind: kind.to_string(),
        controls: g.controls.iter().map(|c| (c.qubit, c.polarity)).collect(),
        target: g.target,
        params,
    }
}

fn from_doc(d: GateDoc) -> Result<Gate> {
    let bad = |msg: &str| Error::InvalidGate(format!("{}: {msg}", d.kind));
    let kind = match (d.kind.as_str(), &d.params) {
        ("x", p) if is_empty(p) => GateKind::PauliX,
        ("z", p) if is_empty(p) => GateKind::PauliZ,
        ("u2", Params::Complex(v)) if v.len() == 4 => {
            let mut m = [Complex64::new(0.0, 0.0); 4];
            for (slot, [re, im]) in m.iter_mut().zip(v) {
                *slot = Complex64::new(*re, *im);
            }
            GateKind::Unitary2(m)
        }
        ("phase", Params::Real(v)) if v.len() == 1 => GateKind::Phase(v[0]),
        ("x" | "z" | "u2" | "phase", _) => return Err(bad("wrong parameter shape")),
        _ => return Err(bad("unknown gate kind")),
    };
    let controls = d.controls.iter().map(|&(qubit, polarity)| Control { qubit, polarity }).collect();
    Ok(Gate { kind, controls, target: d.target })
}

fn is_empty(p: &Params) -> bool {
    match p {
        Params::Complex(v) => v.is_empty(),
        Params::Real(v) => v.is_empty(),
    }
}

/// JSON document `{num_qubits, ancilla, gates: [{kind, controls, target, params}]}`.
///
/// Floats are written in shortest round-trip form, so import is bit-exact.
pub fn export_json(circuit: &Circuit) -> String {
    let doc = CircuitDoc {
        num_qubits: circuit.num_qubits(),
        ancilla: circuit.ancilla(),
        gates: circuit.gates().iter().map(to_doc).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("circuit documents always serialize");
    s.push('\n');
    s
}

pub fn import_json(text: &str) -> Result<Circuit> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let gates = doc.gates.into_iter().map(from_doc).collect::<Result<Vec<_>>>()?;
    Circuit::from_gates(doc.num_qubits, doc.ancilla, gates)
}
