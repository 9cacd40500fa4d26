use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;

use super::{Circuit, Control, Gate, GateKind, Polarity};

const EULER_EPS: f64 = 1e-14;

/// `M = e^{iα} · U(θ, φ, λ)` with the OpenQASM convention
/// `U = [[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
    pub global_phase: f64,
}

impl EulerAngles {
    pub fn matrix(&self) -> [Complex64; 4] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let g = Complex64::from_polar(1.0, self.global_phase);
        [
            g * c,
            -g * Complex64::from_polar(s, self.lambda),
            g * Complex64::from_polar(s, self.phi),
            g * Complex64::from_polar(c, self.phi + self.lambda),
        ]
    }
}

pub fn euler_angles(m: &[Complex64; 4]) -> EulerAngles {
    let [u00, u01, u10, u11] = *m;
    let theta = 2.0 * u10.norm().atan2(u00.norm());
    if u10.norm() <= EULER_EPS {
        let g = u00.arg();
        EulerAngles { theta: 0.0, phi: 0.0, lambda: wrap(u11.arg() - g), global_phase: g }
    } else if u00.norm() <= EULER_EPS {
        let g = (-u01).arg();
        EulerAngles { theta: PI, phi: wrap(u10.arg() - g), lambda: 0.0, global_phase: g }
    } else {
        let g = u00.arg();
        EulerAngles { theta, phi: wrap(u10.arg() - g), lambda: wrap((-u01).arg() - g), global_phase: g }
    }
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

fn modifiers(controls: &[Control]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < controls.len() {
        let pol = controls[i].polarity;
        let run = controls[i..].iter().take_while(|c| c.polarity == pol).count();
        let word = match pol {
            Polarity::Pos => "ctrl",
            Polarity::Neg => "negctrl",
        };
        if run == 1 {
            let _ = write!(out, "{word} @ ");
        } else {
            let _ = write!(out, "{word}({run}) @ ");
        }
        i += run;
    }
    out
}

fn operands(gate: &Gate, with_target: bool) -> String {
    let mut qs: Vec<String> = gate.controls.iter().map(|c| format!("q[{}]", c.qubit)).collect();
    if with_target {
        qs.push(format!("q[{}]", gate.target));
    }
    qs.join(", ")
}

/// OpenQASM 3 program text; negative controls stay as `negctrl` modifiers.
pub fn export_qasm3(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    if let Some(a) = circuit.ancilla() {
        let _ = writeln!(out, "// ancilla: q[{a}] (highest index; must be |1> before the synthesized gates)");
    }
    let _ = writeln!(out, "qubit[{}] q;", circuit.num_qubits());
    for g in circuit.gates() {
        let mods = modifiers(&g.controls);
        let ops = operands(g, true);
        match g.kind {
            GateKind::PauliX => {
                let _ = writeln!(out, "{mods}x {ops};");
            }
            GateKind::PauliZ => {
                let _ = writeln!(out, "{mods}z {ops};");
            }
            GateKind::Phase(t) => {
                let _ = writeln!(out, "{mods}p({t}) {ops};");
            }
            GateKind::Unitary2(m) => {
                let e = euler_angles(&m);
                let _ = writeln!(out, "{mods}U({}, {}, {}) {ops};", e.theta, e.phi, e.lambda);
                if e.global_phase.abs() > EULER_EPS {
                    if g.controls.is_empty() {
                        let _ = writeln!(out, "gphase({});", e.global_phase);
                    } else {
                        let _ = writeln!(out, "{mods}gphase({}) {};", e.global_phase, operands(g, false));
                    }
                }
            }
        }
    }
    out
}
