//! Reduction-circuit synthesis from a LimTDD.
//!
//! The reduction maps `|1⟩ₐ|ψ⟩` to `|1⟩ₐ|0…0⟩` (up to a scalar). The
//! ancilla sits on qubit `n` and marks the part of the register that is still
//! being reduced; toggling it closes and reopens sub-branches.

use num_complex::Complex64;

use crate::circuit::{Circuit, Control, Gate, GateKind, Polarity};
use crate::error::{Error, Result};
use crate::lim::{Lim, PauliFactor};
use crate::limtdd::{DiagramStore, NodeId, RootEdge, Weight};

/// Rotations with `|c|` at or below this are skipped.
pub const ELIDE_TOL: f64 = 1e-12;

/// Values of the branch nodes above the current node, top qubit first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchCondition {
    terms: Vec<(usize, bool)>,
}

impl BranchCondition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[(usize, bool)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Extends the condition with a node strictly below every existing term.
    pub fn with(&self, qubit: usize, bit: bool) -> BranchCondition {
        debug_assert!(self.terms.last().is_none_or(|&(q, _)| q > qubit));
        let mut terms = self.terms.clone();
        terms.push((qubit, bit));
        BranchCondition { terms }
    }

    pub fn controls(&self) -> impl Iterator<Item = Control> + '_ {
        self.terms.iter().map(|&(q, b)| if b { Control::pos(q) } else { Control::neg(q) })
    }
}

/// One level of the depth-first walk.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthFrame {
    pub bc: BranchCondition,
    pub scalar: Complex64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SynthesisReport {
    pub histogram: crate::circuit::ArityHistogram,
    /// Non-terminal nodes processed (a shared node counts once per path).
    pub node_visits: usize,
    /// Terminal arrivals, i.e. reduced paths traversed.
    pub paths_traversed: usize,
    /// Gates targeting the ancilla.
    pub ancilla_toggles: usize,
    pub root_scalar: Complex64,
    /// Scalar returned by the walk below the root.
    pub final_scalar: Complex64,
}

impl SynthesisReport {
    /// Amplitude the reduction leaves on `|1⟩ₐ|0…0⟩`.
    pub fn amplitude(&self) -> Complex64 {
        self.root_scalar * self.final_scalar
    }
}

/// Gate sink for [`state_pre`].
#[derive(Debug)]
pub struct Emitter {
    ancilla: usize,
    gates: Vec<Gate>,
    node_visits: usize,
    paths: usize,
}

impl Emitter {
    pub fn new(ancilla: usize) -> Emitter {
        Emitter { ancilla, gates: Vec::new(), node_visits: 0, paths: 0 }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    fn emit(&mut self, g: Gate) {
        self.gates.push(g);
    }

    fn active(&self) -> Control {
        Control::pos(self.ancilla)
    }
}

/// `U(c) = (1/√(1+|c|²))·[[1, c̄], [−c, 1]]`.
pub fn weight_rotation(c: Complex64) -> [Complex64; 4] {
    let s = 1.0 / (1.0 + c.norm_sqr()).sqrt();
    let one = Complex64::new(s, 0.0);
    [one, c.conj() * s, -c * s, one]
}

fn factor_dagger(f: PauliFactor) -> GateKind {
    match (f.x, f.z) {
        (true, false) => GateKind::PauliX,
        (false, true) => GateKind::PauliZ,
        _ => {
            let d = f.dagger_matrix();
            GateKind::Unitary2([d[0][0], d[0][1], d[1][0], d[1][1]])
        }
    }
}

/// `O_i†` for each non-identity factor, most-significant qubit first.
fn cancel_gates(lim: &Lim) -> impl Iterator<Item = Gate> + '_ {
    (0..lim.num_qubits())
        .rev()
        .filter(|&q| !lim.factor(q).is_identity())
        .map(|q| Gate::new(factor_dagger(lim.factor(q)), q))
}

/// Uncontrolled gates undoing the Pauli part of the root weight.
pub fn reduce_root(root: &RootEdge) -> Vec<Gate> {
    cancel_gates(&root.weight).collect()
}

/// Emits the reduction of the sub-diagram at `node` under branch condition
/// `bc` and returns the scalar left on the reduced basis state.
pub fn state_pre(store: &DiagramStore, node: NodeId, bc: &BranchCondition, sink: &mut Emitter) -> Result<Complex64> {
    if node.is_terminal() {
        sink.paths += 1;
        return Ok(Complex64::new(1.0, 0.0));
    }
    let v = *store.node(node).ok_or(Error::InvalidNode(node.index()))?;
    sink.node_visits += 1;
    let q = v.qubit();
    let a = sink.active();

    let (lo_w, hi_w) = match (v.low.weight, v.high.weight) {
        (Weight::Zero, Weight::Zero) => return Err(Error::BothZero),
        (Weight::Lim(l), Weight::Zero) => {
            // only non-canonical (hand-built) nodes carry a low label
            for g in cancel_gates(&l) {
                sink.emit(g.with_controls([a, Control::neg(q)]));
            }
            let r = state_pre(store, v.low.target, bc, sink)?;
            return Ok(l.scalar() * r);
        }
        (Weight::Zero, Weight::Lim(h)) => {
            for g in cancel_gates(&h) {
                sink.emit(g.with_controls([a, Control::pos(q)]));
            }
            sink.emit(Gate::x(q).with_controls([a]));
            let r = state_pre(store, v.high.target, bc, sink)?;
            return Ok(h.scalar() * r);
        }
        (Weight::Lim(l), Weight::Lim(h)) => (l, h),
    };

    for g in cancel_gates(&hi_w) {
        sink.emit(g.with_controls([a, Control::pos(q)]));
    }
    for g in cancel_gates(&lo_w) {
        sink.emit(g.with_controls([a, Control::neg(q)]));
    }

    let (r0, r1) = if v.is_branch() {
        let toggle = |ctl: Vec<Control>| Gate::x(a.qubit).with_controls(ctl);
        let close_high: Vec<Control> = bc.controls().chain([Control::pos(q)]).collect();
        sink.emit(toggle(close_high));
        let r0 = state_pre(store, v.low.target, &bc.with(q, false), sink)?;
        sink.emit(toggle(bc.controls().collect()));
        let r1 = state_pre(store, v.high.target, &bc.with(q, true), sink)?;
        let open_low: Vec<Control> = bc.controls().chain([Control::neg(q)]).collect();
        sink.emit(toggle(open_low));
        (r0, r1)
    } else {
        let r = state_pre(store, v.low.target, bc, sink)?;
        (r, r)
    };

    let w0 = lo_w.scalar() * r0;
    let w1 = hi_w.scalar() * r1;
    let c = w1 / w0;
    if c.norm() > ELIDE_TOL {
        sink.emit(Gate::unitary(weight_rotation(c), q).with_controls([a]));
    }
    Ok(w0 * (1.0 + c.norm_sqr()).sqrt())
}

/// Reduction circuit on `n + 1` qubits, ancilla at index `n`.
pub fn synthesize_reduction(store: &DiagramStore, root: &RootEdge) -> Result<(Circuit, SynthesisReport)> {
    let n = root.num_qubits;
    let mut sink = Emitter::new(n);
    sink.gates.extend(reduce_root(root));
    let final_scalar = state_pre(store, root.target, &BranchCondition::new(), &mut sink)?;
    let ancilla_toggles = sink.gates.iter().filter(|g| g.target == n).count();
    let circuit = Circuit::from_gates(n + 1, Some(n), sink.gates)?;
    let report = SynthesisReport {
        histogram: circuit.stats(),
        node_visits: sink.node_visits,
        paths_traversed: sink.paths,
        ancilla_toggles,
        root_scalar: root.weight.scalar(),
        final_scalar,
    };
    Ok((circuit, report))
}

/// Inverse of the reduction: maps `|1⟩ₐ|0…0⟩` to `|1⟩ₐ|ψ⟩` up to a global
/// phase, or exactly when `fix_global_phase` is set.
pub fn synthesize_preparation(store: &DiagramStore, root: &RootEdge, fix_global_phase: bool) -> Result<Circuit> {
    let (reduction, report) = synthesize_reduction(store, root)?;
    Ok(preparation_from(&reduction, &report, fix_global_phase))
}

/// Daggers a reduction circuit (ancilla-carrying or tower-optimized) and
/// optionally appends the global-phase repair.
pub fn preparation_from(reduction: &Circuit, report: &SynthesisReport, fix_global_phase: bool) -> Circuit {
    let prep = reduction.dagger();
    if !fix_global_phase {
        return prep;
    }
    let theta = report.amplitude().arg();
    if theta == 0.0 {
        return prep;
    }
    let phase = match reduction.ancilla() {
        Some(a) => Gate::phase(theta, a),
        None => {
            let g = Complex64::from_polar(1.0, theta);
            Gate::unitary([g, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), g], 0)
        }
    };
    let mut gates = prep.into_gates();
    gates.push(phase);
    Circuit::from_gates(reduction.num_qubits(), reduction.ancilla(), gates).expect("phase gate is in range")
}

/// Drops the ancilla from a reduction whose diagram has no branch node.
pub fn tower_optimization(circuit: &Circuit, report: &SynthesisReport) -> Result<Circuit> {
    let a = circuit.ancilla().ok_or_else(|| Error::TowerRefused("circuit has no ancilla".into()))?;
    if report.ancilla_toggles > 0 {
        return Err(Error::TowerRefused(format!(
            "diagram has branch nodes ({} ancilla toggles)",
            report.ancilla_toggles
        )));
    }
    if a + 1 != circuit.num_qubits() {
        return Err(Error::TowerRefused("ancilla is not the top qubit".into()));
    }
    let mut gates = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        if g.target == a || g.controls.iter().any(|c| c.qubit == a && c.polarity == Polarity::Neg) {
            return Err(Error::TowerRefused("a gate acts on the ancilla".into()));
        }
        let controls = g.controls.iter().copied().filter(|c| c.qubit != a).collect();
        gates.push(Gate { kind: g.kind, controls, target: g.target });
    }
    Circuit::from_gates(a, None, gates)
}
