use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::stab;
use super::table::{snap_components, ScalarTable};
use super::{Edge, Node, NodeId, Weight};
use crate::error::{Error, Result};
use crate::lim::{Lim, PauliFactor, TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum WeightKey {
    Zero,
    Lim { re: u64, im: u64, x: u64, z: u64 },
}

impl WeightKey {
    fn of(w: &Weight) -> WeightKey {
        match w {
            Weight::Zero => WeightKey::Zero,
            Weight::Lim(l) => WeightKey::Lim {
                re: l.scalar().re.to_bits(),
                im: l.scalar().im.to_bits(),
                x: l.x_mask(),
                z: l.z_mask(),
            },
        }
    }
}

type EdgeKey = (WeightKey, NodeId);

fn edge_key(e: &Edge) -> EdgeKey {
    (WeightKey::of(&e.weight), e.target)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct NodeKey {
    level: usize,
    low: EdgeKey,
    high: EdgeKey,
}

/// Unique table plus construction cache for LimTDD nodes.
///
/// Construction is single-writer; once built, a store can be shared for
/// read-only queries.
#[derive(Clone, Debug)]
pub struct DiagramStore {
    nodes: Vec<Node>,
    unique: HashMap<NodeKey, NodeId>,
    labels: ScalarTable,
    memo: HashMap<(usize, EdgeKey, EdgeKey), Edge>,
    // stabilizer generators, parallel to `nodes`
    stabs: Vec<Vec<Lim>>,
    tol: f64,
}

impl Default for DiagramStore {
    fn default() -> Self {
        DiagramStore::new()
    }
}

impl DiagramStore {
    pub fn new() -> Self {
        DiagramStore::with_tolerance(TOL)
    }

    pub fn with_tolerance(tol: f64) -> Self {
        let terminal = Node { level: 0, low: Edge::zero(NodeId::TERMINAL), high: Edge::zero(NodeId::TERMINAL) };
        DiagramStore {
            nodes: vec![terminal],
            unique: HashMap::new(),
            labels: ScalarTable::new(tol),
            memo: HashMap::new(),
            stabs: vec![Vec::new()],
            tol,
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn terminal(&self) -> NodeId {
        NodeId::TERMINAL
    }

    /// Number of stored nodes including the terminal.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Looks up a non-terminal node.
    pub fn node(&self, id: NodeId) -> Option<&Node> {
        if id.is_terminal() {
            None
        } else {
            self.nodes.get(id.index())
        }
    }

    pub fn level(&self, id: NodeId) -> Result<usize> {
        self.nodes.get(id.index()).map(|n| n.level).ok_or(Error::InvalidNode(id.index()))
    }

    /// All non-terminal nodes in creation order.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().skip(1).map(|(i, n)| (NodeId::from_index(i), n))
    }

    fn check_edge(&self, level: usize, e: &Edge) -> Result<()> {
        let child = self.level(e.target)?;
        if child + 1 != level {
            return Err(Error::LengthMismatch { expected: level - 1, actual: child });
        }
        if let Weight::Lim(l) = &e.weight {
            if l.num_qubits() != level - 1 {
                return Err(Error::LengthMismatch { expected: level - 1, actual: l.num_qubits() });
            }
            if l.scalar().norm() == 0.0 {
                return Err(Error::ZeroScalar);
            }
        }
        Ok(())
    }

    fn intern_weight(&mut self, w: Weight) -> Weight {
        match w {
            Weight::Zero => Weight::Zero,
            Weight::Lim(l) => Weight::Lim(l.with_scalar(self.labels.intern(l.scalar()))),
        }
    }

    /// Stores a node verbatim (after interning its labels) without
    /// canonicalising it. Meant for assembling diagrams by hand.
    pub fn insert_node(&mut self, level: usize, low: Edge, high: Edge) -> Result<NodeId> {
        if level == 0 {
            return Err(Error::InvalidNode(0));
        }
        self.check_edge(level, &low)?;
        self.check_edge(level, &high)?;
        match (low.weight.is_zero(), high.weight.is_zero()) {
            (true, true) => return Err(Error::BothZero),
            (true, false) | (false, true) if low.target != high.target => {
                return Err(Error::Contract("ZERO edge must target its sibling's node".into()));
            }
            _ => {}
        }
        let low = Edge { weight: self.intern_weight(low.weight), target: low.target };
        let high = Edge { weight: self.intern_weight(high.weight), target: high.target };
        self.hash_cons(Node { level, low, high })
    }

    fn hash_cons(&mut self, node: Node) -> Result<NodeId> {
        let key = NodeKey { level: node.level, low: edge_key(&node.low), high: edge_key(&node.high) };
        if let Some(&id) = self.unique.get(&key) {
            return Ok(id);
        }
        let gens = stab::node_stabilizers(
            node.level,
            node.low.weight.as_lim(),
            node.high.weight.as_lim(),
            &self.stabs[node.low.target.index()],
            &self.stabs[node.high.target.index()],
            node.low.target == node.high.target,
            self.tol,
        )?;
        let id = NodeId::from_index(self.nodes.len());
        self.nodes.push(node);
        self.stabs.push(gens);
        self.unique.insert(key, id);
        Ok(id)
    }

    /// Generators of the node's Pauli stabilizer group: LIMs `g` with
    /// `g|v⟩ = |v⟩`. Empty for the terminal.
    pub fn stabilizers(&self, id: NodeId) -> Option<&[Lim]> {
        self.stabs.get(id.index()).map(Vec::as_slice)
    }

    /// Returns a canonical edge for `|0⟩⊗⟦e0⟧ + |1⟩⊗⟦e1⟧` at `level`.
    ///
    /// Canonical nodes have an identity (or, with a ZERO high side, the only
    /// nonzero) low edge, children ordered by id, and a high label chosen as
    /// the least element of its symmetry class.
    pub fn make_node(&mut self, level: usize, e0: Edge, e1: Edge) -> Result<Edge> {
        if level == 0 {
            return Err(Error::InvalidNode(0));
        }
        let memo_key = (level, edge_key(&e0), edge_key(&e1));
        if let Some(&e) = self.memo.get(&memo_key) {
            return Ok(e);
        }
        for e in [&e0, &e1] {
            if !e.weight.is_zero() {
                self.check_edge(level, e)?;
            }
        }

        let swap = match (&e0.weight, &e1.weight) {
            (Weight::Zero, Weight::Zero) => return Err(Error::BothZero),
            (Weight::Zero, Weight::Lim(_)) => true,
            (Weight::Lim(_), Weight::Lim(_)) => e0.target > e1.target,
            (Weight::Lim(_), Weight::Zero) => false,
        };
        let (lo, hi, top) = if swap { (e1, e0, PauliFactor::X) } else { (e0, e1, PauliFactor::I) };
        let lo_w = *lo.weight.as_lim().expect("low side is nonzero");
        let mut ret = lo_w.tensor_top(top);
        let stored_low = Edge::new(Lim::identity(level - 1), lo.target);

        let stored_high = match hi.weight {
            Weight::Zero => Edge::zero(lo.target),
            Weight::Lim(hi_w) => {
                let h = lo_w.inverse()?.mul(&hi_w)?;
                let (label, transform) = stab::canonical_label(
                    level,
                    h,
                    &self.stabs[lo.target.index()],
                    &self.stabs[hi.target.index()],
                    lo.target == hi.target,
                    self.tol,
                )?;
                let label = label.with_scalar(snap_components(label.scalar(), self.tol));
                ret = ret.mul(&transform)?;
                Edge::new(label, hi.target)
            }
        };

        let low = Edge { weight: self.intern_weight(stored_low.weight), target: stored_low.target };
        let high = Edge { weight: self.intern_weight(stored_high.weight), target: stored_high.target };
        let id = self.hash_cons(Node { level, low, high })?;
        let out = Edge::new(ret, id);
        self.memo.insert(memo_key, out);
        Ok(out)
    }
}

/// Total order on labels: Pauli bit pairs from the top factor down, then the
/// scalar by magnitude, then by phase in `[0, 2π)`. Scalar comparisons are
/// tolerant, so near-ties compare equal.
pub(crate) fn compare_labels(a: &Lim, b: &Lim, tol: f64) -> Ordering {
    for q in (0..a.num_qubits()).rev() {
        let (fa, fb) = (a.factor(q), b.factor(q));
        let ord = (fa.x, fa.z).cmp(&(fb.x, fb.z));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    let (sa, sb) = (snap_components(a.scalar(), tol), snap_components(b.scalar(), tol));
    let (ma, mb) = (sa.norm(), sb.norm());
    if (ma - mb).abs() > tol * ma.max(mb) {
        return ma.total_cmp(&mb);
    }
    let (pa, pb) = (phase(sa), phase(sb));
    if (pa - pb).abs() <= tol {
        Ordering::Equal
    } else {
        pa.total_cmp(&pb)
    }
}

fn phase(c: Complex64) -> f64 {
    let p = c.im.atan2(c.re);
    if p < 0.0 {
        p + TAU
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn leaf(a: f64) -> Edge {
        Edge::new(Lim::scalar_only(0, c(a)), NodeId::TERMINAL)
    }

    #[test]
    fn uniform_pair_has_unit_edges() {
        let mut s = DiagramStore::new();
        let e = s.make_node(1, leaf(1.0), leaf(1.0)).unwrap();
        let n = s.node(e.target).unwrap();
        assert_eq!(n.low.weight, Weight::Lim(Lim::identity(0)));
        assert_eq!(n.high.weight, Weight::Lim(Lim::identity(0)));
        assert_eq!(e.weight, Weight::Lim(Lim::identity(1)));
    }

    #[test]
    fn sign_flip_absorbed_into_z() {
        let mut s = DiagramStore::new();
        let plus = s.make_node(1, leaf(1.0), leaf(1.0)).unwrap();
        let e = s.make_node(1, leaf(FRAC_1_SQRT_2), leaf(-FRAC_1_SQRT_2)).unwrap();
        assert_eq!(e.target, plus.target);
        let w = e.weight.as_lim().unwrap();
        assert_eq!(w.factors(), vec![PauliFactor::Z]);
        assert!((w.scalar() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn one_sided_zero_is_canonical_low() {
        let mut s = DiagramStore::new();
        let ket0 = s.make_node(1, leaf(1.0), Edge::zero(NodeId::TERMINAL)).unwrap();
        let e = s.make_node(1, Edge::zero(NodeId::TERMINAL), leaf(1.0)).unwrap();
        assert_eq!(e.target, ket0.target);
        assert_eq!(e.weight.as_lim().unwrap().factors(), vec![PauliFactor::X]);
        let n = s.node(e.target).unwrap();
        assert!(n.high.weight.is_zero());
        assert_eq!(n.high.target, n.low.target);
        assert!(!n.is_branch());
    }

    #[test]
    fn both_zero_rejected() {
        let mut s = DiagramStore::new();
        let z = Edge::zero(NodeId::TERMINAL);
        assert_eq!(s.make_node(1, z, z), Err(Error::BothZero));
    }

    #[test]
    fn level_mismatch_rejected() {
        let mut s = DiagramStore::new();
        let e = s.make_node(1, leaf(1.0), leaf(1.0)).unwrap();
        assert!(s.make_node(1, e, e).is_err());
    }

    #[test]
    fn inverse_label_picks_smaller_magnitude() {
        let mut s = DiagramStore::new();
        let e = s.make_node(1, leaf(1.0), leaf(2.0)).unwrap();
        let n = *s.node(e.target).unwrap();
        let h = n.high.weight.as_lim().unwrap().scalar();
        assert!((h - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn label_order() {
        let a = Lim::from_factors(c(0.5), &[PauliFactor::Z]);
        let b = Lim::from_factors(c(-0.5), &[PauliFactor::Z]);
        let d = Lim::from_factors(c(0.25), &[PauliFactor::X]);
        assert_eq!(compare_labels(&a, &b, TOL), Ordering::Less);
        assert_eq!(compare_labels(&a, &d, TOL), Ordering::Less);
        let noisy = Lim::from_factors(Complex64::new(0.5, -1e-18), &[PauliFactor::Z]);
        assert_eq!(compare_labels(&a, &noisy, TOL), Ordering::Equal);
    }

    #[test]
    fn insert_node_checks_zero_sibling_rule() {
        let mut s = DiagramStore::new();
        let ket0 = s.make_node(1, leaf(1.0), Edge::zero(NodeId::TERMINAL)).unwrap().target;
        let plus = s.make_node(1, leaf(1.0), leaf(1.0)).unwrap().target;
        let bad = s.insert_node(2, Edge::zero(ket0), Edge::new(Lim::identity(1), plus));
        assert!(bad.is_err());
        let ok = s.insert_node(2, Edge::zero(plus), Edge::new(Lim::identity(1), plus)).unwrap();
        assert!(s.node(ok).unwrap().low.weight.is_zero());
    }
}
