use std::collections::HashMap;

use num_complex::Complex64;

use super::table::ScalarTable;
use super::{DiagramStore, Edge, NodeId, RootEdge, Weight};
use crate::error::{Error, Result};
use crate::lim::{Lim, MAX_LIM_QUBITS};

/// Builds the canonical diagram of `v` bottom-up by repeated half-splitting.
///
/// Amplitudes within `tol · max|v|` of zero become exact zeros, and nearby
/// amplitudes are snapped to a shared representative so that identical
/// subvectors hit the construction cache.
pub fn from_statevector(store: &mut DiagramStore, v: &[Complex64], tol: f64) -> Result<RootEdge> {
    let len = v.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_LIM_QUBITS {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_LIM_QUBITS });
    }
    let max = v.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    if max.is_nan() || max <= 0.0 {
        return Err(Error::ZeroVector);
    }

    let mut grid = ScalarTable::new(tol);
    let mut edges: Vec<Edge> = v
        .iter()
        .map(|&a| {
            if a.norm() <= tol * max {
                Edge::zero(NodeId::TERMINAL)
            } else {
                Edge::new(Lim::scalar_only(0, grid.intern(a)), NodeId::TERMINAL)
            }
        })
        .collect();

    for level in 1..=n {
        edges = edges
            .chunks_exact(2)
            .map(|pair| {
                if pair[0].weight.is_zero() && pair[1].weight.is_zero() {
                    Ok(Edge::zero(NodeId::TERMINAL))
                } else {
                    store.make_node(level, pair[0], pair[1])
                }
            })
            .collect::<Result<_>>()?;
    }

    let root = edges[0];
    match root.weight {
        Weight::Lim(weight) => Ok(RootEdge { weight, target: root.target, num_qubits: n }),
        Weight::Zero => Err(Error::ZeroVector),
    }
}

/// Expands a diagram back into its dense state vector.
pub fn to_statevector(store: &DiagramStore, root: &RootEdge) -> Result<Vec<Complex64>> {
    let level = store.level(root.target)?;
    if level != root.num_qubits || root.weight.num_qubits() != root.num_qubits {
        return Err(Error::LengthMismatch { expected: root.num_qubits, actual: level });
    }
    let mut cache = HashMap::new();
    let v = node_vector(store, root.target, &mut cache)?;
    root.weight.apply_dense(&v)
}

fn node_vector(
    store: &DiagramStore,
    id: NodeId,
    cache: &mut HashMap<NodeId, Vec<Complex64>>,
) -> Result<Vec<Complex64>> {
    if id.is_terminal() {
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }
    if let Some(v) = cache.get(&id) {
        return Ok(v.clone());
    }
    let node = *store.node(id).ok_or(Error::InvalidNode(id.index()))?;
    let half = 1usize << (node.level - 1);
    let mut out = Vec::with_capacity(2 * half);
    for e in [node.low, node.high] {
        match e.weight {
            Weight::Zero => out.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), half)),
            Weight::Lim(w) => {
                let child = node_vector(store, e.target, cache)?;
                out.extend(w.apply_dense(&child)?);
            }
        }
    }
    cache.insert(id, out.clone());
    Ok(out)
}
