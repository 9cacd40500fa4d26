//! Hash-consed LIM tensor decision diagrams over qubit registers.
//!
//! A node at level `k` encodes qubit `q_{k-1}`; its semantics is
//! `|0⟩ ⊗ ⟦low⟧ + |1⟩ ⊗ ⟦high⟧`. Diagrams are quasi-reduced (every edge drops
//! exactly one level) and share a single terminal with id 0.

mod build;
mod metrics;
mod stab;
mod store;
mod table;

use std::fmt;

pub use build::{from_statevector, to_statevector};
pub use metrics::{dump, node_count, reduced_path_count};
pub use store::DiagramStore;

use crate::lim::Lim;

/// Handle into a [`DiagramStore`]. Id 0 is the terminal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const TERMINAL: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_terminal(self) -> bool {
        self.0 == 0
    }

    pub(crate) fn from_index(i: usize) -> NodeId {
        NodeId(u32::try_from(i).expect("node table overflow"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge label: a LIM, or the distinguished zero weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    Zero,
    Lim(Lim),
}

impl Weight {
    pub fn is_zero(&self) -> bool {
        matches!(self, Weight::Zero)
    }

    pub fn as_lim(&self) -> Option<&Lim> {
        match self {
            Weight::Zero => None,
            Weight::Lim(l) => Some(l),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Zero => f.write_str("0"),
            Weight::Lim(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub weight: Weight,
    pub target: NodeId,
}

impl Edge {
    pub fn new(weight: Lim, target: NodeId) -> Edge {
        Edge { weight: Weight::Lim(weight), target }
    }

    pub fn zero(target: NodeId) -> Edge {
        Edge { weight: Weight::Zero, target }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub level: usize,
    pub low: Edge,
    pub high: Edge,
}

impl Node {
    /// Qubit index this node branches on.
    pub fn qubit(&self) -> usize {
        self.level - 1
    }

    pub fn is_branch(&self) -> bool {
        self.low.target != self.high.target
    }
}

/// The unique incoming edge of a diagram's root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootEdge {
    pub weight: Lim,
    pub target: NodeId,
    pub num_qubits: usize,
}
