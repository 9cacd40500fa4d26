use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use num_bigint::BigUint;

use super::{DiagramStore, NodeId, RootEdge};

fn reachable(store: &DiagramStore, root: NodeId) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if !seen.insert(id) {
            continue;
        }
        if let Some(n) = store.node(id) {
            stack.push(n.low.target);
            stack.push(n.high.target);
        }
    }
    seen
}

/// Reachable nodes, terminal included.
pub fn node_count(store: &DiagramStore, root: &RootEdge) -> usize {
    reachable(store, root.target).len()
}

/// Root-to-terminal paths once parallel edges between the same pair of nodes
/// are merged.
pub fn reduced_path_count(store: &DiagramStore, root: &RootEdge) -> BigUint {
    fn go(store: &DiagramStore, id: NodeId, memo: &mut HashMap<NodeId, BigUint>) -> BigUint {
        let Some(n) = store.node(id) else {
            return BigUint::from(1u32);
        };
        if let Some(p) = memo.get(&id) {
            return p.clone();
        }
        let p = if n.is_branch() {
            go(store, n.low.target, memo) + go(store, n.high.target, memo)
        } else {
            go(store, n.low.target, memo)
        };
        memo.insert(id, p.clone());
        p
    }
    go(store, root.target, &mut HashMap::new())
}

/// Text dump: a root line followed by one line per reachable node, from the
/// top level down.
pub fn dump(store: &DiagramStore, root: &RootEdge) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "root {} {} {}", root.weight, root.target, root.num_qubits);
    let mut ids: Vec<NodeId> = reachable(store, root.target).into_iter().collect();
    ids.sort_by_key(|&id| (std::cmp::Reverse(store.level(id).unwrap_or(0)), id));
    for id in ids {
        match store.node(id) {
            Some(n) => {
                let _ = writeln!(
                    out,
                    "{} {} low=({},{}) high=({},{})",
                    id, n.level, n.low.weight, n.low.target, n.high.weight, n.high.target
                );
            }
            None => {
                let _ = writeln!(out, "{id} 0 terminal");
            }
        }
    }
    out
}
