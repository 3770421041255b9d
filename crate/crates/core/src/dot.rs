//! Hasse diagrams of the three levels as DOT or JSON.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::classifier::{ClassifierError, Filter};
use crate::ideals::PropertySubset;
use crate::partitions::PartitionLattice;
use crate::poset::{Poset, PosetError};

/// Node labels plus covering edges `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hasse {
    pub name: String,
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl Hasse {
    pub fn new(name: impl Into<String>, nodes: Vec<String>, order: &Poset) -> Self {
        Hasse { name: name.into(), nodes, edges: order.covers() }
    }

    /// Bottom-to-top digraph, one edge per covering pair.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(&self.name));
        out.push_str("  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, label) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(label));
        }
        for (lo, hi) in &self.edges {
            let _ = writeln!(out, "  n{lo} -> n{hi};");
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Level I: the partition lattice.
pub fn partition_hasse(lattice: &PartitionLattice) -> Hasse {
    let nodes = lattice.partitions().iter().map(|p| p.to_string()).collect();
    Hasse::new(format!("P_I n={}", lattice.n()), nodes, lattice.order())
}

/// Level II: ideals labeled by their maximal elements.
pub fn ideal_hasse(context: &PropertySubset) -> Hasse {
    let lattice = context.lattice();
    let nodes = context.ideals().iter().map(|i| i.label(lattice)).collect();
    Hasse::new(format!("P_II {} n={}", context.name(), lattice.n()), nodes, context.order())
}

/// Level III: filters of `context` labeled by their minimal elements.
pub fn filter_hasse(context: &Arc<PropertySubset>, filters: &[Filter]) -> Result<Hasse, ClassifierError> {
    let order = Poset::from_predicate(filters.len(), |a, b| filters[a].members().is_subset(filters[b].members()))
        .map_err(|e: PosetError| ClassifierError::Poset(e))?;
    let nodes = filters.iter().map(Filter::label).collect();
    Ok(Hasse::new(format!("P_III {} n={}", context.name(), context.lattice().n()), nodes, &order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_n3() {
        let lattice = PartitionLattice::new(3).unwrap();
        let hasse = partition_hasse(&lattice);
        assert_eq!(hasse.nodes.len(), 5);
        assert_eq!(hasse.edges, vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        let dot = hasse.to_dot();
        assert!(dot.contains("n1 [label=\"12|3\"];"));
        assert_eq!(dot.matches("->").count(), 6);
    }

    #[test]
    fn level_one_n2_is_a_chain() {
        let hasse = partition_hasse(&PartitionLattice::new(2).unwrap());
        assert_eq!(hasse.nodes, vec!["1|2", "12"]);
        assert_eq!(hasse.edges, vec![(0, 1)]);
    }
}
