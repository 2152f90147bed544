//! Materialized graph generations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node identifier within a materialized snapshot.
///
/// Ids are stable across evolution: the nodes of level `t` keep their ids
/// in every later level, and the clones of a step occupy the next block of
/// ids in colex order of their parent subsets.
pub type NodeId = u32;

/// Where a node came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeRef {
    /// A node of the seed graph.
    Original { index: usize },
    /// A node added at `level`, adjacent to exactly `parents` at birth.
    Clone { level: usize, parents: Vec<NodeId> },
}

/// A fully materialized generation: simple undirected graph plus
/// per-node provenance.
///
/// Immutable once built; evolution produces a fresh snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSnapshot {
    level: usize,
    /// Sorted neighbor list per node.
    adjacency: Vec<Vec<NodeId>>,
    provenance: Vec<NodeRef>,
    edge_count: u64,
}

impl GraphSnapshot {
    /// Level-0 snapshot from an explicit edge list.
    ///
    /// Rejects self-loops, duplicate edges, and endpoints outside `0..n`.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Seed("graph must have at least one node".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Seed(format!("self-loop at node {u}")));
            }
            let (u, v) = (u as usize, v as usize);
            if u >= n || v >= n {
                return Err(Error::Seed(format!(
                    "edge ({u}, {v}) outside node range 0..{n}"
                )));
            }
            if adjacency[u].contains(&(v as NodeId)) {
                return Err(Error::Seed(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u].push(v as NodeId);
            adjacency[v].push(u as NodeId);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(GraphSnapshot {
            level: 0,
            adjacency,
            provenance: (0..n).map(|index| NodeRef::Original { index }).collect(),
            edge_count: edges.len() as u64,
        })
    }

    /// Used by evolution, which constructs the parts directly.
    pub(crate) fn from_parts(
        level: usize,
        adjacency: Vec<Vec<NodeId>>,
        provenance: Vec<NodeRef>,
        edge_count: u64,
    ) -> Self {
        debug_assert_eq!(adjacency.len(), provenance.len());
        GraphSnapshot {
            level,
            adjacency,
            provenance,
            edge_count,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn provenance(&self, v: NodeId) -> &NodeRef {
        &self.provenance[v as usize]
    }

    /// All edges as ordered pairs `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            let u = u as NodeId;
            nbrs.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Id of the first node added at this snapshot's own level, i.e. the
    /// node count of the previous level. `None` for level-0 snapshots.
    pub fn first_clone_of_level(&self) -> Option<NodeId> {
        if self.level == 0 {
            return None;
        }
        self.provenance
            .iter()
            .position(|p| matches!(p, NodeRef::Clone { level, .. } if *level == self.level))
            .map(|i| i as NodeId)
    }

    /// Checks the structural invariants: symmetry, sortedness, no
    /// self-loops, consistent edge count, clone provenance matching
    /// adjacency. Intended for snapshots loaded from external files.
    pub fn validate(&self) -> Result<()> {
        if self.adjacency.is_empty() {
            return Err(Error::Seed("graph must have at least one node".into()));
        }
        if self.adjacency.len() != self.provenance.len() {
            return Err(Error::Seed("provenance length mismatch".into()));
        }
        let n = self.adjacency.len() as NodeId;
        let mut half_edges = 0u64;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            let u = u as NodeId;
            if !nbrs.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Seed(format!("neighbors of {u} not sorted/unique")));
            }
            for &v in nbrs {
                if v >= n {
                    return Err(Error::Seed(format!("node {u} links to missing {v}")));
                }
                if v == u {
                    return Err(Error::Seed(format!("self-loop at node {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::Seed(format!("edge ({u}, {v}) not symmetric")));
                }
            }
            half_edges += nbrs.len() as u64;
        }
        if half_edges != 2 * self.edge_count {
            return Err(Error::Seed("edge count inconsistent with adjacency".into()));
        }
        for (v, p) in self.provenance.iter().enumerate() {
            if let NodeRef::Clone { level, parents } = p {
                if *level == self.level && parents != &self.adjacency[v] {
                    return Err(Error::Seed(format!(
                        "clone {v} adjacency differs from its parent subset"
                    )));
                }
                if *level > self.level || *level == 0 {
                    return Err(Error::Seed(format!("clone {v} has bad level {level}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_builds_sorted_symmetric() {
        let g = GraphSnapshot::from_edges(4, &[(2, 0), (0, 1), (2, 3)]).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert!(g.has_edge(3, 2));
        assert!(!g.has_edge(1, 3));
        g.validate().unwrap();
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(GraphSnapshot::from_edges(0, &[]).is_err());
        assert!(GraphSnapshot::from_edges(2, &[(0, 0)]).is_err());
        assert!(GraphSnapshot::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(GraphSnapshot::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn edges_iterates_ascending() {
        let g = GraphSnapshot::from_edges(4, &[(2, 3), (0, 1)]).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (2, 3)]);
    }
}
